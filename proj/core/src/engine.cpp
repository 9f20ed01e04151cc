#include "lvn/engine.hpp"

#include <algorithm>
#include <cmath>

namespace lvn {

namespace {

const Complex kImag(0.0, 1.0);

Matrix phase_diagonal(const Eigen::VectorXd& lam, double t) {
    Matrix d = Matrix::Zero(lam.size(), lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        d(i, i) = std::exp(-kImag * lam(i) * t);
    return d;
}

// Dom-H evidence for a bare matrix: diagnose its zero extension on a ladder
// reaching past the native dimension, where the series plateaus for anything
// that commutator-maps into the space. A fixed truncation is finite-rank, so
// this normally reports convergent evidence; it exists so rk4 always runs
// some preflight. Model-aware callers pass their own verdict instead.
Classification explicit_preflight(const HamiltonianModel& h, const TruncatedMatrix& a) {
    const int d = a.dim();
    std::vector<int> dims;
    double pad = 2.0;
    if (8 * d <= 2048) {
        dims = {d, 2 * d, 4 * d, 8 * d};
    } else {
        dims = {d, d + 32, d + 64, d + 96};
        pad = 1.0;
    }
    TruncationLadder ladder{dims, pad};
    const auto series = partial_sums(h, OperatorModel::explicit_matrix(a), Quantity::comm(), ladder);
    return classify(series, Tolerances{}).classification;
}

void require_preflight(const HamiltonianModel& h, const TruncatedMatrix& a,
                       const std::optional<Classification>& supplied, bool force,
                       Classification& out) {
    out = supplied ? *supplied : explicit_preflight(h, a);
    if (!force && out == Classification::DivergentEvidence)
        throw PreflightError(
            "Dom-H preflight reports divergent evidence for the initial operator; "
            "pass force to override",
            "comm");
}

} // namespace

std::string to_string(EvolveMethod m) {
    switch (m) {
        case EvolveMethod::SpectralExact: return "spectral-exact";
        case EvolveMethod::VectorizedExpm: return "vectorized-expm";
        case EvolveMethod::Rk4: return "rk4";
    }
    return "?";
}

std::optional<EvolveMethod> evolve_method_from_string(std::string_view name) {
    if (name == "spectral-exact") return EvolveMethod::SpectralExact;
    if (name == "vectorized-expm") return EvolveMethod::VectorizedExpm;
    if (name == "rk4") return EvolveMethod::Rk4;
    return std::nullopt;
}

Propagator Propagator::make(const HamiltonianModel& h, int dim) {
    Propagator p;
    if (h.is_diagonal()) {
        p.eigenvalues_ = h.diagonal_sequence(dim);
        p.eigenvectors_ = Matrix::Identity(dim, dim);
        p.diagonal_ = true;
        return p;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.realize(dim).entries());
    p.eigenvalues_ = es.eigenvalues();
    p.eigenvectors_ = es.eigenvectors();
    return p;
}

Matrix Propagator::unitary(double t) const {
    if (diagonal_) return phase_diagonal(eigenvalues_, t);
    return eigenvectors_ * phase_diagonal(eigenvalues_, t) * eigenvectors_.adjoint();
}

TruncatedMatrix Propagator::apply(double t, const TruncatedMatrix& a) const {
    if (a.dim() != dim())
        throw ShapeError("superpropagator dimension mismatch: " + std::to_string(dim()) +
                         " vs " + std::to_string(a.dim()));
    if (t == 0.0) return a;
    if (diagonal_) {
        Matrix out = a.entries();
        for (Eigen::Index n = 0; n < out.cols(); ++n)
            for (Eigen::Index m = 0; m < out.rows(); ++m)
                out(m, n) *= std::exp(-kImag * (eigenvalues_(m) - eigenvalues_(n)) * t);
        return TruncatedMatrix(std::move(out), a.pad_dim());
    }
    const Matrix u = unitary(t);
    return TruncatedMatrix(u * a.entries() * u.adjoint(), a.pad_dim());
}

DensityMatrix Propagator::apply(double t, const DensityMatrix& rho) const {
    return DensityMatrix(apply(t, rho.base()), rho.trace_tolerance());
}

TruncatedMatrix commutator_apply(const HamiltonianModel& h, const TruncatedMatrix& a, int pad) {
    const int n = a.dim();
    if (h.is_diagonal()) {
        const Eigen::VectorXd lam = h.diagonal_sequence(n);
        Matrix out = a.entries();
        for (Eigen::Index col = 0; col < n; ++col)
            for (Eigen::Index row = 0; row < n; ++row)
                out(row, col) *= lam(row) - lam(col);
        return TruncatedMatrix(std::move(out), n);
    }
    const int m = pad == 0 ? 2 * n : pad;
    if (m < n) throw ShapeError("pad dimension must be >= a.dim");
    const Matrix hm = h.realize(m).entries();
    Matrix padded = Matrix::Zero(m, m);
    padded.topLeftCorner(n, n) = a.entries();
    const Matrix comm = hm * padded - padded * hm;
    return TruncatedMatrix(comm.topLeftCorner(n, n), m);
}

TruncatedMatrix liouvillian_squared_apply(const HamiltonianModel& h, const TruncatedMatrix& a,
                                          int pad) {
    const int n = a.dim();
    if (h.is_diagonal()) {
        const Eigen::VectorXd lam = h.diagonal_sequence(n);
        Matrix out = a.entries();
        for (Eigen::Index col = 0; col < n; ++col)
            for (Eigen::Index row = 0; row < n; ++row) {
                const double d = lam(row) - lam(col);
                out(row, col) *= d * d;
            }
        return TruncatedMatrix(std::move(out), n);
    }
    const int m = pad == 0 ? 2 * n : pad;
    if (m < n) throw ShapeError("pad dimension must be >= a.dim");
    const Matrix hm = h.realize(m).entries();
    Matrix padded = Matrix::Zero(m, m);
    padded.topLeftCorner(n, n) = a.entries();
    const Matrix c1 = hm * padded - padded * hm;
    const Matrix c2 = hm * c1 - c1 * hm;
    return TruncatedMatrix(c2.topLeftCorner(n, n), m);
}

Vector vec(const TruncatedMatrix& a) {
    return Eigen::Map<const Vector>(a.entries().data(), a.dim() * a.dim());
}

TruncatedMatrix unvec(const Vector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim)
        throw ShapeError("unvec size mismatch");
    return TruncatedMatrix(Eigen::Map<const Matrix>(v.data(), dim, dim));
}

VectorizedLiouvillian VectorizedLiouvillian::build(const HamiltonianModel& h, int dim,
                                                   double budget_mb) {
    const double bytes = 16.0 * std::pow(static_cast<double>(dim), 4);
    if (bytes > budget_mb * 1024.0 * 1024.0)
        throw ResourceError("vectorized Liouvillian at N = " + std::to_string(dim) +
                            " needs " + std::to_string(bytes / (1024.0 * 1024.0)) +
                            " MiB, over the " + std::to_string(budget_mb) + " MiB budget");
    const Matrix hm = h.realize(dim).entries();
    const int nn = dim * dim;
    Matrix l = Matrix::Zero(nn, nn);
    // I kron H: block-diagonal copies of H
    for (int c = 0; c < dim; ++c)
        l.block(c * dim, c * dim, dim, dim) = hm;
    // minus conj(H) kron I
    for (int c1 = 0; c1 < dim; ++c1)
        for (int c2 = 0; c2 < dim; ++c2) {
            const Complex w = std::conj(hm(c1, c2));
            for (int r = 0; r < dim; ++r) l(c1 * dim + r, c2 * dim + r) -= w;
        }
    VectorizedLiouvillian out;
    out.dim_ = dim;
    out.matrix_ = std::move(l);
    return out;
}

TruncatedMatrix VectorizedLiouvillian::apply(const TruncatedMatrix& a) const {
    if (a.dim() != dim_) throw ShapeError("vectorized Liouvillian dimension mismatch");
    return unvec(matrix_ * vec(a), dim_);
}

EvolutionTrajectory evolve(const HamiltonianModel& h, const TruncatedMatrix& a0,
                           const std::vector<double>& times, const EvolveOptions& opts) {
    if (times.empty() || times.front() != 0.0)
        throw ShapeError("evolution times must start at t = 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw ShapeError("evolution times must be strictly increasing");

    EvolutionTrajectory traj;
    traj.method = opts.method;
    traj.preflight = Classification::Inconclusive;

    if (opts.method == EvolveMethod::Rk4) {
        if (opts.rk4_step <= 0.0) throw ShapeError("rk4 step size must be positive");
        traj.rk4_step = opts.rk4_step;
        require_preflight(h, a0, opts.preflight_dom_H, opts.force, traj.preflight);
    } else if (opts.preflight_dom_H) {
        traj.preflight = *opts.preflight_dom_H;
        if (!opts.force && traj.preflight == Classification::DivergentEvidence)
            throw PreflightError(
                "Dom-H preflight reports divergent evidence for the initial operator; "
                "pass force to override",
                "comm");
    }

    traj.times = times;
    traj.states.reserve(times.size());

    switch (opts.method) {
        case EvolveMethod::SpectralExact: {
            const Propagator p = Propagator::make(h, a0.dim());
            for (const double t : times) traj.states.push_back(p.apply(t, a0));
            break;
        }
        case EvolveMethod::VectorizedExpm: {
            const auto liou = VectorizedLiouvillian::build(h, a0.dim(), opts.budget_mb);
            Eigen::SelfAdjointEigenSolver<Matrix> es(liou.matrix());
            const Vector v0 = es.eigenvectors().adjoint() * vec(a0);
            for (const double t : times) {
                Vector phased(v0.size());
                for (Eigen::Index i = 0; i < v0.size(); ++i)
                    phased(i) = std::exp(-kImag * es.eigenvalues()(i) * t) * v0(i);
                traj.states.push_back(unvec(es.eigenvectors() * phased, a0.dim()));
            }
            break;
        }
        case EvolveMethod::Rk4: {
            const Matrix hm = h.realize(a0.dim()).entries();
            const auto rhs = [&hm](const Matrix& a) -> Matrix {
                return -kImag * (hm * a - a * hm);
            };
            Matrix state = a0.entries();
            traj.states.push_back(a0);
            for (std::size_t i = 1; i < times.size(); ++i) {
                const double span = times[i] - times[i - 1];
                const int steps = std::max(1, static_cast<int>(std::ceil(span / opts.rk4_step)));
                const double dt = span / steps;
                for (int s = 0; s < steps; ++s) {
                    const Matrix k1 = rhs(state);
                    const Matrix k2 = rhs(state + 0.5 * dt * k1);
                    const Matrix k3 = rhs(state + 0.5 * dt * k2);
                    const Matrix k4 = rhs(state + dt * k3);
                    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                traj.states.push_back(TruncatedMatrix(state, a0.pad_dim()));
            }
            break;
        }
    }

    const double norm0 = hs_norm(a0);
    const Complex trace0 = a0.entries().trace();
    for (const auto& state : traj.states) {
        traj.hs_norm_drift.push_back(std::abs(hs_norm(state) - norm0));
        traj.trace_drift.push_back(std::abs(state.entries().trace() - trace0));
    }
    return traj;
}

StoneProbe stone_probe(const HamiltonianModel& h, const TruncatedMatrix& a,
                       std::vector<double> t_ladder, const ProbeOptions& opts) {
    if (t_ladder.empty()) throw ShapeError("stone_probe needs a nonempty t ladder");
    for (const double t : t_ladder)
        if (t <= 0.0) throw ShapeError("stone_probe t values must be positive");
    std::sort(t_ladder.begin(), t_ladder.end(), std::greater<>());

    Classification preflight;
    require_preflight(h, a, opts.preflight_dom_H, opts.force, preflight);

    const Propagator p = Propagator::make(h, a.dim());
    const TruncatedMatrix comm = commutator_apply(h, a);

    StoneProbe probe;
    const double floor = 1e-14 * (hs_norm(comm) + hs_norm(a) + 1.0);
    for (const double t : t_ladder) {
        const Matrix quotient =
            kImag * (p.apply(t, a).entries() - a.entries()) / t - comm.entries();
        probe.ts.push_back(t);
        probe.residuals.push_back(quotient.norm());
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < probe.ts.size(); ++i)
        if (probe.residuals[i] > floor) {
            xs.push_back(std::log(probe.ts[i]));
            ys.push_back(std::log(probe.residuals[i]));
        }
    if (xs.size() < 2) {
        probe.commuting = true;
        return probe;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    if (den > 0) probe.slope = num / den;
    return probe;
}

CourbageProbe courbage_probe(const HamiltonianModel& h, const TruncatedMatrix& a,
                             const std::vector<double>& t_grid, const ProbeOptions& opts) {
    if (t_grid.empty()) throw ShapeError("courbage_probe needs a nonempty t grid");

    Classification preflight;
    require_preflight(h, a, opts.preflight_dom_H, opts.force, preflight);

    const Propagator p = Propagator::make(h, a.dim());
    CourbageProbe probe;
    probe.bound = hs_norm(commutator_apply(h, a));
    for (const double t : t_grid) {
        if (t == 0.0) throw ShapeError("courbage_probe t values must be nonzero");
        const double lhs = (p.apply(t, a).entries() - a.entries()).norm();
        const double ratio = probe.bound == 0.0 ? 0.0 : lhs / (std::abs(t) * probe.bound);
        probe.ts.push_back(t);
        probe.ratios.push_back(ratio);
        probe.max_ratio = std::max(probe.max_ratio, ratio);
    }
    return probe;
}

} // namespace lvn
