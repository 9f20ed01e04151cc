#include "lvn/diagnostics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace lvn {

namespace {

constexpr double kTiny = 1e-300;

double sq(double x) { return x * x; }

int classification_rank(Classification c) {
    switch (c) {
        case Classification::ConvergentEvidence: return 0;
        case Classification::Inconclusive: return 1;
        case Classification::DivergentEvidence: return 2;
    }
    return 1;
}

} // namespace

Classification combine_worst(Classification a, Classification b) {
    return classification_rank(a) >= classification_rank(b) ? a : b;
}

TruncationLadder TruncationLadder::defaults() {
    return {{16, 24, 32, 48, 64, 96, 128, 192, 256}, 2.0};
}

TruncationLadder TruncationLadder::up_to(int top) {
    TruncationLadder l = defaults();
    std::erase_if(l.dims, [top](int d) { return d > top; });
    if (l.dims.empty() || l.dims.back() != top) l.dims.push_back(top);
    l.validate();
    return l;
}

void TruncationLadder::validate() const {
    if (dims.size() < 4)
        throw ShapeError("truncation ladder needs at least 4 points, got " +
                         std::to_string(dims.size()));
    if (dims.front() < 1) throw ShapeError("ladder dimensions must be positive");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1]) throw ShapeError("ladder dimensions must be strictly increasing");
    if (pad_factor < 1.0) throw ShapeError("pad_factor must be >= 1");
    // dense realizations at ceil(pad * top); keep them desk-sized
    const double padded_top = pad_factor * dims.back();
    if (padded_top > 4096.0)
        throw ShapeError("padded ladder top " + std::to_string(static_cast<int>(padded_top)) +
                         " exceeds the 4096 dense-realization cap");
}

std::string Quantity::tag() const {
    switch (kind) {
        case Kind::Comm: return "comm";
        case Kind::Left: return "left";
        case Kind::Right: return "right";
        case Kind::DoubleComm: return "double-comm";
        case Kind::Column: return "column:" + std::to_string(column);
        case Kind::CommColumn: return "comm-column:" + std::to_string(column);
        case Kind::VectorDomain: return "vector";
    }
    return "?";
}

namespace {

void check_monotone(const std::vector<double>& values) {
    for (std::size_t i = 1; i < values.size(); ++i)
        assert(values[i] >= values[i - 1] - 1e-10 * std::max(values[i - 1], 1.0) &&
               "partial-sum series must be nondecreasing");
}

PartialSumSeries diagonal_partial_sums(const HamiltonianModel& h, const OperatorModel& a,
                                       Quantity q, const TruncationLadder& ladder) {
    const int top = ladder.top();
    const Eigen::VectorXd lam = h.diagonal_sequence(top);
    const Matrix A = a.realize(top).entries();

    PartialSumSeries out{ladder, q, "spec", {}};
    out.values.reserve(ladder.dims.size());
    for (const int N : ladder.dims) {
        double s = 0.0;
        switch (q.kind) {
            case Quantity::Kind::Column: {
                const int j = q.column - 1;
                for (int m = 0; m < N; ++m) s += sq(lam(m)) * std::norm(A(m, j));
                break;
            }
            case Quantity::Kind::CommColumn: {
                const int j = q.column - 1;
                for (int m = 0; m < N; ++m)
                    s += sq(lam(m)) * sq(lam(m) - lam(j)) * std::norm(A(m, j));
                break;
            }
            case Quantity::Kind::Right:
                for (int n = 0; n < N; ++n)
                    for (int m = 0; m < N; ++m) s += sq(lam(m)) * std::norm(A(n, m));
                break;
            default:
                for (int n = 0; n < N; ++n)
                    for (int m = 0; m < N; ++m) {
                        double w = 0.0;
                        if (q.kind == Quantity::Kind::Comm) w = sq(lam(m) - lam(n));
                        else if (q.kind == Quantity::Kind::Left) w = sq(lam(m));
                        else w = sq(sq(lam(m) - lam(n))); // double-comm
                        s += w * std::norm(A(m, n));
                    }
        }
        out.values.push_back(s);
    }
    check_monotone(out.values);
    return out;
}

PartialSumSeries padded_partial_sums(const HamiltonianModel& h, const OperatorModel& a,
                                     Quantity q, const TruncationLadder& ladder) {
    const int top = ladder.top();
    const int mtop = static_cast<int>(std::ceil(ladder.pad_factor * top));
    const Matrix H = h.realize(mtop).entries();
    const Matrix A = a.realize(mtop).entries();

    Matrix Q;
    switch (q.kind) {
        case Quantity::Kind::Comm:
            Q = H * A - A * H;
            break;
        case Quantity::Kind::Left:
        case Quantity::Kind::Column:
            Q = H * A;
            break;
        case Quantity::Kind::Right:
            Q = H * A.adjoint();
            break;
        case Quantity::Kind::DoubleComm: {
            const Matrix C = H * A - A * H;
            Q = H * C - C * H;
            break;
        }
        case Quantity::Kind::CommColumn: {
            const Matrix C = H * A - A * H;
            Q = H * C;
            break;
        }
        default:
            throw ShapeError("unsupported quantity for partial_sums");
    }

    PartialSumSeries out{ladder, q, "spec", {}};
    out.values.reserve(ladder.dims.size());
    for (const int N : ladder.dims) {
        const int rows = std::min(mtop, static_cast<int>(std::ceil(ladder.pad_factor * N)));
        double s = 0.0;
        if (q.kind == Quantity::Kind::Column || q.kind == Quantity::Kind::CommColumn) {
            const int j = q.column - 1;
            for (int m = 0; m < rows; ++m) s += std::norm(Q(m, j));
        } else {
            s = Q.topLeftCorner(rows, N).squaredNorm();
        }
        out.values.push_back(s);
    }
    check_monotone(out.values);
    return out;
}

} // namespace

PartialSumSeries partial_sums(const HamiltonianModel& h, const OperatorModel& a, Quantity q,
                              const TruncationLadder& ladder) {
    ladder.validate();
    if (q.kind == Quantity::Kind::VectorDomain)
        throw ShapeError("vector-domain series come from the core-D0 check, not partial_sums");
    if ((q.kind == Quantity::Kind::Column || q.kind == Quantity::Kind::CommColumn) &&
        (q.column < 1 || q.column > ladder.dims.front()))
        throw ShapeError("probe column must lie in 1..N_1");
    if (a.kind() == OperatorModel::Kind::Gibbs) {
        // the partition sum must have converged at the ladder top, or the
        // truncated normalization poisons every series
        const int top = ladder.top();
        const double z = a.partition_sum(top);
        const double incr = top > 1 ? (z - a.partition_sum(top - 1)) / z : 1.0;
        if (incr >= 1e-12)
            throw EvalError("gibbs partition sum not converged on this ladder (relative "
                            "increment " +
                                std::to_string(incr) + " at the top, needs < 1e-12)",
                            "N=" + std::to_string(top));
    }
    return h.is_diagonal() ? diagonal_partial_sums(h, a, q, ladder)
                           : padded_partial_sums(h, a, q, ladder);
}

namespace {

struct Fit {
    GrowthModel model = GrowthModel::Bounded;
    bool divergent = false;
    double amplitude = 0.0; // b
    double gamma = 0.0;
    double offset = 0.0;    // c (convergent limit) or a (log)
    double residual = std::numeric_limits<double>::infinity();
    bool qualified = false; // divergent fit with non-negligible predicted growth
};

double rel_rms(const std::vector<double>& s, const std::vector<double>& shat, double scale) {
    double sse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sse += sq(s[i] - shat[i]);
    return std::sqrt(sse / static_cast<double>(s.size())) / std::max(scale, kTiny);
}

// least squares for y ~ c0 * col0 + c1 * col1
bool ls2(const std::vector<double>& col0, const std::vector<double>& col1,
         const std::vector<double>& y, double& c0, double& c1) {
    double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        a00 += col0[i] * col0[i];
        a01 += col0[i] * col1[i];
        a11 += col1[i] * col1[i];
        b0 += col0[i] * y[i];
        b1 += col1[i] * y[i];
    }
    const double det = a00 * a11 - a01 * a01;
    if (std::abs(det) < 1e-30 * std::max(a00 * a11, 1.0)) return false;
    c0 = (a11 * b0 - a01 * b1) / det;
    c1 = (a00 * b1 - a01 * b0) / det;
    return true;
}

Fit fit_convergent(const std::vector<double>& n, const std::vector<double>& s, double scale) {
    Fit best;
    best.model = GrowthModel::Bounded;
    std::vector<double> ones(n.size(), 1.0), basis(n.size()), shat(n.size());
    for (int gi = 0; gi < 120; ++gi) {
        const double gamma = std::exp(std::log(0.02) +
                                      (std::log(8.0) - std::log(0.02)) * gi / 119.0);
        for (std::size_t i = 0; i < n.size(); ++i) basis[i] = -std::pow(n[i], -gamma);
        double c = 0, b = 0;
        if (!ls2(ones, basis, s, c, b)) continue;
        for (std::size_t i = 0; i < n.size(); ++i) shat[i] = c + b * basis[i];
        const double r = rel_rms(s, shat, scale);
        if (r < best.residual) {
            best.residual = r;
            best.offset = c;
            best.amplitude = b;
            best.gamma = gamma;
        }
    }
    return best;
}

Fit fit_log(const std::vector<double>& n, const std::vector<double>& s, double scale,
            double growth_floor) {
    Fit f;
    f.model = GrowthModel::Log;
    f.divergent = true;
    std::vector<double> ones(n.size(), 1.0), logs(n.size()), shat(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) logs[i] = std::log(n[i]);
    double a = 0, b = 0;
    if (!ls2(ones, logs, s, a, b)) return f;
    for (std::size_t i = 0; i < n.size(); ++i) shat[i] = a + b * logs[i];
    f.residual = rel_rms(s, shat, scale);
    f.offset = a;
    f.amplitude = b;
    f.qualified = b * (logs.back() - logs.front()) >= growth_floor * scale;
    return f;
}

Fit fit_power(const std::vector<double>& n, const std::vector<double>& s, double scale,
              double growth_floor) {
    Fit f;
    f.model = GrowthModel::Power;
    f.divergent = true;
    for (const double v : s)
        if (v <= 0.0) return f;
    std::vector<double> ones(n.size(), 1.0), x(n.size()), y(n.size()), shat(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        x[i] = std::log(n[i]);
        y[i] = std::log(s[i]);
    }
    double lnb = 0, gamma = 0;
    if (!ls2(ones, x, y, lnb, gamma)) return f;
    f.gamma = gamma;
    f.amplitude = std::exp(lnb);
    for (std::size_t i = 0; i < n.size(); ++i) shat[i] = f.amplitude * std::pow(n[i], gamma);
    f.residual = rel_rms(s, shat, scale);
    f.qualified = gamma > 0.01 &&
                  f.amplitude * (std::pow(n.back(), gamma) - std::pow(n.front(), gamma)) >=
                      growth_floor * scale;
    return f;
}

Fit fit_linear(const std::vector<double>& n, const std::vector<double>& s, double scale,
               double growth_floor) {
    Fit f;
    f.model = GrowthModel::Linear;
    f.divergent = true;
    f.gamma = 1.0;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        num += n[i] * s[i];
        den += n[i] * n[i];
    }
    if (den <= 0.0) return f;
    const double b = num / den;
    std::vector<double> shat(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) shat[i] = b * n[i];
    f.residual = rel_rms(s, shat, scale);
    f.amplitude = b;
    f.qualified = b > 0.0 && b * (n.back() - n.front()) >= growth_floor * scale;
    return f;
}

} // namespace

DomainVerdict classify(const PartialSumSeries& series, const Tolerances& tol) {
    const std::size_t k = series.values.size();
    if (k < 4) throw ShapeError("classify needs at least 4 ladder points");
    if (series.values.size() != series.ladder.dims.size())
        throw ShapeError("series length does not match its ladder");

    DomainVerdict v;
    v.series = series;

    bool all_zero = true;
    for (const double s : series.values)
        if (s != 0.0) { all_zero = false; break; }
    if (all_zero) {
        v.classification = Classification::ConvergentEvidence;
        v.limit_estimate = 0.0;
        v.growth_model = GrowthModel::Bounded;
        return v;
    }

    const std::size_t w = std::max<std::size_t>(4, k - 2);
    const std::size_t first = k - w;
    std::vector<double> n(w), s(w);
    for (std::size_t i = 0; i < w; ++i) {
        n[i] = static_cast<double>(series.ladder.dims[first + i]);
        s[i] = series.values[first + i];
    }
    const double scale = std::max(std::abs(s.back()), kTiny);

    // plateau: window already flat to roundoff
    const auto [mn_it, mx_it] = std::minmax_element(s.begin(), s.end());
    if (*mx_it - *mn_it <= 1e-12 * scale) {
        v.classification = Classification::ConvergentEvidence;
        v.limit_estimate = series.values.back();
        v.growth_model = GrowthModel::Bounded;
        return v;
    }

    const double rel_incr = (series.values[k - 1] - series.values[k - 2]) /
                            std::max(std::abs(series.values[k - 1]), kTiny);
    const double growth_floor = 10.0 * tol.conv_tol;

    const Fit conv = fit_convergent(n, s, scale);
    const Fit candidates[] = {fit_linear(n, s, scale, growth_floor),
                              fit_power(n, s, scale, growth_floor),
                              fit_log(n, s, scale, growth_floor)};
    const Fit* best_div = nullptr;
    for (const Fit& f : candidates)
        if (f.qualified && std::isfinite(f.residual) && (!best_div || f.residual < best_div->residual))
            best_div = &f;

    auto fill_from = [&](const Fit& f) {
        v.growth_model = f.model;
        v.gamma = f.gamma;
        v.slope_b = f.amplitude;
        v.fit_residual = f.residual;
        if (f.model == GrowthModel::Power && f.gamma >= 0.8 && f.gamma <= 1.3)
            v.growth_model = GrowthModel::Linear; // asymptotically-linear window exponent
    };

    if (best_div) {
        const double margin = std::abs(conv.residual - best_div->residual) /
                              std::max({conv.residual, best_div->residual, kTiny});
        if (margin < 0.25) {
            v.classification = Classification::Inconclusive;
            if (conv.residual <= best_div->residual) {
                v.growth_model = GrowthModel::Bounded;
                v.fit_residual = conv.residual;
                v.limit_estimate = conv.offset;
            } else {
                fill_from(*best_div);
            }
            return v;
        }
        if (best_div->residual < conv.residual) {
            if (best_div->residual < tol.fit_tol) {
                v.classification = Classification::DivergentEvidence;
                fill_from(*best_div);
            } else {
                v.classification = Classification::Inconclusive;
                fill_from(*best_div);
            }
            return v;
        }
    }

    // convergent-class winner
    v.growth_model = GrowthModel::Bounded;
    v.fit_residual = conv.residual;
    v.limit_estimate = conv.offset;
    v.gamma = conv.gamma;
    v.slope_b = conv.amplitude;
    v.classification = rel_incr < tol.conv_tol ? Classification::ConvergentEvidence
                                               : Classification::Inconclusive;
    return v;
}

namespace {

PartialSumSeries vector_domain_series(const HamiltonianModel& h, const dsl::ExprPtr& vec,
                                      const TruncationLadder& ladder) {
    const int top = ladder.top();
    PartialSumSeries out{ladder, Quantity{Quantity::Kind::VectorDomain, 0}, "spec", {}};
    if (h.is_diagonal()) {
        const Eigen::VectorXd lam = h.diagonal_sequence(top);
        std::vector<double> terms(top);
        for (int n = 1; n <= top; ++n) {
            const double vn = dsl::eval(vec, dsl::EvalContext::over_n(n));
            terms[n - 1] = sq(lam(n - 1)) * sq(vn);
        }
        for (const int N : ladder.dims) {
            double s = 0.0;
            for (int n = 0; n < N; ++n) s += terms[n];
            out.values.push_back(s);
        }
    } else {
        const int mtop = static_cast<int>(std::ceil(ladder.pad_factor * top));
        const Matrix H = h.realize(mtop).entries();
        Vector v(mtop);
        for (int n = 1; n <= mtop; ++n)
            v(n - 1) = dsl::eval(vec, dsl::EvalContext::over_n(n));
        const Vector hv = H * v;
        for (const int N : ladder.dims) {
            const int rows = std::min(mtop, static_cast<int>(std::ceil(ladder.pad_factor * N)));
            double s = 0.0;
            for (int m = 0; m < rows; ++m) s += std::norm(hv(m));
            out.values.push_back(s);
        }
    }
    check_monotone(out.values);
    return out;
}

const DomainVerdict& worst_verdict(const std::vector<DomainVerdict>& verdicts) {
    const DomainVerdict* worst = &verdicts.front();
    for (const auto& v : verdicts)
        if (classification_rank(v.classification) > classification_rank(worst->classification))
            worst = &v;
    return *worst;
}

void cap_claim(Classification& c, const std::string& field, MembershipReport& r) {
    if (c == Classification::ConvergentEvidence) {
        c = Classification::Inconclusive;
        r.caveats.push_back("set ordering D0 in D in Dom H: " + field +
                            " downgraded from convergent to inconclusive");
    }
}

} // namespace

MembershipReport diagnose(const HamiltonianModel& h, const OperatorModel& a,
                          const TruncationLadder& ladder, const Tolerances& tol,
                          const DiagnoseOptions& opts) {
    ladder.validate();
    MembershipReport r;
    r.ladder = ladder;
    r.tolerances = tol;

    std::vector<int> cols;
    if (opts.exhaustive_columns) {
        for (int j = 1; j <= ladder.dims.front(); ++j) cols.push_back(j);
    } else {
        for (int j = 1; j <= ladder.dims.front(); j *= 2) cols.push_back(j);
    }

    for (const int j : cols)
        r.invariance_columns.push_back(
            classify(partial_sums(h, a, Quantity::column_probe(j), ladder), tol));
    r.invariance = worst_verdict(r.invariance_columns);

    r.dom_H = classify(partial_sums(h, a, Quantity::comm(), ladder), tol);
    r.core_D_left = classify(partial_sums(h, a, Quantity::left(), ladder), tol);
    r.core_D_right = classify(partial_sums(h, a, Quantity::right(), ladder), tol);

    if (r.core_D_left.classification == Classification::DivergentEvidence ||
        r.core_D_right.classification == Classification::DivergentEvidence)
        r.core_D = Classification::DivergentEvidence;
    else if (r.core_D_left.classification == Classification::ConvergentEvidence &&
             r.core_D_right.classification == Classification::ConvergentEvidence)
        r.core_D = Classification::ConvergentEvidence;
    else
        r.core_D = Classification::Inconclusive;

    r.double_comm = classify(partial_sums(h, a, Quantity::double_comm(), ladder), tol);
    for (const int j : cols)
        r.comm_invariance_columns.push_back(
            classify(partial_sums(h, a, Quantity{Quantity::Kind::CommColumn, j}, ladder), tol));

    Classification ci = Classification::ConvergentEvidence;
    for (const auto& v : r.comm_invariance_columns) ci = combine_worst(ci, v.classification);
    r.dom_H2 = combine_worst(combine_worst(r.dom_H.classification, r.double_comm.classification), ci);

    if (a.kind() == OperatorModel::Kind::RankSum) {
        bool all_conv = true, any_div = false;
        int idx = 1;
        for (const auto& term : a.rank_terms()) {
            const std::pair<std::string, dsl::ExprPtr> vecs[] = {
                {"psi[" + std::to_string(idx) + "]", term.psi},
                {"phi[" + std::to_string(idx) + "]", term.phi}};
            for (const auto& [which, expr] : vecs) {
                DomainVerdict v = classify(vector_domain_series(h, expr, ladder), tol);
                all_conv = all_conv && v.classification == Classification::ConvergentEvidence;
                any_div = any_div || v.classification == Classification::DivergentEvidence;
                r.core_D0_vectors.push_back({which, std::move(v)});
            }
            ++idx;
        }
        r.core_D0_structural = all_conv;
        r.core_D0 = all_conv ? Classification::ConvergentEvidence
                             : (any_div ? Classification::DivergentEvidence
                                        : Classification::Inconclusive);
    } else {
        r.core_D0_structural = false;
        r.core_D0 = Classification::Inconclusive;
        r.caveats.push_back(
            "core D0 is a structural check for rank-sum inputs; not claimable for kind '" +
            std::string(a.descriptor()) + "'");
    }

    if (!h.is_diagonal()) {
        const int mtop = static_cast<int>(std::ceil(ladder.pad_factor * ladder.top()));
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.realize(mtop).entries());
        const Eigen::VectorXd lam = es.eigenvalues();
        const Matrix rotated = es.eigenvectors().adjoint() * a.realize(mtop).entries() *
                               es.eigenvectors();
        PartialSumSeries eig{ladder, Quantity::comm(), "eigen", {}};
        for (const int N : ladder.dims) {
            double s = 0.0;
            for (int n = 0; n < N; ++n)
                for (int m = 0; m < N; ++m)
                    s += sq(lam(m) - lam(n)) * std::norm(rotated(m, n));
            eig.values.push_back(s);
        }
        r.dom_H_eigenbasis = classify(eig, tol);
        if (r.dom_H.classification == Classification::DivergentEvidence &&
            r.dom_H_eigenbasis->classification == Classification::DivergentEvidence)
            r.caveats.push_back(
                "comm series diverges in both the specification basis and the truncated "
                "eigenbasis; the Dom-H criterion requires only some basis inside Dom H, so "
                "this is basis-dependent evidence");
    }

    if (r.dom_H.classification == Classification::DivergentEvidence) {
        cap_claim(r.core_D, "core_D", r);
        cap_claim(r.core_D0, "core_D0", r);
        cap_claim(r.dom_H2, "dom_H2", r);
    }
    if (r.core_D == Classification::DivergentEvidence) cap_claim(r.core_D0, "core_D0", r);

    return r;
}

} // namespace lvn
