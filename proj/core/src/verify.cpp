#include "lvn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lvn/core_ops.hpp"

namespace lvn {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Norm-ordering audit: operator_norm <= hs_norm <= trace_norm on every
// matrix the verify run produces.
class Auditor {
public:
    void check(const TruncatedMatrix& m) {
        ++count_;
        const double op = operator_norm(m);
        const double hs = hs_norm(m);
        const double tr = trace_norm(m);
        const double slack = 1e-12 * std::max(1.0, hs);
        if (op > hs + slack || hs > tr + slack) {
            ++failures_;
            worst_ = "op=" + fmt(op) + " hs=" + fmt(hs) + " tr=" + fmt(tr);
        }
    }
    long count() const { return count_; }
    long failures() const { return failures_; }
    const std::string& worst() const { return worst_; }

private:
    long count_ = 0;
    long failures_ = 0;
    std::string worst_;
};

Matrix random_matrix(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) m(r, c) = Complex(gauss(rng), gauss(rng));
    return m;
}

TruncatedMatrix random_hs(std::mt19937_64& rng, int n) {
    Matrix m = random_matrix(rng, n);
    m /= m.norm();
    return TruncatedMatrix(std::move(m));
}

TruncatedMatrix random_hermitian(std::mt19937_64& rng, int n) {
    Matrix m = random_matrix(rng, n);
    Matrix h = 0.5 * (m + m.adjoint().eval());
    h /= h.norm();
    return TruncatedMatrix(std::move(h));
}

Matrix random_unitary(std::mt19937_64& rng, int n) {
    const Matrix m = random_matrix(rng, n);
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(n, n);
}

struct Harness {
    VerifyRun run;
    Auditor auditor;
    std::mt19937_64 rng;

    explicit Harness(const VerifyParams& p) : rng(p.seed) { run.params = p; }

    void add(const std::string& name, bool passed, std::string detail) {
        run.checks.push_back({name, passed, std::move(detail)});
    }
};

void check_group_law(Harness& hs) {
    const std::vector<HamiltonianModel> hams = {
        HamiltonianModel::diagonal("n"),
        HamiltonianModel::hermitian("1/(m+n)", "0", "hilbert-kernel")};
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    double worst_norm = 0.0, worst_group = 0.0, worst_inner = 0.0;
    for (const auto& h : hams) {
        const Propagator p = Propagator::make(h, 64);
        for (int i = 0; i < 25; ++i) {
            const TruncatedMatrix a = random_hs(hs.rng, 64);
            const TruncatedMatrix b = random_hs(hs.rng, 64);
            const double t = uni(hs.rng), s = uni(hs.rng);
            const TruncatedMatrix at = p.apply(t, a);
            hs.auditor.check(at);
            worst_norm = std::max(worst_norm, std::abs(hs_norm(at) - hs_norm(a)) / hs_norm(a));
            const TruncatedMatrix two_step = p.apply(t, p.apply(s, a));
            const TruncatedMatrix one_step = p.apply(t + s, a);
            worst_group = std::max(
                worst_group, (two_step.entries() - one_step.entries()).norm());
            worst_inner = std::max(worst_inner,
                                   std::abs(hs_inner(p.apply(t, a), p.apply(t, b)) - hs_inner(a, b)));
        }
    }
    hs.add("unitarity", worst_norm <= 1e-10,
           "max relative HS-norm drift " + fmt(worst_norm) + " (tol 1e-10)");
    hs.add("group-law", worst_group <= 1e-9,
           "max ||U(t)U(s)A - U(t+s)A||_HS = " + fmt(worst_group) + " (tol 1e-9)");
    hs.add("unitarity-inner", worst_inner <= 1e-10,
           "max HS inner-product drift " + fmt(worst_inner) + " (tol 1e-10)");
}

void check_vectorized(Harness& hs) {
    const std::vector<HamiltonianModel> hams = {
        HamiltonianModel::diagonal("n"),
        HamiltonianModel::hermitian("1/(m+n)", "0", "hilbert-kernel")};
    double worst_herm = 0.0, worst_action = 0.0, worst_eig = 0.0, worst_adj = 0.0;
    for (const auto& h : hams) {
        const auto liou = VectorizedLiouvillian::build(h, 8, kDefaultBudgetMb);
        worst_herm = std::max(worst_herm,
                              (liou.matrix() - liou.matrix().adjoint()).cwiseAbs().maxCoeff());

        for (int i = 0; i < 20; ++i) {
            const TruncatedMatrix a = random_hs(hs.rng, 8);
            const TruncatedMatrix via_vec = liou.apply(a);
            const TruncatedMatrix via_comm = commutator_apply(h, a);
            hs.auditor.check(via_comm);
            worst_action = std::max(
                worst_action, (via_vec.entries() - via_comm.entries()).norm());
            // self-adjointness of the superoperator in the HS inner product
            const TruncatedMatrix b = random_hs(hs.rng, 8);
            const Complex lhs = hs_inner(liou.apply(a), b);
            const Complex rhs = hs_inner(a, liou.apply(b));
            worst_adj = std::max(worst_adj, std::abs(lhs - rhs));
        }

        Eigen::SelfAdjointEigenSolver<Matrix> es(liou.matrix(), Eigen::EigenvaluesOnly);
        Eigen::VectorXd expected(64);
        const Eigen::VectorXd lam =
            h.is_diagonal()
                ? h.diagonal_sequence(8)
                : Eigen::SelfAdjointEigenSolver<Matrix>(h.realize(8).entries()).eigenvalues();
        int k = 0;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) expected(k++) = lam(i) - lam(j);
        std::sort(expected.begin(), expected.end());
        worst_eig = std::max(worst_eig, (es.eigenvalues() - expected).cwiseAbs().maxCoeff());
    }
    hs.add("vectorized-selfadjoint", worst_herm <= 1e-10 && worst_adj <= 1e-10,
           "max Hermiticity defect " + fmt(worst_herm) + ", max <HA,B>-<A,HB> defect " +
               fmt(worst_adj));
    hs.add("vectorized-consistency", worst_action <= 1e-10,
           "max stacking disagreement with the commutator " + fmt(worst_action) + " (tol 1e-10)");
    hs.add("vectorized-eigenvalues", worst_eig <= 1e-8,
           "max deviation from pairwise eigenvalue differences " + fmt(worst_eig) + " (tol 1e-8)");
}

void check_courbage(Harness& hs) {
    const std::vector<double> grid = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    double worst = 0.0;
    std::string where = "none";
    for (const auto& f : oracle_catalog()) {
        if (f.expect.dom_H == Classification::DivergentEvidence) continue;
        const TruncatedMatrix a = f.op.realize(64);
        hs.auditor.check(a);
        ProbeOptions opts;
        opts.preflight_dom_H = f.expect.dom_H;
        const CourbageProbe probe = courbage_probe(f.hamiltonian, a, grid, opts);
        if (probe.max_ratio > worst) {
            worst = probe.max_ratio;
            where = f.id;
        }
    }
    // matrix-unit fixture: ratio has the closed form 2|sin(t/2)|/|t|
    {
        const auto h = HamiltonianModel::diagonal("n");
        const TruncatedMatrix e12 = TruncatedMatrix::basis_unit(64, 1, 2);
        ProbeOptions opts;
        opts.preflight_dom_H = Classification::ConvergentEvidence;
        const CourbageProbe probe = courbage_probe(h, e12, grid, opts);
        for (std::size_t i = 0; i < probe.ts.size(); ++i) {
            const double t = probe.ts[i];
            const double closed = 2.0 * std::abs(std::sin(t / 2.0)) / std::abs(t);
            if (std::abs(probe.ratios[i] - closed) > 1e-12) {
                hs.add("courbage-bound", false,
                       "e12 ratio disagrees with 2|sin(t/2)|/|t| at t=" + fmt(t));
                return;
            }
        }
        worst = std::max(worst, probe.max_ratio);
    }
    hs.add("courbage-bound", worst <= 1.0 + 1e-8,
           "max ||U(t)A-A|| / (|t| ||[H,A]||) = " + format_g17(worst) + " at " + where +
               " (tol 1+1e-8)");
}

void check_stone(Harness& hs) {
    const auto h = HamiltonianModel::diagonal("n");
    const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4};
    bool ok = true;
    std::string detail;

    ProbeOptions opts;
    opts.preflight_dom_H = Classification::ConvergentEvidence;

    const StoneProbe exp_probe =
        stone_probe(h, catalog_fixture("exp-decay").op.realize(64), ladder, opts);
    ok = ok && exp_probe.slope && *exp_probe.slope >= 0.9 && *exp_probe.slope <= 1.1;
    detail += "exp-decay slope " + (exp_probe.slope ? fmt(*exp_probe.slope) : "n/a");

    const StoneProbe e12_probe =
        stone_probe(h, TruncatedMatrix::basis_unit(64, 1, 2), ladder, opts);
    ok = ok && e12_probe.slope && *e12_probe.slope >= 0.9 && *e12_probe.slope <= 1.1;
    detail += ", e12 slope " + (e12_probe.slope ? fmt(*e12_probe.slope) : "n/a");

    const StoneProbe gibbs_probe =
        stone_probe(h, catalog_fixture("gibbs").op.realize(64), ladder, opts);
    ok = ok && gibbs_probe.commuting;
    detail += std::string(", gibbs residuals ") + (gibbs_probe.commuting ? "exactly zero" : "nonzero");

    hs.add("stone-slope", ok, detail + " (band [0.9, 1.1])");
}

void check_tail_formula(Harness& hs) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const TruncatedMatrix a = random_hs(hs.rng, 32);
        hs.auditor.check(a);
        const double scale = std::max(1.0, hs_norm(a) * hs_norm(a));
        for (int n = 1; n <= 32; ++n) {
            const auto proj = finite_rank_project(a, n);
            double brute = 0.0;
            for (int m = n; m < 32; ++m) brute += a.entries().row(m).squaredNorm();
            worst = std::max(worst, std::abs(proj.tail * proj.tail - brute) / scale);
        }
    }
    hs.add("tail-formula", worst <= 1e-12,
           "max |tail^2 - sum of removed rows| = " + fmt(worst) + " relative (tol 1e-12)");
}

void check_hs_geometry(Harness& hs) {
    double worst_par = 0.0, worst_basis = 0.0;
    for (int i = 0; i < 25; ++i) {
        const TruncatedMatrix a = random_hs(hs.rng, 16);
        const TruncatedMatrix b = random_hs(hs.rng, 16);
        const double lhs = std::pow((a.entries() + b.entries()).norm(), 2) +
                           std::pow((a.entries() - b.entries()).norm(), 2);
        const double rhs = 2.0 * std::pow(hs_norm(a), 2) + 2.0 * std::pow(hs_norm(b), 2);
        worst_par = std::max(worst_par, std::abs(lhs - rhs) / rhs);
    }
    for (int i = 0; i < 10; ++i) {
        const TruncatedMatrix a = random_hs(hs.rng, 16);
        const Matrix v = random_unitary(hs.rng, 16);
        const TruncatedMatrix rotated(v.adjoint() * a.entries() * v);
        hs.auditor.check(rotated);
        worst_basis = std::max(worst_basis, std::abs(hs_norm(rotated) - hs_norm(a)) / hs_norm(a));
    }
    hs.add("parallelogram", worst_par <= 1e-10,
           "max parallelogram defect " + fmt(worst_par) + " relative (tol 1e-10)");
    hs.add("basis-invariance", worst_basis <= 1e-10,
           "max HS-norm change under unitary basis change " + fmt(worst_basis) + " (tol 1e-10)");
}

bool expect_class(const std::string& what, Classification got, Classification want,
                  std::string& detail) {
    if (got == want) return true;
    detail += " [" + what + ": expected " + to_string(want) + ", got " + to_string(got) + "]";
    return false;
}

void check_oracles(Harness& hs, std::vector<MembershipReport>& reports) {
    bool ok = true;
    std::string detail;
    for (const auto& f : oracle_catalog()) {
        OperatorModel op = f.op;
        if (hs.run.params.inject_fault && f.id == "inverse-hamiltonian") {
            Matrix m = op.realize(hs.run.params.ladder.top()).entries();
            m(0, 1) += 0.5; // deliberate corruption for the harness self-test
            op = OperatorModel::explicit_matrix(TruncatedMatrix(std::move(m)),
                                                "corrupted inverse-hamiltonian");
        }
        hs.auditor.check(op.realize(64));
        const MembershipReport r =
            diagnose(f.hamiltonian, op, hs.run.params.ladder, hs.run.params.tolerances);
        reports.push_back(r);

        std::string local;
        bool fixture_ok = true;
        fixture_ok &= expect_class("dom_H", r.dom_H.classification, f.expect.dom_H, local);
        fixture_ok &= expect_class("core_D", r.core_D, f.expect.core_D, local);
        fixture_ok &= expect_class("dom_H2", r.dom_H2, f.expect.dom_H2, local);
        if (f.expect.core_D0 != r.core_D0_structural) {
            fixture_ok = false;
            local += " [core_D0 structural mismatch]";
        }
        if (f.expect.dom_H_limit) {
            const double want = *f.expect.dom_H_limit;
            if (std::abs(r.dom_H.limit_estimate - want) > 1e-9 * std::max(1.0, std::abs(want))) {
                fixture_ok = false;
                local += " [dom_H limit " + fmt(r.dom_H.limit_estimate) + " != " + fmt(want) + "]";
            }
        }
        if (f.expect.core_D_growth) {
            if (r.core_D_left.growth_model != *f.expect.core_D_growth) {
                fixture_ok = false;
                local += " [core_D growth " + to_string(r.core_D_left.growth_model) + "]";
            } else if (*f.expect.core_D_growth == GrowthModel::Linear &&
                       (r.core_D_left.slope_b < 0.99 || r.core_D_left.slope_b > 1.01)) {
                fixture_ok = false;
                local += " [core_D slope " + fmt(r.core_D_left.slope_b) + " outside [0.99,1.01]]";
            }
        }
        if (f.expect.core_D_left_limit) {
            const double want = *f.expect.core_D_left_limit;
            const double got = r.core_D_left.limit_estimate;
            if (std::abs(got - want) > 1e-6 * std::abs(want)) {
                fixture_ok = false;
                local += " [left limit " + format_g17(got) + " vs " + format_g17(want) + "]";
            }
        }
        if (f.id == "slow-rank-one") {
            for (std::size_t i = 0; i < r.dom_H.series.values.size(); ++i) {
                const double want = oracles::slow_rank_one_comm(r.dom_H.series.ladder.dims[i]);
                if (std::abs(r.dom_H.series.values[i] - want) > 1e-10 * want) {
                    fixture_ok = false;
                    local += " [comm series off the closed form at N=" +
                             std::to_string(r.dom_H.series.ladder.dims[i]) + "]";
                    break;
                }
            }
        }
        if (f.id == "inverse-hamiltonian") {
            for (std::size_t i = 0; i < r.core_D_left.series.values.size(); ++i) {
                const double n = r.core_D_left.series.ladder.dims[i];
                if (std::abs(r.core_D_left.series.values[i] - n) > 1e-12 * n) {
                    fixture_ok = false;
                    local += " [left series != N]";
                    break;
                }
            }
        }
        if (!fixture_ok) {
            ok = false;
            detail += f.id + ":" + local + "; ";
        }
    }
    if (ok) detail = "all " + std::to_string(oracle_catalog().size()) + " fixtures match";
    hs.add("oracle-catalog", ok, detail);
}

void check_set_ordering(Harness& hs, const std::vector<MembershipReport>& reports) {
    bool ok = true;
    for (const auto& r : reports) {
        if (r.dom_H.classification == Classification::DivergentEvidence) {
            ok = ok && r.core_D != Classification::ConvergentEvidence;
            ok = ok && r.core_D0 != Classification::ConvergentEvidence;
            ok = ok && r.dom_H2 != Classification::ConvergentEvidence;
        }
        if (r.core_D == Classification::DivergentEvidence)
            ok = ok && r.core_D0 != Classification::ConvergentEvidence;
    }
    hs.add("set-ordering", ok,
           ok ? "no report claims a smaller set while a larger one diverges"
              : "ordering D0 in D in Dom H violated");
}

void check_action_consistency(Harness& hs) {
    double worst = 0.0;
    for (const std::string id : {"gibbs", "exp-decay"}) {
        const auto& f = catalog_fixture(id);
        const int n = 64, m = 128;
        const Matrix hm = f.hamiltonian.realize(m).entries();
        const Matrix am = f.op.realize(m).entries();
        const Matrix ha = (hm * am).topLeftCorner(n, n);
        const Matrix has = (hm * am.adjoint()).topLeftCorner(n, n);
        const Matrix route_core = ha - has.adjoint();
        const TruncatedMatrix a_n(am.topLeftCorner(n, n));
        const Matrix route_comm = commutator_apply(f.hamiltonian, a_n).entries();
        worst = std::max(worst, (route_core - route_comm).norm());
    }
    hs.add("action-consistency", worst <= 1e-9,
           "max ||[H,A] - (HA - (HA*)*)||_HS = " + fmt(worst) + " (tol 1e-9)");
}

void check_double_comm(Harness& hs) {
    const auto& f = catalog_fixture("exp-decay");
    const auto series =
        partial_sums(f.hamiltonian, f.op, Quantity::double_comm(), hs.run.params.ladder);
    const Eigen::VectorXd lam = f.hamiltonian.diagonal_sequence(hs.run.params.ladder.top());
    const Matrix a = f.op.realize(hs.run.params.ladder.top()).entries();
    double worst = 0.0;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const int n = series.ladder.dims[i];
        double brute = 0.0;
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row)
                brute += std::pow(lam(row) - lam(col), 4) * std::norm(a(row, col));
        worst = std::max(worst,
                         std::abs(series.values[i] - brute) / std::max(brute, 1e-300));
    }
    hs.add("double-comm-identity", worst <= 1e-10,
           "max relative deviation from the (lambda_m-lambda_n)^4 box sum " + fmt(worst));
}

void check_hsq_footnote(Harness& hs) {
    const auto h = HamiltonianModel::diagonal("n");
    const auto h_squared = HamiltonianModel::diagonal("n^2");
    const TruncatedMatrix e13 = TruncatedMatrix::basis_unit(4, 1, 3);
    const TruncatedMatrix lhs = liouvillian_squared_apply(h, e13);
    const TruncatedMatrix rhs = commutator_apply(h_squared, e13);
    const double dev_lhs = (lhs.entries() - 4.0 * e13.entries()).norm();
    const double dev_rhs = (rhs.entries() + 8.0 * e13.entries()).norm();
    const double separation = (lhs.entries() - rhs.entries()).norm();
    hs.auditor.check(lhs);
    hs.auditor.check(rhs);
    hs.add("squared-liouvillian-footnote",
           dev_lhs <= 1e-12 && dev_rhs <= 1e-12 && separation > 1.0,
           "H^2 route gives 4*e13 (dev " + fmt(dev_lhs) + "), [H^2,.] route gives -8*e13 (dev " +
               fmt(dev_rhs) + "); the superoperators differ on this fixture");
}

void check_monotonicity(Harness& hs, const std::vector<MembershipReport>& reports) {
    bool ok = true;
    auto inspect = [&ok](const PartialSumSeries& s) {
        for (std::size_t i = 1; i < s.values.size(); ++i)
            if (s.values[i] < s.values[i - 1] - 1e-10 * std::max(s.values[i - 1], 1e-300))
                ok = false;
    };
    for (const auto& r : reports) {
        for (const auto& v : r.invariance_columns) inspect(v.series);
        inspect(r.dom_H.series);
        inspect(r.core_D_left.series);
        inspect(r.core_D_right.series);
        inspect(r.double_comm.series);
        for (const auto& v : r.comm_invariance_columns) inspect(v.series);
        for (const auto& v : r.core_D0_vectors) inspect(v.verdict.series);
    }
    hs.add("monotonicity", ok,
           ok ? "every diagnostic series is nondecreasing (1e-10 relative slack)"
              : "a partial-sum series decreased beyond the slack");
}

void check_nesting(Harness& hs) {
    const auto h = HamiltonianModel::diagonal("n");
    const auto rule = OperatorModel::element_rule("1/(m*n)", "0", "gram");
    const Matrix h32 = h.realize(32).entries();
    const Matrix h16 = h.realize(16).entries();
    const Matrix a32 = rule.realize(32).entries();
    const Matrix a16 = rule.realize(16).entries();
    const bool ok = (h32.topLeftCorner(16, 16) - h16).norm() == 0.0 &&
                    (a32.topLeftCorner(16, 16) - a16).norm() == 0.0;
    hs.add("realization-nesting", ok,
           ok ? "diagonal and element-rule realizations nest bit-exactly"
              : "top-left block mismatch between truncation dimensions");
}

void check_solver_consistency(Harness& hs) {
    const auto h = HamiltonianModel::diagonal("n");
    const TruncatedMatrix a0 = random_hermitian(hs.rng, 32);
    hs.auditor.check(a0);
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(0.1 * i);

    // spectral vs vectorized-expm on a non-diagonal H: the two routes share
    // nothing (eigensolve at N vs eigensolve at N^2)
    const auto h_dense = HamiltonianModel::hermitian("1/(m+n)", "0", "hilbert-kernel");
    EvolveOptions spectral;
    spectral.method = EvolveMethod::SpectralExact;
    const EvolutionTrajectory dense_ref = evolve(h_dense, a0, times, spectral);
    EvolveOptions expm;
    expm.method = EvolveMethod::VectorizedExpm;
    expm.budget_mb = hs.run.params.budget_mb;
    const EvolutionTrajectory dense_alt = evolve(h_dense, a0, times, expm);
    double max_dist = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        max_dist = std::max(
            max_dist, (dense_ref.states[i].entries() - dense_alt.states[i].entries()).norm());

    const EvolutionTrajectory ref = evolve(h, a0, times, spectral);

    EvolveOptions rk4;
    rk4.method = EvolveMethod::Rk4;
    rk4.preflight_dom_H = Classification::ConvergentEvidence;
    rk4.rk4_step = 1.0 / 64.0;
    const std::vector<double> endpoints = {0.0, 1.0};
    const EvolutionTrajectory coarse = evolve(h, a0, endpoints, rk4);
    rk4.rk4_step = 1.0 / 128.0;
    const EvolutionTrajectory fine = evolve(h, a0, endpoints, rk4);
    const Matrix exact = ref.states.back().entries();
    const double err_h = (coarse.states.back().entries() - exact).norm();
    const double err_h2 = (fine.states.back().entries() - exact).norm();
    const double ratio = err_h / err_h2;

    hs.add("solver-consistency", max_dist <= 1e-9 && ratio >= 14.0 && ratio <= 18.0,
           "max spectral/vectorized-expm distance " + fmt(max_dist) +
               " (tol 1e-9); rk4 halving error ratio " + fmt(ratio) + " (band [14,18])");
}

} // namespace

VerifyRun run_verify(const VerifyParams& params) {
    params.ladder.validate();
    Harness hs(params);

    check_group_law(hs);
    check_vectorized(hs);
    check_courbage(hs);
    check_stone(hs);
    check_tail_formula(hs);
    check_hs_geometry(hs);

    std::vector<MembershipReport> reports;
    check_oracles(hs, reports);
    check_set_ordering(hs, reports);
    check_action_consistency(hs);
    check_double_comm(hs);
    check_hsq_footnote(hs);
    check_monotonicity(hs, reports);
    check_nesting(hs);
    check_solver_consistency(hs);

    hs.run.checks.push_back({"norm-ordering", hs.auditor.failures() == 0,
                             "operator_norm <= hs_norm <= trace_norm on " +
                                 std::to_string(hs.auditor.count()) + " matrices" +
                                 (hs.auditor.failures() ? ", worst " + hs.auditor.worst() : "")});

    hs.run.matrices_checked = hs.auditor.count();
    hs.run.all_passed = std::all_of(hs.run.checks.begin(), hs.run.checks.end(),
                                    [](const CheckResult& c) { return c.passed; });
    return hs.run;
}

Json verify_json(const VerifyRun& run) {
    Provenance p;
    p.version = tool_version();
    p.spec_hash = "-";
    p.seed = run.params.seed;
    p.ladder = run.params.ladder;
    p.tolerances = run.params.tolerances;
    p.include_timestamp = false;

    Json j;
    j["provenance"] = provenance_json(p);
    j["inject_fault"] = run.params.inject_fault;
    Json checks = Json::array();
    for (const auto& c : run.checks)
        checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    j["matrices_checked"] = run.matrices_checked;
    j["all_passed"] = run.all_passed;
    return j;
}

} // namespace lvn
