#include "lvn/models.hpp"

#include <cmath>

namespace lvn {

namespace {

double eval_checked(const dsl::ExprPtr& e, const dsl::EvalContext& ctx) {
    const double v = dsl::eval(e, ctx);
    if (!std::isfinite(v)) throw EvalError("expression evaluated to a non-finite value", ctx.describe());
    return v;
}

std::vector<std::string> vars_n() { return {"n"}; }
std::vector<std::string> vars_mn() { return {"m", "n"}; }

} // namespace

std::string to_string(Classification c) {
    switch (c) {
        case Classification::ConvergentEvidence: return "convergent-evidence";
        case Classification::DivergentEvidence: return "divergent-evidence";
        case Classification::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(GrowthModel g) {
    switch (g) {
        case GrowthModel::Bounded: return "bounded";
        case GrowthModel::Log: return "log";
        case GrowthModel::Power: return "power";
        case GrowthModel::Linear: return "linear";
    }
    return "?";
}

HamiltonianModel HamiltonianModel::diagonal(dsl::ExprPtr lambda, std::string descriptor) {
    HamiltonianModel h;
    h.kind_ = Kind::Diagonal;
    h.lambda_ = std::move(lambda);
    h.descriptor_ = std::move(descriptor);
    return h;
}

HamiltonianModel HamiltonianModel::diagonal(std::string_view lambda_src, std::string descriptor) {
    if (descriptor.empty()) descriptor = "lambda(n)=" + std::string(lambda_src);
    return diagonal(dsl::parse(lambda_src, vars_n()), std::move(descriptor));
}

HamiltonianModel HamiltonianModel::hermitian(dsl::ExprPtr a_re, dsl::ExprPtr a_im,
                                             std::string descriptor) {
    HamiltonianModel h;
    h.kind_ = Kind::Hermitian;
    h.a_re_ = std::move(a_re);
    h.a_im_ = std::move(a_im);
    h.descriptor_ = std::move(descriptor);
    return h;
}

HamiltonianModel HamiltonianModel::hermitian(std::string_view a_re_src, std::string_view a_im_src,
                                             std::string descriptor) {
    if (descriptor.empty())
        descriptor = "a(m,n)=" + std::string(a_re_src) + " + i*(" + std::string(a_im_src) + ")";
    return hermitian(dsl::parse(a_re_src, vars_mn()), dsl::parse(a_im_src, vars_mn()),
                     std::move(descriptor));
}

double HamiltonianModel::lambda(long n) const {
    if (kind_ != Kind::Diagonal) throw ShapeError("lambda() requires a Diagonal Hamiltonian");
    return eval_checked(lambda_, dsl::EvalContext::over_n(n));
}

Eigen::VectorXd HamiltonianModel::diagonal_sequence(int dim) const {
    if (kind_ != Kind::Diagonal)
        throw ShapeError("diagonal_sequence() requires a Diagonal Hamiltonian");
    Eigen::VectorXd seq(dim);
    for (int n = 1; n <= dim; ++n) seq(n - 1) = lambda(n);
    return seq;
}

TruncatedMatrix HamiltonianModel::realize(int dim) const {
    if (dim < 1) throw ShapeError("realize requires dim >= 1");
    if (kind_ == Kind::Diagonal) {
        Matrix m = Matrix::Zero(dim, dim);
        for (int n = 1; n <= dim; ++n) m(n - 1, n - 1) = lambda(n);
        return TruncatedMatrix(std::move(m));
    }
    Matrix g(dim, dim);
    for (int n = 1; n <= dim; ++n)
        for (int m = 1; m <= dim; ++m) {
            const auto ctx = dsl::EvalContext::over_mn(m, n);
            g(m - 1, n - 1) = Complex(eval_checked(a_re_, ctx), eval_checked(a_im_, ctx));
        }
    Matrix h = 0.5 * (g + g.adjoint().eval());
    return TruncatedMatrix(std::move(h));
}

OperatorModel OperatorModel::element_rule(dsl::ExprPtr a_re, dsl::ExprPtr a_im,
                                          std::string descriptor) {
    OperatorModel a;
    a.kind_ = Kind::ElementRule;
    a.a_re_ = std::move(a_re);
    a.a_im_ = std::move(a_im);
    a.descriptor_ = std::move(descriptor);
    return a;
}

OperatorModel OperatorModel::element_rule(std::string_view a_re_src, std::string_view a_im_src,
                                          std::string descriptor) {
    if (descriptor.empty())
        descriptor = "a(m,n)=" + std::string(a_re_src) + " + i*(" + std::string(a_im_src) + ")";
    return element_rule(dsl::parse(a_re_src, vars_mn()), dsl::parse(a_im_src, vars_mn()),
                        std::move(descriptor));
}

OperatorModel OperatorModel::rank_sum(std::vector<RankTerm> terms, std::string descriptor) {
    if (terms.empty()) throw ShapeError("rank_sum requires at least one term");
    OperatorModel a;
    a.kind_ = Kind::RankSum;
    a.terms_ = std::move(terms);
    a.descriptor_ = descriptor.empty() ? "rank-sum" : std::move(descriptor);
    return a;
}

OperatorModel OperatorModel::explicit_matrix(TruncatedMatrix m, std::string descriptor) {
    OperatorModel a;
    a.kind_ = Kind::Explicit;
    a.matrix_ = std::move(m);
    a.descriptor_ = descriptor.empty() ? "explicit" : std::move(descriptor);
    return a;
}

OperatorModel OperatorModel::gibbs(double beta, HamiltonianModel h, std::string descriptor) {
    if (beta <= 0.0) throw ShapeError("gibbs requires beta > 0");
    if (!h.is_diagonal()) throw ShapeError("gibbs requires a Diagonal Hamiltonian");
    OperatorModel a;
    a.kind_ = Kind::Gibbs;
    a.beta_ = beta;
    a.base_ = std::move(h);
    a.descriptor_ = descriptor.empty() ? "gibbs(beta=" + std::to_string(beta) + ")"
                                       : std::move(descriptor);
    return a;
}

OperatorModel OperatorModel::inverse_hamiltonian(HamiltonianModel h, std::string descriptor) {
    if (!h.is_diagonal()) throw ShapeError("inverse_hamiltonian requires a Diagonal Hamiltonian");
    OperatorModel a;
    a.kind_ = Kind::InverseHamiltonian;
    a.base_ = std::move(h);
    a.descriptor_ = descriptor.empty() ? "inverse-hamiltonian" : std::move(descriptor);
    return a;
}

const HamiltonianModel& OperatorModel::base_hamiltonian() const {
    if (!base_) throw ShapeError("operator model has no base Hamiltonian");
    return *base_;
}

double OperatorModel::partition_sum(int dim) const {
    if (kind_ != Kind::Gibbs) throw ShapeError("partition_sum requires a Gibbs model");
    double z = 0.0;
    for (int n = 1; n <= dim; ++n) z += std::exp(-beta_ * base_->lambda(n));
    return z;
}

TruncatedMatrix OperatorModel::realize(int dim) const {
    if (dim < 1) throw ShapeError("realize requires dim >= 1");
    switch (kind_) {
        case Kind::ElementRule: {
            Matrix m(dim, dim);
            for (int col = 1; col <= dim; ++col)
                for (int row = 1; row <= dim; ++row) {
                    const auto ctx = dsl::EvalContext::over_mn(row, col);
                    m(row - 1, col - 1) =
                        Complex(eval_checked(a_re_, ctx), eval_checked(a_im_, ctx));
                }
            return TruncatedMatrix(std::move(m));
        }
        case Kind::RankSum: {
            // A = sum_j alpha_j <psi_j, .> phi_j, so A_{mn} = alpha_j phi_j(m) conj(psi_j(n)).
            Matrix m = Matrix::Zero(dim, dim);
            for (const auto& term : terms_) {
                Eigen::VectorXd psi(dim), phi(dim);
                for (int n = 1; n <= dim; ++n) {
                    psi(n - 1) = eval_checked(term.psi, dsl::EvalContext::over_n(n));
                    phi(n - 1) = eval_checked(term.phi, dsl::EvalContext::over_n(n));
                }
                m += term.alpha * (phi.cast<Complex>() * psi.cast<Complex>().adjoint());
            }
            return TruncatedMatrix(std::move(m));
        }
        case Kind::Explicit: {
            const Matrix& src = matrix_->entries();
            const int d = matrix_->dim();
            if (dim <= d) return TruncatedMatrix(src.topLeftCorner(dim, dim));
            Matrix m = Matrix::Zero(dim, dim);
            m.topLeftCorner(d, d) = src;
            return TruncatedMatrix(std::move(m));
        }
        case Kind::Gibbs: {
            const double z = partition_sum(dim);
            Matrix m = Matrix::Zero(dim, dim);
            for (int n = 1; n <= dim; ++n)
                m(n - 1, n - 1) = std::exp(-beta_ * base_->lambda(n)) / z;
            return TruncatedMatrix(std::move(m));
        }
        case Kind::InverseHamiltonian: {
            Matrix m = Matrix::Zero(dim, dim);
            for (int n = 1; n <= dim; ++n) {
                const double lam = base_->lambda(n);
                if (lam <= 0.0)
                    throw EvalError("inverse_hamiltonian requires lambda(n) > 0",
                                    "n=" + std::to_string(n));
                m(n - 1, n - 1) = 1.0 / lam;
            }
            return TruncatedMatrix(std::move(m));
        }
    }
    throw ShapeError("unreachable operator kind");
}

DensityMatrix OperatorModel::realize_density(int dim, int ref_dim) const {
    if (kind_ != Kind::Gibbs) throw ShapeError("realize_density requires a Gibbs model");
    if (ref_dim == 0) ref_dim = std::max(4 * dim, 1024);
    if (ref_dim < dim) throw ShapeError("ref_dim must be >= dim");
    const double z_n = partition_sum(dim);
    const double z_ref = partition_sum(ref_dim);
    const double deficit = 1.0 - z_n / z_ref;
    return DensityMatrix(realize(dim), std::max(deficit, 1e-12));
}

namespace {

OracleExpectation expect_inverse_hamiltonian() {
    return {Classification::ConvergentEvidence, 0.0,
            Classification::DivergentEvidence, GrowthModel::Linear, std::nullopt,
            false, Classification::ConvergentEvidence};
}

OracleExpectation expect_slow_rank_one() {
    return {Classification::DivergentEvidence, std::nullopt,
            Classification::DivergentEvidence, std::nullopt, std::nullopt,
            false, Classification::DivergentEvidence};
}

OracleExpectation expect_gibbs(double beta) {
    return {Classification::ConvergentEvidence, 0.0,
            Classification::ConvergentEvidence, std::nullopt, oracles::gibbs_left_limit(beta),
            false, Classification::ConvergentEvidence};
}

OracleExpectation expect_exp_decay() {
    return {Classification::ConvergentEvidence, std::nullopt,
            Classification::ConvergentEvidence, std::nullopt, std::nullopt,
            true, Classification::ConvergentEvidence};
}

OracleExpectation expect_identity() {
    // [H, I] = 0, so the comm series carries convergent evidence; the left
    // series sum_{n<=N} lambda(n)^2 diverges like N^3.
    return {Classification::ConvergentEvidence, 0.0,
            Classification::DivergentEvidence, GrowthModel::Power, std::nullopt,
            false, Classification::ConvergentEvidence};
}

} // namespace

std::vector<OracleFixture> oracle_catalog() {
    std::vector<OracleFixture> fixtures;
    const auto h = HamiltonianModel::diagonal("n");

    fixtures.push_back({"inverse-hamiltonian", h,
                        OperatorModel::inverse_hamiltonian(h, "inverse-hamiltonian"),
                        expect_inverse_hamiltonian()});

    fixtures.push_back(
        {"slow-rank-one", h,
         OperatorModel::rank_sum({{Complex(1.0, 0.0), dsl::parse("1/n", {"n"}),
                                   dsl::parse("1/n", {"n"})}},
                                 "rank-one v(n)=1/n"),
         expect_slow_rank_one()});

    fixtures.push_back({"gibbs", h, OperatorModel::gibbs(1.0, h), expect_gibbs(1.0)});

    fixtures.push_back(
        {"exp-decay", h,
         OperatorModel::rank_sum({{Complex(1.0, 0.0), dsl::parse("exp(-n)", {"n"}),
                                   dsl::parse("exp(-n)", {"n"})}},
                                 "rank-one v(n)=exp(-n)"),
         expect_exp_decay()});

    // Kronecker delta through the element rule: 0^0 = 1, 0^k = 0 for k >= 1,
    // so 0^abs(m-n) realizes the identity at every truncation.
    fixtures.push_back({"identity", h,
                        OperatorModel::element_rule("0^abs(m-n)", "0", "identity"),
                        expect_identity()});

    return fixtures;
}

const OracleFixture& catalog_fixture(const std::string& id) {
    static const std::vector<OracleFixture> fixtures = oracle_catalog();
    for (const auto& f : fixtures)
        if (f.id == id) return f;
    throw ShapeError("unknown fixture '" + id + "'");
}

namespace oracles {

double harmonic(int n, int p) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += 1.0 / std::pow(static_cast<double>(k), p);
    return s;
}

double slow_rank_one_comm(int n) {
    const double h1 = harmonic(n, 1);
    return 2.0 * n * harmonic(n, 2) - 2.0 * h1 * h1;
}

double gibbs_partition_closed(double beta, int n) {
    const double q = std::exp(-beta);
    return q * (1.0 - std::pow(q, n)) / (1.0 - q);
}

double gibbs_left_limit(double beta) {
    const double x = std::exp(-2.0 * beta);
    const double sum_n2_xn = x * (1.0 + x) / std::pow(1.0 - x, 3);
    const double z = 1.0 / (std::exp(beta) - 1.0);
    return sum_n2_xn / (z * z);
}

} // namespace oracles

} // namespace lvn
