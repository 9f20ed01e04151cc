#include <doctest.h>

#include <cmath>

#include "lvn/core_ops.hpp"
#include "lvn/models.hpp"

using namespace lvn;

TEST_CASE("diagonal realization") {
    const auto h = HamiltonianModel::diagonal("n");
    const TruncatedMatrix m = h.realize(3);
    CHECK(m.entry(1, 1) == Complex(1.0, 0.0));
    CHECK(m.entry(2, 2) == Complex(2.0, 0.0));
    CHECK(m.entry(3, 3) == Complex(3.0, 0.0));
    CHECK(m.entry(1, 2) == Complex(0.0, 0.0));
    CHECK(h.lambda(17) == 17.0);
}

TEST_CASE("inverse Hamiltonian realization") {
    const auto h = HamiltonianModel::diagonal("n");
    const auto inv = OperatorModel::inverse_hamiltonian(h);
    const TruncatedMatrix m = inv.realize(3);
    CHECK(m.entry(1, 1) == Complex(1.0, 0.0));
    CHECK(m.entry(2, 2) == Complex(0.5, 0.0));
    CHECK(m.entry(3, 3).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));

    // min lambda > 0 is enforced at realization, with the offending index
    const auto shifted = HamiltonianModel::diagonal("n - 3");
    const auto bad = OperatorModel::inverse_hamiltonian(shifted);
    CHECK_THROWS_AS(bad.realize(3), EvalError);
    try {
        bad.realize(3); // lambda(1) = -2 trips first
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("n=1") != std::string::npos);
    }
}

TEST_CASE("hermitian rule realization is symmetrized") {
    const auto h = HamiltonianModel::hermitian("1/(m+n)", "0");
    const TruncatedMatrix m = h.realize(2);
    CHECK(m.entry(1, 1).real() == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(m.entry(1, 2).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
    CHECK(m.entry(2, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
    CHECK(m.entry(2, 2).real() == doctest::Approx(0.25).epsilon(1e-16));

    // a generator with an asymmetric imaginary part still realizes Hermitian
    const auto g = HamiltonianModel::hermitian("1/(m+n)", "m - n");
    const Matrix realized = g.realize(5).entries();
    CHECK((realized - realized.adjoint()).norm() == 0.0);
}

TEST_CASE("gibbs realization against the geometric partition function") {
    const double beta = 1.0;
    const auto h = HamiltonianModel::diagonal("n");
    const auto gibbs = OperatorModel::gibbs(beta, h);
    for (const int n : {8, 16, 32}) {
        CHECK(gibbs.partition_sum(n) ==
              doctest::Approx(oracles::gibbs_partition_closed(beta, n)).epsilon(1e-14));
        const Matrix m = gibbs.realize(n).entries();
        CHECK(std::abs(m.trace().real() - 1.0) <= 1e-14);
        const double z = gibbs.partition_sum(n);
        CHECK(std::abs(m(2, 2).real() - std::exp(-3.0 * beta) / z) <= 1e-16);
    }

    const DensityMatrix rho = gibbs.realize_density(16);
    CHECK(rho.trace_tolerance() >= 1e-12);
    CHECK(rho.trace_tolerance() <= 1e-6); // deficit of the N=16 truncation is tiny
    CHECK_THROWS_AS(OperatorModel::gibbs(-1.0, h), ShapeError);
    CHECK_THROWS_AS(OperatorModel::gibbs(1.0, HamiltonianModel::hermitian("1/(m+n)", "0")),
                    ShapeError);
    CHECK_THROWS_AS(gibbs.realize_density(16, 8), ShapeError);
}

TEST_CASE("element rule equals the rank-one Gram matrix") {
    const auto rule = OperatorModel::element_rule("1/(m*n)", "0");
    const int n = 12;
    const Matrix a = rule.realize(n).entries();
    Eigen::VectorXd v(n);
    for (int i = 1; i <= n; ++i) v(i - 1) = 1.0 / i;
    const Matrix outer = v.cast<Complex>() * v.cast<Complex>().transpose();
    CHECK((a - outer).norm() <= 1e-15);
}

TEST_CASE("rank sum realization uses conj(psi) on the right") {
    const auto term = OperatorModel::RankTerm{Complex(0.0, 2.0), dsl::parse("1/n", {"n"}),
                                              dsl::parse("exp(-n)", {"n"})};
    const auto a = OperatorModel::rank_sum({term});
    const Matrix m = a.realize(4).entries();
    // A_{mn} = alpha * phi(m) * conj(psi(n)) with real psi
    CHECK(std::abs(m(1, 2) - Complex(0.0, 2.0) * std::exp(-2.0) * (1.0 / 3.0)) <= 1e-16);
    CHECK_THROWS_AS(OperatorModel::rank_sum({}), ShapeError);
}

TEST_CASE("explicit matrices extend by zeros and truncate by blocks") {
    const auto a = OperatorModel::explicit_matrix(TruncatedMatrix::basis_unit(3, 1, 2));
    CHECK(a.realize(5).entry(1, 2) == Complex(1.0, 0.0));
    CHECK(a.realize(5).entry(4, 4) == Complex(0.0, 0.0));
    CHECK(a.realize(2).entry(1, 2) == Complex(1.0, 0.0));
    CHECK(a.realize(2).dim() == 2);
}

TEST_CASE("realizations nest bit-exactly for diagonal and element-rule kinds") {
    const auto h = HamiltonianModel::diagonal("n^2 - n");
    const auto rule = OperatorModel::element_rule("1/(m+n)", "1/(m*n)");
    const Matrix h32 = h.realize(32).entries();
    const Matrix a32 = rule.realize(32).entries();
    CHECK((h32.topLeftCorner(16, 16) - h.realize(16).entries()).norm() == 0.0);
    CHECK((a32.topLeftCorner(16, 16) - rule.realize(16).entries()).norm() == 0.0);
}

TEST_CASE("symmetric real element rules produce symmetric matrices") {
    const auto rule = OperatorModel::element_rule("1/(m+n)", "0");
    const Matrix a = rule.realize(9).entries();
    CHECK((a - a.transpose()).norm() == 0.0);
}

TEST_CASE("oracle catalog carries the five mandatory fixtures") {
    const auto fixtures = oracle_catalog();
    REQUIRE(fixtures.size() == 5);
    for (const std::string id :
         {"inverse-hamiltonian", "slow-rank-one", "gibbs", "exp-decay", "identity"})
        CHECK_NOTHROW(catalog_fixture(id));
    CHECK_THROWS_AS(catalog_fixture("nonexistent"), ShapeError);

    // the identity fixture realizes the identity at every truncation
    const auto& identity = catalog_fixture("identity");
    CHECK((identity.op.realize(7).entries() - Matrix::Identity(7, 7)).norm() == 0.0);

    // gibbs commutes with its Hamiltonian at every truncation
    const auto& gibbs = catalog_fixture("gibbs");
    const Matrix hm = gibbs.hamiltonian.realize(12).entries();
    const Matrix rho = gibbs.op.realize(12).entries();
    CHECK((hm * rho - rho * hm).norm() == 0.0);
}

TEST_CASE("closed-form oracles") {
    // box sum at N=2: (m,n) in {(1,2),(2,1)} contribute 1/4 each
    CHECK(oracles::slow_rank_one_comm(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(oracles::harmonic(3, 1) == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0).epsilon(1e-15));
    CHECK(oracles::harmonic(2, 2) == doctest::Approx(1.25).epsilon(1e-15));

    // brute-force box sum matches the closed form
    for (const int n : {5, 17, 40}) {
        double brute = 0.0;
        for (int m = 1; m <= n; ++m)
            for (int k = 1; k <= n; ++k) {
                const double d = m - k;
                brute += d * d / (static_cast<double>(m) * m * k * k);
            }
        CHECK(oracles::slow_rank_one_comm(n) == doctest::Approx(brute).epsilon(1e-12));
    }

    // Gibbs left limit: beta = 1, x = e^{-2}
    const double x = std::exp(-2.0);
    const double expected = x * (1.0 + x) / std::pow(1.0 - x, 3) * std::pow(std::exp(1.0) - 1.0, 2);
    CHECK(oracles::gibbs_left_limit(1.0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("DSL evaluation failures surface with the index") {
    const auto h = HamiltonianModel::diagonal("1/(n-2)");
    CHECK_NOTHROW(h.realize(1));
    try {
        h.realize(4);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("n=2") != std::string::npos);
    }

    // non-finite values are rejected too
    const auto huge = HamiltonianModel::diagonal("exp(exp(n))");
    CHECK_THROWS_AS(huge.realize(8), EvalError);
}
