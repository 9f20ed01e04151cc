#include <doctest.h>

#include <cmath>

#include "lvn/diagnostics.hpp"

using namespace lvn;

namespace {

PartialSumSeries synthetic(std::vector<double> values) {
    TruncationLadder ladder = TruncationLadder::defaults();
    ladder.dims.resize(values.size());
    PartialSumSeries s{ladder, Quantity::comm(), "spec", std::move(values)};
    return s;
}

PartialSumSeries synthetic_fn(double (*fn)(double)) {
    TruncationLadder ladder = TruncationLadder::defaults();
    PartialSumSeries s{ladder, Quantity::comm(), "spec", {}};
    for (const int n : ladder.dims) s.values.push_back(fn(n));
    return s;
}

const Tolerances kTol{};

} // namespace

TEST_CASE("ladder defaults and validation") {
    const TruncationLadder d = TruncationLadder::defaults();
    CHECK(d.dims == std::vector<int>{16, 24, 32, 48, 64, 96, 128, 192, 256});
    CHECK(d.pad_factor == 2.0);
    CHECK(TruncationLadder::up_to(128).dims == std::vector<int>{16, 24, 32, 48, 64, 96, 128});

    CHECK_THROWS_AS(TruncationLadder({{8, 16, 24}, 2.0}).validate(), ShapeError);
    CHECK_THROWS_AS(TruncationLadder({{8, 16, 16, 24}, 2.0}).validate(), ShapeError);
    CHECK_THROWS_AS(TruncationLadder({{8, 16, 24, 32}, 0.5}).validate(), ShapeError);
    CHECK_THROWS_AS(TruncationLadder({{0, 16, 24, 32}, 2.0}).validate(), ShapeError);
    CHECK_THROWS_AS(TruncationLadder({{16, 32, 64, 4096}, 2.0}).validate(), ShapeError);
}

TEST_CASE("partial sums: commuting pairs give identically zero series") {
    const auto& gibbs = catalog_fixture("gibbs");
    const auto series =
        partial_sums(gibbs.hamiltonian, gibbs.op, Quantity::comm(), TruncationLadder::up_to(64));
    for (const double v : series.values) CHECK(v == 0.0);
}

TEST_CASE("partial sums: inverse Hamiltonian left series is exactly N") {
    const auto& f = catalog_fixture("inverse-hamiltonian");
    const auto series =
        partial_sums(f.hamiltonian, f.op, Quantity::left(), TruncationLadder::defaults());
    for (std::size_t i = 0; i < series.values.size(); ++i)
        CHECK(series.values[i] ==
              doctest::Approx(static_cast<double>(series.ladder.dims[i])).epsilon(1e-13));
}

TEST_CASE("partial sums: slow-rank-one comm series matches the closed form") {
    const auto& f = catalog_fixture("slow-rank-one");
    const auto series =
        partial_sums(f.hamiltonian, f.op, Quantity::comm(), TruncationLadder::defaults());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double want = oracles::slow_rank_one_comm(series.ladder.dims[i]);
        CHECK(std::abs(series.values[i] - want) <= 1e-10 * want);
    }
}

TEST_CASE("partial sums reject a gibbs model whose partition sum has not converged") {
    const auto h = HamiltonianModel::diagonal("n");
    const auto barely_thermal = OperatorModel::gibbs(0.01, h);
    CHECK_THROWS_AS(
        partial_sums(h, barely_thermal, Quantity::comm(), TruncationLadder::defaults()),
        EvalError);
    // a solidly decaying one is fine
    CHECK_NOTHROW(
        partial_sums(h, OperatorModel::gibbs(1.0, h), Quantity::comm(),
                     TruncationLadder::defaults()));
}

TEST_CASE("partial sums reject bad probe columns") {
    const auto& f = catalog_fixture("gibbs");
    CHECK_THROWS_AS(
        partial_sums(f.hamiltonian, f.op, Quantity::column_probe(17), TruncationLadder::defaults()),
        ShapeError);
    CHECK_THROWS_AS(
        partial_sums(f.hamiltonian, f.op, Quantity{Quantity::Kind::VectorDomain, 0},
                     TruncationLadder::defaults()),
        ShapeError);
}

TEST_CASE("classify: the ladder itself is linear divergence") {
    TruncationLadder ladder = TruncationLadder::defaults();
    std::vector<double> values(ladder.dims.begin(), ladder.dims.end());
    const auto v = classify(PartialSumSeries{ladder, Quantity::left(), "spec", values}, kTol);
    CHECK(v.classification == Classification::DivergentEvidence);
    CHECK(v.growth_model == GrowthModel::Linear);
    CHECK(v.fit_residual <= 1e-9);
    CHECK(v.slope_b == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classify: constant and zero series short-circuit to convergence") {
    const auto zero = classify(synthetic({0, 0, 0, 0, 0, 0, 0, 0, 0}), kTol);
    CHECK(zero.classification == Classification::ConvergentEvidence);
    CHECK(zero.limit_estimate == 0.0);
    CHECK(zero.growth_model == GrowthModel::Bounded);

    const auto constant = classify(synthetic({3.5, 3.5, 3.5, 3.5, 3.5, 3.5, 3.5, 3.5, 3.5}), kTol);
    CHECK(constant.classification == Classification::ConvergentEvidence);
    CHECK(constant.limit_estimate == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("classify: saturating series converges to the fitted limit") {
    const auto v = classify(synthetic_fn([](double n) { return 2.0 - std::exp(-0.5 * n); }), kTol);
    CHECK(v.classification == Classification::ConvergentEvidence);
    CHECK(v.limit_estimate == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("classify: log growth is divergent evidence") {
    const auto v = classify(synthetic_fn([](double n) { return 4.0 + 1.5 * std::log(n); }), kTol);
    CHECK(v.classification == Classification::DivergentEvidence);
    CHECK(v.growth_model == GrowthModel::Log);
}

TEST_CASE("classify: sublinear and superlinear powers keep the power label") {
    const auto sub = classify(synthetic_fn([](double n) { return 2.0 * std::sqrt(n); }), kTol);
    CHECK(sub.classification == Classification::DivergentEvidence);
    CHECK(sub.growth_model == GrowthModel::Power);
    CHECK(sub.gamma == doctest::Approx(0.5).epsilon(1e-6));

    const auto cubic = classify(synthetic_fn([](double n) { return n * n * n / 3.0; }), kTol);
    CHECK(cubic.classification == Classification::DivergentEvidence);
    CHECK(cubic.growth_model == GrowthModel::Power);
    CHECK(cubic.gamma == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("classify: a visibly unconverged bounded shape stays inconclusive") {
    // c - b N^{-1/4}: the tail increment is far above conv_tol at desk dims,
    // so neither evidence gate may fire
    const auto v =
        classify(synthetic_fn([](double n) { return 1.0 - std::pow(n, -0.25); }), kTol);
    CHECK(v.classification == Classification::Inconclusive);
}

TEST_CASE("classify needs at least four points") {
    TruncationLadder ladder{{16, 24, 32}, 2.0};
    PartialSumSeries s{ladder, Quantity::comm(), "spec", {1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(classify(s, kTol), ShapeError);
}

TEST_CASE("diagnose: inverse Hamiltonian separates Dom H from the core") {
    const auto& f = catalog_fixture("inverse-hamiltonian");
    const auto r = diagnose(f.hamiltonian, f.op, TruncationLadder::defaults(), kTol);
    CHECK(r.dom_H.classification == Classification::ConvergentEvidence);
    CHECK(r.dom_H.limit_estimate == 0.0);
    CHECK(r.core_D == Classification::DivergentEvidence);
    CHECK(r.core_D_left.growth_model == GrowthModel::Linear);
    CHECK(r.core_D_left.slope_b == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.dom_H2 == Classification::ConvergentEvidence);
    CHECK(r.invariance.classification == Classification::ConvergentEvidence);
    CHECK(!r.core_D0_structural);
}

TEST_CASE("diagnose: slow-rank-one fails Dom H and everything below it") {
    const auto& f = catalog_fixture("slow-rank-one");
    const auto r = diagnose(f.hamiltonian, f.op, TruncationLadder::defaults(), kTol);
    CHECK(r.dom_H.classification == Classification::DivergentEvidence);
    CHECK(r.dom_H.growth_model == GrowthModel::Linear);
    CHECK(r.invariance.classification == Classification::DivergentEvidence);
    CHECK(r.core_D != Classification::ConvergentEvidence);
    CHECK(r.core_D0 == Classification::DivergentEvidence);
    CHECK(!r.core_D0_structural);
    CHECK(r.dom_H2 != Classification::ConvergentEvidence);
}

TEST_CASE("diagnose: exp-decay rank-one sits in core D0") {
    const auto& f = catalog_fixture("exp-decay");
    const auto r = diagnose(f.hamiltonian, f.op, TruncationLadder::up_to(96), kTol);
    CHECK(r.dom_H.classification == Classification::ConvergentEvidence);
    CHECK(r.core_D == Classification::ConvergentEvidence);
    CHECK(r.core_D0_structural);
    CHECK(r.core_D0 == Classification::ConvergentEvidence);
    CHECK(r.core_D0_vectors.size() == 2);
    CHECK(r.dom_H2 == Classification::ConvergentEvidence);
}

TEST_CASE("diagnose: gibbs left limit matches the geometric-series oracle") {
    const auto& f = catalog_fixture("gibbs");
    const auto r = diagnose(f.hamiltonian, f.op, TruncationLadder::defaults(), kTol);
    CHECK(r.core_D == Classification::ConvergentEvidence);
    const double want = oracles::gibbs_left_limit(1.0);
    CHECK(std::abs(r.core_D_left.limit_estimate - want) <= 1e-6 * want);
}

TEST_CASE("diagnose: hermitian rules get an eigenbasis rerun") {
    // Jacobi operator diag(n) + 0.5 on the first off-diagonals, written as an
    // element rule through the 0^|m-n| delta
    const auto h = HamiltonianModel::hermitian(
        "n*0^abs(m-n) + 0.5*0^abs(abs(m-n)-1)", "0", "jacobi(n, 1/2)");
    const auto a = OperatorModel::element_rule("exp(-0.5*(m+n))", "0");
    const auto r = diagnose(h, a, TruncationLadder({{8, 12, 16, 24, 32}, 2.0}), kTol);
    REQUIRE(r.dom_H_eigenbasis.has_value());
    CHECK(r.dom_H_eigenbasis->series.basis == "eigen");
    CHECK(r.dom_H.classification == Classification::ConvergentEvidence);
    CHECK(r.dom_H_eigenbasis->classification == Classification::ConvergentEvidence);
}

TEST_CASE("quantity tags are stable strings") {
    CHECK(Quantity::comm().tag() == "comm");
    CHECK(Quantity::left().tag() == "left");
    CHECK(Quantity::right().tag() == "right");
    CHECK(Quantity::double_comm().tag() == "double-comm");
    CHECK(Quantity::column_probe(4).tag() == "column:4");
    CHECK((Quantity{Quantity::Kind::CommColumn, 2}.tag()) == "comm-column:2");
}

TEST_CASE("set ordering is enforced across the catalog") {
    for (const auto& f : oracle_catalog()) {
        const auto r = diagnose(f.hamiltonian, f.op, TruncationLadder::up_to(96), kTol);
        if (r.dom_H.classification == Classification::DivergentEvidence) {
            CHECK(r.core_D != Classification::ConvergentEvidence);
            CHECK(r.core_D0 != Classification::ConvergentEvidence);
            CHECK(r.dom_H2 != Classification::ConvergentEvidence);
        }
    }
}
