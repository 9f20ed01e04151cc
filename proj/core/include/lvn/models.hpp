#ifndef LVN_MODELS_HPP
#define LVN_MODELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "lvn/expr.hpp"
#include "lvn/truncated_matrix.hpp"
#include "lvn/verdict.hpp"

namespace lvn {

/// An unbounded self-adjoint operator given as a rule producing matrix
/// elements in a fixed orthonormal basis: either a diagonal eigenvalue
/// sequence lambda(n), or a Hermitian generator a(m,n). The Hermitian
/// generator is symmetrized on realization, H = (G + G*)/2, so that
/// a(m,n) = conj(a(n,m)) holds by construction.
class HamiltonianModel {
public:
    enum class Kind { Diagonal, Hermitian };

    static HamiltonianModel diagonal(dsl::ExprPtr lambda, std::string descriptor);
    static HamiltonianModel diagonal(std::string_view lambda_src, std::string descriptor = "");
    static HamiltonianModel hermitian(dsl::ExprPtr a_re, dsl::ExprPtr a_im,
                                      std::string descriptor);
    static HamiltonianModel hermitian(std::string_view a_re_src, std::string_view a_im_src,
                                      std::string descriptor = "");

    Kind kind() const { return kind_; }
    bool is_diagonal() const { return kind_ == Kind::Diagonal; }
    const std::string& descriptor() const { return descriptor_; }

    /// Finite section on span(e_1..e_N); Hermitian by construction.
    TruncatedMatrix realize(int dim) const;

    /// Diagonal kind only: lambda(n) for n = 1..dim.
    Eigen::VectorXd diagonal_sequence(int dim) const;
    double lambda(long n) const;

private:
    HamiltonianModel() = default;
    Kind kind_ = Kind::Diagonal;
    dsl::ExprPtr lambda_;
    dsl::ExprPtr a_re_, a_im_;
    std::string descriptor_;
};

/// A candidate Hilbert-Schmidt operator: matrix-element rule, finite-rank
/// sum, explicit matrix (extended by zeros beyond its native block), Gibbs
/// state over a diagonal Hamiltonian, or the inverse of a positive diagonal
/// Hamiltonian.
class OperatorModel {
public:
    enum class Kind { ElementRule, RankSum, Explicit, Gibbs, InverseHamiltonian };

    struct RankTerm {
        Complex alpha;
        dsl::ExprPtr psi; // over n
        dsl::ExprPtr phi; // over n
    };

    static OperatorModel element_rule(dsl::ExprPtr a_re, dsl::ExprPtr a_im,
                                      std::string descriptor);
    static OperatorModel element_rule(std::string_view a_re_src, std::string_view a_im_src,
                                      std::string descriptor = "");
    static OperatorModel rank_sum(std::vector<RankTerm> terms, std::string descriptor = "");
    static OperatorModel explicit_matrix(TruncatedMatrix m, std::string descriptor = "");
    static OperatorModel gibbs(double beta, HamiltonianModel h, std::string descriptor = "");
    static OperatorModel inverse_hamiltonian(HamiltonianModel h, std::string descriptor = "");

    Kind kind() const { return kind_; }
    const std::string& descriptor() const { return descriptor_; }
    double gibbs_beta() const { return beta_; }
    const HamiltonianModel& base_hamiltonian() const;
    const std::vector<RankTerm>& rank_terms() const { return terms_; }

    TruncatedMatrix realize(int dim) const;

    /// Gibbs kind only: renormalized truncation as a DensityMatrix. The
    /// trace tolerance is the normalization deficit 1 - Z_N/Z_ref with Z_ref
    /// taken at ref_dim (a ladder top, or an automatic plateau estimate when
    /// ref_dim == 0), floored at 1e-12 for roundoff headroom.
    DensityMatrix realize_density(int dim, int ref_dim = 0) const;

    /// Gibbs kind only: truncated partition function Z_N.
    double partition_sum(int dim) const;

private:
    OperatorModel() = default;
    Kind kind_ = Kind::ElementRule;
    dsl::ExprPtr a_re_, a_im_;
    std::vector<RankTerm> terms_;
    std::optional<TruncatedMatrix> matrix_;
    double beta_ = 0.0;
    std::optional<HamiltonianModel> base_;
    std::string descriptor_;
};

/// Analytically known membership facts for a catalog fixture. Convergence
/// classes refer to the diagnostic verdicts at the default ladder.
struct OracleExpectation {
    Classification dom_H;
    std::optional<double> dom_H_limit;     // exact limit when known
    Classification core_D;
    std::optional<GrowthModel> core_D_growth;
    std::optional<double> core_D_left_limit; // closed form when known
    bool core_D0;
    Classification dom_H2;
};

struct OracleFixture {
    std::string id;
    HamiltonianModel hamiltonian;
    OperatorModel op;
    OracleExpectation expect;
};

/// The mandatory fixture set, by stable identifier: "inverse-hamiltonian",
/// "slow-rank-one", "gibbs", "exp-decay", "identity".
std::vector<OracleFixture> oracle_catalog();
const OracleFixture& catalog_fixture(const std::string& id);

namespace oracles {

/// Partial harmonic sum H_p(N) = sum_{n<=N} 1/n^p.
double harmonic(int n, int p);

/// Closed form of the slow-rank-one commutator box sum:
/// sum_{m,n<=N} (m-n)^2/(m^2 n^2) = 2 N H_2(N) - 2 H_1(N)^2.
double slow_rank_one_comm(int n);

/// Closed form of the truncated partition function for lambda(n) = n:
/// Z_N = e^{-beta} (1 - e^{-beta N}) / (1 - e^{-beta}).
double gibbs_partition_closed(double beta, int n);

/// Limit of the Gibbs left series sum_n ||H rho e_n||^2 for lambda(n) = n:
/// sum_{n>=1} n^2 x^n / Z^2 with x = e^{-2 beta}, via
/// sum n^2 x^n = x(1+x)/(1-x)^3 and Z = 1/(e^beta - 1).
double gibbs_left_limit(double beta);

} // namespace oracles

} // namespace lvn

#endif
