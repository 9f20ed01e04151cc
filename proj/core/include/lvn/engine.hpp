#ifndef LVN_ENGINE_HPP
#define LVN_ENGINE_HPP

#include <optional>
#include <vector>

#include "lvn/core_ops.hpp"
#include "lvn/diagnostics.hpp"
#include "lvn/models.hpp"

namespace lvn {

/// Default memory budget; caps the vectorized superoperator at N = 96
/// (16 * 96^4 bytes).
inline constexpr double kDefaultBudgetMb = 1296.0;

/// Spectral data of a truncated Hamiltonian, realizing U(t) = V e^{-i t D} V*
/// and the conjugation superpropagator A -> U(t) A U(t)*. For Diagonal
/// models V is the identity and rotations are skipped.
class Propagator {
public:
    static Propagator make(const HamiltonianModel& h, int dim);

    int dim() const { return static_cast<int>(eigenvalues_.size()); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Matrix& eigenvectors() const { return eigenvectors_; }

    /// U(t) as a dense matrix.
    Matrix unitary(double t) const;

    /// Superpropagator action U(t) A U(t)*; preserves the HS norm.
    TruncatedMatrix apply(double t, const TruncatedMatrix& a) const;

    /// Density variant; trace and positivity survive to the carried tolerance.
    DensityMatrix apply(double t, const DensityMatrix& rho) const;

private:
    Propagator() = default;
    Eigen::VectorXd eigenvalues_;
    Matrix eigenvectors_;
    bool diagonal_ = false;
};

/// [H, A] truncated to a.dim. `pad` is the inner dimension of the product
/// (0 picks the default: a.dim for Diagonal models, where the entrywise
/// formula (lambda_m - lambda_n) a_mn is edge-exact and padding is skipped,
/// and 2 * a.dim otherwise).
TruncatedMatrix commutator_apply(const HamiltonianModel& h, const TruncatedMatrix& a, int pad = 0);

/// [H, [H, A]] with both commutators at the same inner dimension.
TruncatedMatrix liouvillian_squared_apply(const HamiltonianModel& h, const TruncatedMatrix& a,
                                          int pad = 0);

/// Column-major vectorization: vec(A) stacks columns, so
/// vec([H, A]) = (I kron H - conj(H) kron I) vec(A). That Hermitian
/// N^2 x N^2 matrix is what `matrix` holds; its eigenvalues are the pairwise
/// differences of the truncated Hamiltonian's eigenvalues.
class VectorizedLiouvillian {
public:
    static VectorizedLiouvillian build(const HamiltonianModel& h, int dim,
                                       double budget_mb = kDefaultBudgetMb);

    int dim() const { return dim_; }
    const Matrix& matrix() const { return matrix_; }
    TruncatedMatrix apply(const TruncatedMatrix& a) const;

private:
    VectorizedLiouvillian() = default;
    int dim_ = 0;
    Matrix matrix_;
};

Vector vec(const TruncatedMatrix& a);
TruncatedMatrix unvec(const Vector& v, int dim);

enum class EvolveMethod { SpectralExact, VectorizedExpm, Rk4 };
std::string to_string(EvolveMethod m);
std::optional<EvolveMethod> evolve_method_from_string(std::string_view name);

struct EvolveOptions {
    EvolveMethod method = EvolveMethod::SpectralExact;
    double rk4_step = 0.0;  // required > 0 for Rk4
    bool force = false;     // skip the preflight refusal
    /// Dom-H evidence from a model-aware diagnosis. When absent, rk4 runs a
    /// ladder check on the zero-extended input matrix itself (which can only
    /// confirm truncation-scale convergence; model-level callers should pass
    /// their own verdict).
    std::optional<Classification> preflight_dom_H;
    double budget_mb = kDefaultBudgetMb;
};

struct EvolutionTrajectory {
    std::vector<double> times;
    std::vector<TruncatedMatrix> states;
    EvolveMethod method = EvolveMethod::SpectralExact;
    double rk4_step = 0.0;
    std::vector<double> hs_norm_drift; // | ||a(t)||_HS - ||a0||_HS | per point
    std::vector<double> trace_drift;   // | tr a(t) - tr a0 | per point
    Classification preflight = Classification::Inconclusive;
};

/// Integrate i dA/dt = [H, A] from A(0) = a0 through the given times
/// (strictly increasing, starting at 0). spectral-exact evaluates
/// U(t) a0 U(t)* directly and is the reference; vectorized-expm exponentiates
/// the vectorized Liouvillian through its eigendecomposition; rk4 is a
/// fixed-step classical Runge-Kutta on the commutator form.
EvolutionTrajectory evolve(const HamiltonianModel& h, const TruncatedMatrix& a0,
                           const std::vector<double>& times, const EvolveOptions& opts = {});

struct ProbeOptions {
    bool force = false;
    std::optional<Classification> preflight_dom_H;
};

/// Difference-quotient residuals r(t) = || i (U(t) A U(t)* - A)/t - [H,A] ||_HS
/// over a decreasing t ladder, plus the log-log slope (absent when all
/// residuals sit at the roundoff floor, e.g. for commuting inputs).
struct StoneProbe {
    std::vector<double> ts;
    std::vector<double> residuals;
    std::optional<double> slope;
    bool commuting = false;
};
StoneProbe stone_probe(const HamiltonianModel& h, const TruncatedMatrix& a,
                       std::vector<double> t_ladder, const ProbeOptions& opts = {});

/// Checks || U(t) A U(t)* - A ||_HS <= ||[H,A]||_HS * |t| on a grid. Ratios
/// are reported, not thrown: values above 1 + 1e-8 indicate truncation bias.
struct CourbageProbe {
    double bound = 0.0; // ||[H,A]||_HS
    std::vector<double> ts;
    std::vector<double> ratios; // 0 when the bound vanishes
    double max_ratio = 0.0;
};
CourbageProbe courbage_probe(const HamiltonianModel& h, const TruncatedMatrix& a,
                             const std::vector<double>& t_grid, const ProbeOptions& opts = {});

} // namespace lvn

#endif
