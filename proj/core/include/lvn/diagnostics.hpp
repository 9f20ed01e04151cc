#ifndef LVN_DIAGNOSTICS_HPP
#define LVN_DIAGNOSTICS_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lvn/models.hpp"
#include "lvn/verdict.hpp"

namespace lvn {

/// Strictly increasing truncation dimensions plus the padding factor used
/// for operator products. At least four points (the classifier needs them).
struct TruncationLadder {
    std::vector<int> dims;
    double pad_factor = 2.0;

    static TruncationLadder defaults();       // 16, 24, 32, 48, 64, 96, 128, 192, 256
    static TruncationLadder up_to(int top);   // defaults truncated to dims <= top
    int top() const { return dims.back(); }
    void validate() const;
};

/// Which diagnostic operator the partial sums probe.
///   comm           sum_{n<=N} ||[H,A] e_n||^2        (Dom H)
///   left           sum_{n<=N} ||H A e_n||^2          (core D)
///   right          sum_{n<=N} ||H A* e_n||^2         (core D)
///   double-comm    sum_{n<=N} ||[H,[H,A]] e_n||^2    (Dom H^2)
///   column(j)      sum_{m<=N} |(H A)_{mj}|^2         (A Dom H in Dom H probe)
///   comm-column(j) sum_{m<=N} |(H [H,A])_{mj}|^2     ([H,A] Dom H in Dom H probe)
/// VectorDomain tags the per-vector core-D0 series built by diagnose.
struct Quantity {
    enum class Kind { Comm, Left, Right, DoubleComm, Column, CommColumn, VectorDomain };
    Kind kind = Kind::Comm;
    int column = 0; // 1-based, Column/CommColumn only

    static Quantity comm() { return {Kind::Comm, 0}; }
    static Quantity left() { return {Kind::Left, 0}; }
    static Quantity right() { return {Kind::Right, 0}; }
    static Quantity double_comm() { return {Kind::DoubleComm, 0}; }
    static Quantity column_probe(int j) { return {Kind::Column, j}; }
    std::string tag() const;
};

struct PartialSumSeries {
    TruncationLadder ladder;
    Quantity quantity;
    std::string basis = "spec"; // "spec" or "eigen"
    std::vector<double> values; // one per ladder dimension, nondecreasing
};

struct Tolerances {
    double conv_tol = 1e-6; // relative last increment for convergent evidence
    double fit_tol = 5e-2;  // relative RMS residual bound for divergence fits
};

/// Classification of one series plus the winning fit. limit_estimate is
/// meaningful only for convergent evidence; gamma only for power growth.
struct DomainVerdict {
    Classification classification = Classification::Inconclusive;
    double limit_estimate = 0.0;
    GrowthModel growth_model = GrowthModel::Bounded;
    double gamma = 0.0;
    double slope_b = 0.0;
    double fit_residual = 0.0;
    PartialSumSeries series;
};

/// Diagnostic ladder for one quantity. Models are realized once at the
/// (padded) top dimension and the partial sums run over nested index boxes
/// of that fixed realization, which keeps every series exactly monotone.
/// For Diagonal Hamiltonians all product entries are edge-exact and padding
/// is skipped (both indices truncate at N); otherwise entries come from the
/// padded top realization and rows truncate at ceil(pad_factor * N).
PartialSumSeries partial_sums(const HamiltonianModel& h, const OperatorModel& a, Quantity q,
                              const TruncationLadder& ladder);

/// Fit growth models to the trailing window of the series and map the best
/// fit to an evidence class. Candidate models: c - b N^{-gamma} (convergent),
/// a + b log N, b N^gamma, b N. Divergence requires residual < fit_tol;
/// convergence requires the last relative increment < conv_tol; when the
/// best convergent-class and divergent-class fits are within 25% of each
/// other the verdict is Inconclusive.
DomainVerdict classify(const PartialSumSeries& series, const Tolerances& tol);

struct VectorDomainCheck {
    std::string which; // e.g. "psi[1]"
    DomainVerdict verdict;
};

/// Aggregated membership evidence for Dom H, core D, core D0 and Dom H^2.
struct MembershipReport {
    std::vector<DomainVerdict> invariance_columns; // per probe column j
    DomainVerdict invariance;                      // worst column
    DomainVerdict dom_H;                           // comm series
    DomainVerdict core_D_left;
    DomainVerdict core_D_right;
    Classification core_D = Classification::Inconclusive;
    bool core_D0_structural = false;
    std::vector<VectorDomainCheck> core_D0_vectors;
    Classification core_D0 = Classification::Inconclusive;
    DomainVerdict double_comm;
    std::vector<DomainVerdict> comm_invariance_columns; // [H,A] Dom H in Dom H probe
    Classification dom_H2 = Classification::Inconclusive;
    std::optional<DomainVerdict> dom_H_eigenbasis; // Hermitian-rule rerun
    std::vector<std::string> caveats;
    TruncationLadder ladder;
    Tolerances tolerances;
};

struct DiagnoseOptions {
    bool exhaustive_columns = false; // probe every column 1..N_1 instead of powers of two
};

/// Full membership diagnosis: invariance columns, comm, left, right,
/// double-comm and the core-D0 structural check, with the set ordering
/// D0 in D in Dom H enforced on the evidence level.
MembershipReport diagnose(const HamiltonianModel& h, const OperatorModel& a,
                          const TruncationLadder& ladder, const Tolerances& tol,
                          const DiagnoseOptions& opts = {});

/// Worst of two classifications (divergent dominates, then inconclusive).
Classification combine_worst(Classification a, Classification b);

} // namespace lvn

#endif
