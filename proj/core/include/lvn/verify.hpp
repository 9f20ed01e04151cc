#ifndef LVN_VERIFY_HPP
#define LVN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lvn/diagnostics.hpp"
#include "lvn/engine.hpp"
#include "lvn/report.hpp"

namespace lvn {

struct VerifyParams {
    std::uint64_t seed = 20250501;
    TruncationLadder ladder = TruncationLadder::up_to(128);
    Tolerances tolerances{};
    double budget_mb = kDefaultBudgetMb;
    bool inject_fault = false; // harness self-test: corrupt a fixture
};

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct VerifyRun {
    VerifyParams params;
    std::vector<CheckResult> checks;
    long matrices_checked = 0; // norm-ordering audit tally
    bool all_passed = false;
};

/// Run the full invariant and oracle suites: group law, unitarity,
/// vectorization consistency, Courbage bound, Stone slopes, tail formula,
/// parallelogram law, basis invariance, set ordering, the oracle catalog,
/// action consistency, the double-commutator identity, the H^2 footnote
/// check, series monotonicity, realization nesting and solver consistency.
/// Every TruncatedMatrix the run produces passes through the norm-ordering
/// audit (operator_norm <= hs_norm <= trace_norm).
VerifyRun run_verify(const VerifyParams& params = {});

/// Deterministic for a fixed seed: no timestamp inside.
Json verify_json(const VerifyRun& run);

} // namespace lvn

#endif
