#ifndef LVN_COMMANDS_HPP
#define LVN_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvn/engine.hpp"

namespace lvn {

/// Exit-code contract: 0 success, 2 spec/parse error, 3 preflight refusal,
/// 4 resource budget exceeded, 1 internal error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitPreflight = 3;
inline constexpr int kExitResource = 4;

struct CommonOptions {
    std::optional<std::vector<int>> ladder_dims; // --ladder
    std::optional<double> pad_factor;            // --pad
    std::optional<double> tol_conv;              // --tol-conv
    std::optional<double> tol_fit;               // --tol-fit
    std::uint64_t seed = 20250501;               // --seed
    double budget_mb = kDefaultBudgetMb;         // --budget-mb
    bool force = false;                          // --force
    std::vector<std::string> methods;            // --method (evolve override)
};

/// Run the membership diagnostics of a spec file; writes report.json and
/// series.csv into out_dir. Exit 0 on a completed diagnosis regardless of
/// the verdicts.
int cmd_diagnose(const std::string& spec_path, const std::string& out_dir,
                 const CommonOptions& opts = {});

/// Evolve the spec's operator; writes trajectory.csv, report.json and, when
/// more than one method is requested, comparison.csv. Refuses with exit 3
/// when the Dom-H preflight reports divergent evidence and --force is absent.
int cmd_evolve(const std::string& spec_path, const std::string& out_dir,
               const CommonOptions& opts = {});

struct VerifyCliOptions {
    std::uint64_t seed = 20250501;
    std::optional<std::vector<int>> ladder_dims;
    std::optional<double> pad_factor;
    std::optional<double> tol_conv;
    std::optional<double> tol_fit;
    double budget_mb = kDefaultBudgetMb;
    bool inject_fault = false;
};

/// Run the property and oracle suites; writes verify.json and prints one
/// pass/fail line per check. Exit 0 iff every check passes.
int cmd_verify(const std::string& out_dir, const VerifyCliOptions& opts = {});

} // namespace lvn

#endif
