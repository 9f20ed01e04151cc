// Command-line frontend: diagnose / evolve / verify subcommands over the
// operator-spec file format (see docs/formats.md).

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvn/commands.hpp"
#include "lvn/report.hpp"

namespace {

void add_common_flags(CLI::App* cmd, lvn::CommonOptions& opts,
                      std::vector<int>& ladder, double& pad, double& tol_conv, double& tol_fit) {
    cmd->add_option("--ladder", ladder, "Truncation ladder dimensions (comma separated)")
        ->delimiter(',');
    cmd->add_option("--pad", pad, "Padding factor for operator products (>= 1)");
    cmd->add_option("--tol-conv", tol_conv, "Relative last-increment tolerance for convergence");
    cmd->add_option("--tol-fit", tol_fit, "Relative RMS residual tolerance for divergence fits");
    cmd->add_option("--seed", opts.seed, "RNG seed recorded in the provenance header");
    cmd->add_option("--budget-mb", opts.budget_mb, "Memory budget for the vectorized Liouvillian");
}

void collect_common(lvn::CommonOptions& opts, const std::vector<int>& ladder, double pad,
                    double tol_conv, double tol_fit) {
    if (!ladder.empty()) opts.ladder_dims = ladder;
    if (pad > 0) opts.pad_factor = pad;
    if (tol_conv > 0) opts.tol_conv = tol_conv;
    if (tol_fit > 0) opts.tol_fit = tol_fit;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Liouville-space truncation diagnostics and mixed-state evolution"};
    app.set_version_flag("--version", lvn::tool_version());
    app.require_subcommand(1);

    std::string spec_path, out_dir = ".";
    std::vector<int> ladder;
    double pad = 0, tol_conv = 0, tol_fit = 0;

    lvn::CommonOptions diag_opts;
    CLI::App* diag = app.add_subcommand("diagnose", "Classify Dom-H / core membership evidence");
    diag->add_option("spec", spec_path, "Operator spec file")->required();
    diag->add_option("-o,--out", out_dir, "Output directory (report.json, series.csv)");
    add_common_flags(diag, diag_opts, ladder, pad, tol_conv, tol_fit);

    lvn::CommonOptions evolve_opts;
    CLI::App* evolve = app.add_subcommand("evolve", "Integrate the Liouville-von Neumann equation");
    evolve->add_option("spec", spec_path, "Operator spec file with an [evolution] section")
        ->required();
    evolve->add_option("-o,--out", out_dir, "Output directory (trajectory.csv, report.json)");
    evolve->add_option("--method", evolve_opts.methods,
                       "Override the spec's methods (spectral-exact, vectorized-expm, rk4)");
    evolve->add_flag("--force", evolve_opts.force, "Override a divergent Dom-H preflight");
    add_common_flags(evolve, evolve_opts, ladder, pad, tol_conv, tol_fit);

    lvn::VerifyCliOptions verify_opts;
    CLI::App* verify = app.add_subcommand("verify", "Run the property and oracle suites");
    verify->add_option("-o,--out", out_dir, "Output directory (verify.json)");
    verify->add_option("--ladder", ladder, "Truncation ladder dimensions (comma separated)")
        ->delimiter(',');
    verify->add_option("--pad", pad, "Padding factor for operator products");
    verify->add_option("--tol-conv", tol_conv, "Convergence tolerance");
    verify->add_option("--tol-fit", tol_fit, "Divergence-fit tolerance");
    verify->add_option("--seed", verify_opts.seed, "RNG seed (fixed seed gives bit-identical output)");
    verify->add_option("--budget-mb", verify_opts.budget_mb, "Memory budget");
    verify->add_flag("--inject-fault", verify_opts.inject_fault,
                     "Corrupt a fixture to exercise the harness itself");

    CLI11_PARSE(app, argc, argv);

    if (diag->parsed()) {
        collect_common(diag_opts, ladder, pad, tol_conv, tol_fit);
        return lvn::cmd_diagnose(spec_path, out_dir, diag_opts);
    }
    if (evolve->parsed()) {
        collect_common(evolve_opts, ladder, pad, tol_conv, tol_fit);
        return lvn::cmd_evolve(spec_path, out_dir, evolve_opts);
    }
    if (!ladder.empty()) verify_opts.ladder_dims = ladder;
    if (pad > 0) verify_opts.pad_factor = pad;
    if (tol_conv > 0) verify_opts.tol_conv = tol_conv;
    if (tol_fit > 0) verify_opts.tol_fit = tol_fit;
    return lvn::cmd_verify(out_dir, verify_opts);
}
