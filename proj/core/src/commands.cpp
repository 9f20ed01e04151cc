#include "lvn/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "lvn/report.hpp"
#include "lvn/specfile.hpp"
#include "lvn/verify.hpp"

namespace lvn {

namespace {

template <typename Fn>
int guard(Fn&& fn) {
    try {
        return fn();
    } catch (const SpecFileError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const PreflightError& e) {
        std::cerr << "preflight refusal: " << e.what() << "\n";
        return kExitPreflight;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

void apply_overrides(SpecFile& spec, const CommonOptions& opts) {
    if (opts.ladder_dims) spec.ladder.dims = *opts.ladder_dims;
    if (opts.pad_factor) spec.ladder.pad_factor = *opts.pad_factor;
    try {
        spec.ladder.validate();
    } catch (const ShapeError& e) {
        throw SpecFileError(std::string("--ladder/--pad: ") + e.what(), 0);
    }
    if (opts.tol_conv) spec.tolerances.conv_tol = *opts.tol_conv;
    if (opts.tol_fit) spec.tolerances.fit_tol = *opts.tol_fit;
    if (spec.tolerances.conv_tol <= 0 || spec.tolerances.fit_tol <= 0)
        throw SpecFileError("--tol-conv/--tol-fit must be positive", 0);
}

Provenance make_provenance(const SpecFile& spec, std::uint64_t seed, bool timestamp) {
    Provenance p;
    p.version = tool_version();
    p.spec_hash = "fnv1a64:" + spec.source_hash;
    p.seed = seed;
    p.ladder = spec.ladder;
    p.tolerances = spec.tolerances;
    p.include_timestamp = timestamp;
    return p;
}

std::string series_summary(const DomainVerdict& v) {
    std::string s = v.series.quantity.tag() + " series " + to_string(v.classification);
    if (v.classification == Classification::DivergentEvidence)
        s += " (growth " + to_string(v.growth_model) + ")";
    s += "; last values";
    const std::size_t k = v.series.values.size();
    for (std::size_t i = k >= 3 ? k - 3 : 0; i < k; ++i)
        s += " S_" + std::to_string(v.series.ladder.dims[i]) + "=" +
             format_g17(v.series.values[i]);
    return s;
}

} // namespace

int cmd_diagnose(const std::string& spec_path, const std::string& out_dir,
                 const CommonOptions& opts) {
    return guard([&] {
        SpecFile spec = parse_spec_file(spec_path);
        apply_overrides(spec, opts);

        const MembershipReport report =
            diagnose(spec.hamiltonian, spec.op, spec.ladder, spec.tolerances);

        const std::filesystem::path dir(out_dir);
        const Json j = diagnose_report_json(make_provenance(spec, opts.seed, true),
                                            spec.hamiltonian.descriptor(), spec.op.descriptor(),
                                            report);
        write_text_atomic(dir / "report.json", j.dump(2) + "\n");
        write_text_atomic(dir / "series.csv", series_csv(report));

        std::cout << "dom_H: " << to_string(report.dom_H.classification)
                  << ", core_D: " << to_string(report.core_D)
                  << ", core_D0: " << to_string(report.core_D0)
                  << ", dom_H2: " << to_string(report.dom_H2) << "\n";
        return kExitOk;
    });
}

int cmd_evolve(const std::string& spec_path, const std::string& out_dir,
               const CommonOptions& opts) {
    return guard([&] {
        SpecFile spec = parse_spec_file(spec_path);
        apply_overrides(spec, opts);
        if (!spec.evolution)
            throw SpecFileError("cmd_evolve needs an [evolution] section", 0);
        SpecFile::Evolution evo = *spec.evolution;
        if (!opts.methods.empty()) {
            evo.methods.clear();
            for (const auto& name : opts.methods) {
                const auto m = evolve_method_from_string(name);
                if (!m) throw SpecFileError("unknown --method '" + name + "'", 0);
                evo.methods.push_back(*m);
            }
        }

        // model-level preflight: the necessary Dom-H condition, with the
        // sufficient H rho_0 condition reported alongside
        const MembershipReport pre =
            diagnose(spec.hamiltonian, spec.op, spec.ladder, spec.tolerances);
        const bool divergent =
            pre.dom_H.classification == Classification::DivergentEvidence;
        if (divergent && !opts.force) {
            std::cerr << "preflight refusal: the initial operator carries divergent Dom-H "
                         "evidence; evolution under the Liouville-von Neumann equation is not "
                         "justified at this truncation (--force to override)\n  "
                      << series_summary(pre.dom_H) << "\n  sufficient condition (H rho_0 "
                      << "Hilbert-Schmidt): " << to_string(pre.core_D_left.classification)
                      << "\n";
            return kExitPreflight;
        }

        const TruncatedMatrix a0 = spec.op.realize(evo.dim);

        std::vector<EvolutionTrajectory> trajectories;
        for (const EvolveMethod m : evo.methods) {
            EvolveOptions eopts;
            eopts.method = m;
            eopts.rk4_step = evo.rk4_step;
            eopts.force = opts.force;
            eopts.preflight_dom_H = pre.dom_H.classification;
            eopts.budget_mb = opts.budget_mb;
            trajectories.push_back(evolve(spec.hamiltonian, a0, evo.times, eopts));
        }

        const std::filesystem::path dir(out_dir);
        write_text_atomic(dir / "trajectory.csv", trajectory_csv(trajectories.front()));

        // reference for errors: spectral-exact (computed on demand)
        std::optional<EvolutionTrajectory> reference;
        for (std::size_t i = 0; i < evo.methods.size(); ++i)
            if (evo.methods[i] == EvolveMethod::SpectralExact) reference = trajectories[i];
        const bool has_rk4 = std::count(evo.methods.begin(), evo.methods.end(),
                                        EvolveMethod::Rk4) > 0;
        if (!reference && (evo.methods.size() > 1 || has_rk4)) {
            EvolveOptions eopts;
            eopts.method = EvolveMethod::SpectralExact;
            reference = evolve(spec.hamiltonian, a0, evo.times, eopts);
        }

        Json evolution_json;
        evolution_json["dim"] = evo.dim;
        evolution_json["times"] = evo.times;
        Json method_names = Json::array();
        for (const EvolveMethod m : evo.methods) method_names.push_back(to_string(m));
        evolution_json["methods"] = std::move(method_names);
        evolution_json["rk4_step"] = evo.rk4_step;
        evolution_json["preflight"] =
            Json{{"dom_H", to_string(pre.dom_H.classification)},
                 {"sufficient_left", to_string(pre.core_D_left.classification)},
                 {"forced", divergent && opts.force}};

        double max_norm_drift = 0.0, max_trace_drift = 0.0;
        for (const auto& t : trajectories) {
            for (const double d : t.hs_norm_drift) max_norm_drift = std::max(max_norm_drift, d);
            for (const double d : t.trace_drift) max_trace_drift = std::max(max_trace_drift, d);
        }
        evolution_json["max_hs_norm_drift"] = max_norm_drift;
        evolution_json["max_trace_drift"] = max_trace_drift;

        if (reference) {
            Json distances;
            std::vector<std::pair<std::string, std::vector<double>>> columns;
            for (std::size_t i = 0; i < evo.methods.size(); ++i) {
                std::vector<double> per_t;
                double worst = 0.0;
                for (std::size_t k = 0; k < evo.times.size(); ++k) {
                    const double d = (trajectories[i].states[k].entries() -
                                      reference->states[k].entries())
                                         .norm();
                    per_t.push_back(d);
                    worst = std::max(worst, d);
                }
                distances[to_string(evo.methods[i])] = worst;
                columns.emplace_back(to_string(evo.methods[i]), std::move(per_t));
            }
            if (has_rk4) {
                EvolveOptions half;
                half.method = EvolveMethod::Rk4;
                half.rk4_step = evo.rk4_step / 2.0;
                half.force = opts.force;
                half.preflight_dom_H = pre.dom_H.classification;
                const EvolutionTrajectory halved =
                    evolve(spec.hamiltonian, a0, evo.times, half);
                std::vector<double> per_t;
                double err_h2 = 0.0;
                for (std::size_t k = 0; k < evo.times.size(); ++k) {
                    const double d =
                        (halved.states[k].entries() - reference->states[k].entries()).norm();
                    per_t.push_back(d);
                    err_h2 = std::max(err_h2, d);
                }
                const double err_h = distances[to_string(EvolveMethod::Rk4)].get<double>();
                columns.emplace_back("rk4-half-step", std::move(per_t));
                evolution_json["rk4_halving_ratio"] = err_h2 > 0.0 ? err_h / err_h2 : 0.0;
            }
            evolution_json["max_distance_to_reference"] = std::move(distances);
            if (evo.methods.size() > 1 || has_rk4)
                write_text_atomic(dir / "comparison.csv", comparison_csv(evo.times, columns));
        }

        Json j;
        j["provenance"] = provenance_json(make_provenance(spec, opts.seed, true));
        j["hamiltonian"] = spec.hamiltonian.descriptor();
        j["operator"] = spec.op.descriptor();
        j["evolution"] = std::move(evolution_json);
        write_text_atomic(dir / "report.json", j.dump(2) + "\n");

        std::cout << "evolved " << evo.times.size() << " points at N=" << evo.dim
                  << "; max HS-norm drift " << format_g17(max_norm_drift) << "\n";
        return kExitOk;
    });
}

int cmd_verify(const std::string& out_dir, const VerifyCliOptions& opts) {
    return guard([&] {
        VerifyParams params;
        params.seed = opts.seed;
        params.budget_mb = opts.budget_mb;
        params.inject_fault = opts.inject_fault;
        if (opts.ladder_dims) params.ladder.dims = *opts.ladder_dims;
        if (opts.pad_factor) params.ladder.pad_factor = *opts.pad_factor;
        try {
            params.ladder.validate();
        } catch (const ShapeError& e) {
            throw SpecFileError(std::string("--ladder/--pad: ") + e.what(), 0);
        }
        if (opts.tol_conv) params.tolerances.conv_tol = *opts.tol_conv;
        if (opts.tol_fit) params.tolerances.fit_tol = *opts.tol_fit;

        const VerifyRun run = run_verify(params);
        write_text_atomic(std::filesystem::path(out_dir) / "verify.json",
                          verify_json(run).dump(2) + "\n");
        for (const auto& c : run.checks)
            std::cout << (c.passed ? "[ ok ] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        std::cout << (run.all_passed ? "all checks passed" : "CHECKS FAILED") << " ("
                  << run.checks.size() << " checks, " << run.matrices_checked
                  << " matrices audited)\n";
        return run.all_passed ? kExitOk : kExitInternal;
    });
}

} // namespace lvn
