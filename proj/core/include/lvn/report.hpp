#ifndef LVN_REPORT_HPP
#define LVN_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "lvn/diagnostics.hpp"
#include "lvn/engine.hpp"

namespace lvn {

using Json = nlohmann::ordered_json;

/// Provenance header attached to every machine-readable report. The
/// timestamp is excluded from verify.json so that fixed-seed runs are
/// byte-identical.
struct Provenance {
    std::string version;
    std::string spec_hash;
    std::uint64_t seed = 0;
    TruncationLadder ladder;
    Tolerances tolerances{};
    bool include_timestamp = true;
};

std::string tool_version();

/// Doubles with 17 significant digits (round-trip exact).
std::string format_g17(double v);

Json provenance_json(const Provenance& p);
Json verdict_json(const DomainVerdict& v);
Json membership_json(const MembershipReport& r);

Json diagnose_report_json(const Provenance& p, const std::string& hamiltonian_descriptor,
                          const std::string& operator_descriptor, const MembershipReport& r);

/// series.csv: quantity,basis,column,N,value (one row per ladder point).
std::string series_csv(const MembershipReport& r);

/// trajectory.csv: t,trace,hs_norm,purity,dist_to_initial. trace and purity
/// are real parts (imaginary parts are roundoff for Hermitian inputs).
std::string trajectory_csv(const EvolutionTrajectory& t);

/// comparison.csv (long format): t,method,hs_distance_to_ref, where ref is
/// the first requested method.
std::string comparison_csv(const std::vector<double>& times,
                           const std::vector<std::pair<std::string, std::vector<double>>>& columns);

/// Write via a temp file in the same directory followed by a rename.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace lvn

#endif
