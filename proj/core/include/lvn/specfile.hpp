#ifndef LVN_SPECFILE_HPP
#define LVN_SPECFILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "lvn/diagnostics.hpp"
#include "lvn/engine.hpp"
#include "lvn/models.hpp"

namespace lvn {

/// Parsed problem description from a sectioned key-value spec file.
/// Unknown sections and keys are rejected (strict mode). See
/// docs/formats.md for the full format.
struct SpecFile {
    HamiltonianModel hamiltonian;
    OperatorModel op;
    TruncationLadder ladder = TruncationLadder::defaults();
    Tolerances tolerances{};

    struct Evolution {
        std::vector<double> times;
        std::vector<EvolveMethod> methods;
        int dim = 32;
        double rk4_step = 0.0; // 0 means derive from the time span
    };
    std::optional<Evolution> evolution;
    std::optional<std::string> fixture_id;
    std::string source_hash; // fnv1a64 over the raw bytes
};

SpecFile parse_spec_text(std::string_view text);
SpecFile parse_spec_file(const std::string& path);

/// FNV-1a 64-bit hash, hex encoded; used for provenance headers.
std::string fnv1a64_hex(std::string_view bytes);

} // namespace lvn

#endif
