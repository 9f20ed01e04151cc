#ifndef LVN_VERDICT_HPP
#define LVN_VERDICT_HPP

#include <string>

namespace lvn {

/// Numerical evidence classes for "sum converges" statements probed on a
/// truncation ladder. Evidence, not proof.
enum class Classification { ConvergentEvidence, DivergentEvidence, Inconclusive };

/// Growth shape fitted to a diagnostic partial-sum series.
enum class GrowthModel { Bounded, Log, Power, Linear };

std::string to_string(Classification c);
std::string to_string(GrowthModel g);

} // namespace lvn

#endif
