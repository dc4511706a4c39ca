#pragma once

#include <ostream>

namespace wsum::cli {

inline constexpr int kExitHolds = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolated = 2;

// Subcommands: check-conditions, check-premise, dominance, bounds, capacity,
// verify-appendix, gen-pair. Reports go to `out` (or --out), diagnostics to
// `err`. Returns 0 when the checked inequality holds, 2 when it is
// empirically violated and 1 for invalid input or an unmet hypothesis.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsum::cli
