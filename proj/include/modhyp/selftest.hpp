#pragma once

#include <iosfwd>

namespace modhyp {

/// Reduced-bound verification pass over the core identities (closed-form tau
/// vs scan, distance counts, prime-power recursion, multiplicativity,
/// solution counts, the gamma round trip, the distance-class trichotomy and
/// the density sweep). Prints one line per check. Returns true when all pass.
bool run_selftest(std::ostream& diag);

}  // namespace modhyp
