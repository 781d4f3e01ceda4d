#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace multival {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRefuted = 2, kExitUnknown = 3 };

/// Runs the command line `multival args...` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The glued-ring storyline: local ring, co-embeddable closure, independent (1, i),
/// integrality witnesses, and the non-local topology. Returns the exit code.
int demo_ww(std::ostream& out);

/// Local components, V-coarsenings and the independent-sum report for mv(Q:p, ...).
int demo_decompose(const std::vector<long>& primes, int trials, std::uint64_t seed, std::ostream& out);

}  // namespace multival
