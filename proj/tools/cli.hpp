#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dfastat/automata.hpp"

namespace dfastat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnsupportedModel = 3;

/// Environment variable consulted for the default --seed.
inline constexpr const char* kSeedEnv = "DFASTAT_SEED";

/// A DFA file path, `maj:<k>`, `learn:<a>:<k>`, `example:dominance` or
/// `example:degeneracy`.
Dfa resolve_dfa(const std::string& source);

struct ThetaGrid {
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 0;

    std::vector<double> points() const;
};

/// `min:max:steps` with 0 < min < max < 1 and steps >= 2.
ThetaGrid parse_grid(const std::string& text);

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfastat::cli
