#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "dfastat/automata.hpp"
#include "dfastat/ratio.hpp"
#include "dfastat/rng.hpp"

namespace dfastat {

/// iid Bernoulli(theta).
struct Bernoulli {
    double theta;
};

/// Constant process; the same law as Bernoulli(bit).
struct Degenerate {
    Bit bit;
};

/// Fair coin flips for a Geometric(switch_rate) number of steps, then
/// target_bit forever. P(X_n != target_bit) = (1 - switch_rate)^n / 2.
struct Dominant {
    Bit target_bit;
    double switch_rate;
};

/// Two-state Markov source started from its stationary law.
/// p01 = P(next = 1 | current = 0), p10 = P(next = 0 | current = 1).
struct MarkovBinary {
    double p01;
    double p10;

    double stationary_one() const { return p01 / (p01 + p10); }
};

using ProcessSpec = std::variant<Bernoulli, Degenerate, Dominant, MarkovBinary>;

/// Validates parameter ranges; throws std::invalid_argument.
void validate(const ProcessSpec& spec);

/// `bernoulli:<theta>`, `degenerate:<bit>`, `dominant:<bit>:<rate>`,
/// `markov:<p01>:<p10>`. Numbers accept decimal or p/q syntax.
ProcessSpec parse_process(std::string_view text);
std::string to_string(const ProcessSpec& spec);

/// True when every finite pattern has positive probability.
bool has_full_support(const ProcessSpec& spec);

/// Streaming generator for one trial of a process.
class ProcessSampler {
public:
    ProcessSampler(const ProcessSpec& spec, Seed seed, std::uint64_t trial);

    Bit next();

private:
    ProcessSpec spec_;
    SplitMix64 rng_;
    Bit previous_ = 0;
    bool started_ = false;
    bool switched_ = false;
};

/// Length-n realization; a pure function of (spec, n, seed, trial).
BitString sample(const ProcessSpec& spec, std::size_t n, Seed seed, std::uint64_t trial);

/// Running mean kept as an exact (ones, count) pair.
class IncrementalMean {
public:
    void push(Bit b) {
        ones_ += b;
        ++count_;
    }

    std::int64_t count() const { return count_; }
    std::int64_t ones() const { return ones_; }

    /// Throws std::logic_error before the first bit.
    Ratio value() const;
    double value_double() const;

private:
    std::int64_t ones_ = 0;
    std::int64_t count_ = 0;
};

Ratio incremental_mean(std::span<const Bit> stream);

/// exp(-2 n eps^2): Hoeffding's bound on P(|mean - theta| > eps), one side.
double hoeffding_bound(std::size_t n, double eps);

}  // namespace dfastat
