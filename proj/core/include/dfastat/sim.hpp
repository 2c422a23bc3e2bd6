#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfastat/automata.hpp"
#include "dfastat/processes.hpp"
#include "dfastat/rng.hpp"

namespace dfastat {

struct Checkpoint {
    std::size_t n = 0;
    double frequency = 0.0;
    double standard_error = 0.0;
};

/// Empirical frequency of an event over independent trials.
struct TrialReport {
    std::size_t trials = 0;
    std::size_t n = 0;
    std::size_t hits = 0;
    double frequency = 0.0;
    /// sqrt(p(1-p) / trials)
    double standard_error = 0.0;
    /// Geometric schedule n/16, n/8, n/4, n/2, n (lengths below 1 dropped).
    std::vector<Checkpoint> checkpoints;
};

struct SimOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

std::vector<std::size_t> checkpoint_schedule(std::size_t n);

/// Acceptance of the length-n prefix, per checkpoint and at n.
TrialReport run_trials(const Dfa& dfa, const ProcessSpec& spec, std::size_t n, std::size_t trials, Seed seed,
                       SimOptions options = {});

/// Frequency of dfa(x) != reference(x) over sampled length-n strings x.
TrialReport disagreement_trials(const Dfa& dfa, const BitOracle& reference, const ProcessSpec& spec, std::size_t n,
                                std::size_t trials, Seed seed, SimOptions options = {});

/// Frequency of |mean(X^n) - center| > eps.
TrialReport deviation_trials(const ProcessSpec& spec, double center, double eps, std::size_t n, std::size_t trials,
                             Seed seed, SimOptions options = {});

/// xi_0 = start, xi_i = delta(xi_{i-1}, x_i).
std::vector<State> trajectory(const Dfa& dfa, std::span<const Bit> input);

/// Header `checkpoint_n,acceptance,stderr`, one row per checkpoint.
std::string trial_report_csv(const TrialReport& report);

}  // namespace dfastat
