#include "dfastat/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dfastat/markov.hpp"

namespace dfastat {

namespace {

double binomial_stderr(double p, std::size_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

// Runs body(trial, counts) over all trials on a fixed partition of threads.
// Counts are summed afterwards, so the result does not depend on scheduling.
template <class Body>
std::vector<std::size_t> parallel_count(std::size_t trials, std::size_t slots, unsigned threads, Body body) {
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(trials, 1)));
    std::vector<std::vector<std::size_t>> partial(workers, std::vector<std::size_t>(slots, 0));
    auto work = [&](unsigned w) {
        const std::size_t begin = trials * w / workers;
        const std::size_t end = trials * (w + 1) / workers;
        for (std::size_t t = begin; t < end; ++t) body(t, partial[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    std::vector<std::size_t> total(slots, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < slots; ++i) total[i] += p[i];
    return total;
}

TrialReport make_report(std::size_t n, std::size_t trials, const std::vector<std::size_t>& schedule,
                        const std::vector<std::size_t>& counts) {
    TrialReport report;
    report.n = n;
    report.trials = trials;
    report.hits = counts.back();
    report.frequency = static_cast<double>(report.hits) / static_cast<double>(trials);
    report.standard_error = binomial_stderr(report.frequency, trials);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double p = static_cast<double>(counts[i]) / static_cast<double>(trials);
        report.checkpoints.push_back({schedule[i], p, binomial_stderr(p, trials)});
    }
    return report;
}

void require_trials(std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("need at least one trial");
}

}  // namespace

std::vector<std::size_t> checkpoint_schedule(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t div : {16, 8, 4, 2}) {
        const std::size_t c = n / div;
        if (c >= 1 && (out.empty() || out.back() != c)) out.push_back(c);
    }
    if (out.empty() || out.back() != n) out.push_back(n);
    return out;
}

TrialReport run_trials(const Dfa& dfa, const ProcessSpec& spec, std::size_t n, std::size_t trials, Seed seed,
                       SimOptions options) {
    validate(spec);
    require_trials(trials);
    const auto schedule = checkpoint_schedule(n);
    const auto counts = parallel_count(trials, schedule.size(), options.threads, [&](std::size_t t, auto& local) {
        ProcessSampler sampler(spec, seed, t);
        State q = dfa.start();
        std::size_t pos = 0;
        for (std::size_t c = 0; c < schedule.size(); ++c) {
            for (; pos < schedule[c]; ++pos) q = dfa.step(q, sampler.next());
            local[c] += dfa.accepting(q) ? 1 : 0;
        }
    });
    return make_report(n, trials, schedule, counts);
}

TrialReport disagreement_trials(const Dfa& dfa, const BitOracle& reference, const ProcessSpec& spec, std::size_t n,
                                std::size_t trials, Seed seed, SimOptions options) {
    validate(spec);
    require_trials(trials);
    const auto counts = parallel_count(trials, 1, options.threads, [&](std::size_t t, auto& local) {
        const BitString x = sample(spec, n, seed, t);
        local[0] += accepts(dfa, x) != reference(x) ? 1 : 0;
    });
    return make_report(n, trials, {n}, counts);
}

TrialReport deviation_trials(const ProcessSpec& spec, double center, double eps, std::size_t n, std::size_t trials,
                             Seed seed, SimOptions options) {
    validate(spec);
    require_trials(trials);
    if (n == 0) throw std::invalid_argument("deviation needs n >= 1");
    const auto counts = parallel_count(trials, 1, options.threads, [&](std::size_t t, auto& local) {
        ProcessSampler sampler(spec, seed, t);
        IncrementalMean mean;
        for (std::size_t i = 0; i < n; ++i) mean.push(sampler.next());
        local[0] += std::abs(mean.value_double() - center) > eps ? 1 : 0;
    });
    return make_report(n, trials, {n}, counts);
}

std::vector<State> trajectory(const Dfa& dfa, std::span<const Bit> input) {
    std::vector<State> out;
    out.reserve(input.size() + 1);
    out.push_back(dfa.start());
    for (Bit b : input) out.push_back(dfa.step(out.back(), b));
    return out;
}

std::string trial_report_csv(const TrialReport& report) {
    std::ostringstream out;
    out << "checkpoint_n,acceptance,stderr\n";
    for (const auto& c : report.checkpoints)
        out << c.n << ',' << format_number(c.frequency) << ',' << format_number(c.standard_error) << '\n';
    return out.str();
}

}  // namespace dfastat
