// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dfastat/estimation.hpp"
#include "dfastat/learner.hpp"
#include "dfastat/markov.hpp"
#include "dfastat/sim.hpp"

using namespace dfastat;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> theta_grid(double lo, double step, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
    return out;
}

Outcome closed_form_vs_solver() {
    Outcome o;
    double worst = 0.0;
    for (std::size_t k = 1; k <= 12; ++k) {
        const Dfa m = build_majority_dfa(k);
        for (double theta : theta_grid(0.05, 0.05, 19)) {
            const double numeric = 1.0 - limiting_acceptance(m, Bernoulli{theta}).value;
            worst = std::max(worst, std::abs(eta_derived(k, theta) - numeric));
        }
    }
    o.require(worst <= 1e-10, "max |derived - numeric| = " + fmt(worst));
    o.note("max |derived - numeric| = " + fmt(worst));
    const EtaReport r = eta_report(4, Ratio(3, 4));
    const double printed = r.eta_paper_printed.value_or(NAN);
    o.require(std::abs(printed - 0.9) < 1e-12 && std::abs(r.eta_derived - 0.1) < 1e-12 &&
                  std::abs(r.eta_numeric - 0.1) < 1e-10,
              "discrepancy row for k=4, theta=3/4");
    o.note("printed(4,3/4) = " + fmt(printed) + " vs derived " + fmt(r.eta_derived) + ", numeric " +
           fmt(r.eta_numeric));
    return o;
}

Outcome bound_check() {
    Outcome o;
    bool below = true, tight_at_half = true, decays = true;
    for (std::size_t k = 2; k <= 12; k += 2) {
        for (double theta : theta_grid(0.5, 0.05, 10)) below &= eta_derived(k, theta) <= eta_bound(k, theta) + 1e-15;
        tight_at_half &= std::abs(eta_derived(k, 0.5) - 0.5) < 1e-12 && std::abs(eta_bound(k, 0.5) - 0.5) < 1e-15;
        // Approaching 1/2 from above, eta climbs to 1/2.
        tight_at_half &= eta_derived(k, 0.5001) < 0.5 && eta_derived(k, 0.5001) > eta_derived(k, 0.55);
    }
    for (double theta : theta_grid(0.55, 0.05, 9)) {
        for (std::size_t k = 2; k + 2 <= 12; k += 2) decays &= eta_derived(k + 2, theta) < eta_derived(k, theta);
        // The bound's geometric rate (2 - 2 theta) per two extra states.
        decays &= eta_derived(12, theta) / eta_derived(2, theta) <= std::pow(2.0 - 2.0 * theta, 5) + 1e-15;
    }
    o.require(below, "eta <= (1/2)(2-2theta)^(k/2)");
    o.require(tight_at_half, "eta -> 1/2 as theta -> 1/2");
    o.require(decays, "geometric decay in k");
    o.note("even k 2..12, theta 0.50..0.95");
    return o;
}

// Score d in [lo, hi]: a 1 adds 2, a 0 subtracts 1, both clamped; accept iff d > 0.
// Tracks 3*ones - length exactly until a clamp is hit.
Dfa clamped_counter(int lo, int hi) {
    const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<Dfa::Row> delta(n);
    std::vector<bool> accepting(n);
    for (int d = lo; d <= hi; ++d) {
        const auto q = static_cast<std::size_t>(d - lo);
        delta[q] = {static_cast<State>(std::max(d - 1, lo) - lo), static_cast<State>(std::min(d + 2, hi) - lo)};
        accepting[q] = d > 0;
    }
    return Dfa(n, static_cast<State>(-lo), std::move(accepting), std::move(delta));
}

double half_crossing(const std::vector<double>& thetas, const std::vector<double>& rho) {
    for (std::size_t i = 1; i < thetas.size(); ++i)
        if (rho[i - 1] < 0.5 && rho[i] >= 0.5) {
            const double f = (0.5 - rho[i - 1]) / (rho[i] - rho[i - 1]);
            return thetas[i - 1] + f * (thetas[i] - thetas[i - 1]);
        }
    return NAN;
}

bool monotone_nondecreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - 1e-12) return false;
    return true;
}

Outcome learned_threshold_automata() {
    Outcome o;
    const Ratio a(1, 3);
    const BitOracle maj = [a](std::span<const Bit> x) { return majority_fn(x, a); };
    const auto thetas = theta_grid(0.01, 0.01, 99);

    const LearnResult r7 = learn(a, 7);
    o.require(!agreement_check(r7.dfa, maj, 6).has_value(), "k=7 exhaustive agreement");
    std::vector<double> rho7;
    for (double t : thetas) rho7.push_back(limiting_acceptance(r7.dfa, Bernoulli{t}).value);
    o.require(monotone_nondecreasing(rho7), "k=7 curve monotone");

    const LearnResult r24 = learn(a, 24);
    // Uniformly random strings of uniformly random length below 24.
    SplitMix64 rng(20240601);
    std::size_t disagreements = 0;
    BitString x;
    for (int i = 0; i < 1000000; ++i) {
        x.resize(rng.next() % 24);
        for (auto& b : x) b = static_cast<Bit>(rng.next() >> 63);
        disagreements += accepts(r24.dfa, x) != maj(x) ? 1 : 0;
    }
    o.require(disagreements == 0, "k=24 sampled agreement (" + std::to_string(disagreements) + " disagreements)");
    o.require(!majority_agreement_check(r24.dfa, a, 23).has_value(), "k=24 exact agreement");

    std::vector<double> rho24;
    for (double t : thetas) rho24.push_back(limiting_acceptance(r24.dfa, Bernoulli{t}).value);
    o.require(monotone_nondecreasing(rho24), "k=24 curve monotone");
    const double crossing = half_crossing(thetas, rho24);
    o.require(crossing > 0.28 && crossing < 0.40, "k=24 crossing of 1/2 in (0.28, 0.40)");

    o.note("states k=7: " + std::to_string(r7.dfa.state_count()) + " (reference 9), k=24: " +
           std::to_string(r24.dfa.state_count()) + " (reference 29)");
    o.note("k=7 crossing at theta = " + fmt(half_crossing(thetas, rho7)) + ", k=24 crossing at theta = " +
           fmt(crossing) + ", k=24 min rho = " + fmt(*std::min_element(rho24.begin(), rho24.end())));
    {
        const ChainAnalysis an = analyze_chain(r24.dfa, Bernoulli{0.5});
        const auto rec = an.structure.recurrent_ids();
        std::string classes;
        for (std::size_t c : rec) {
            std::size_t acc = 0;
            for (std::size_t s : an.structure.components[c]) acc += an.chain.accepting[s] ? 1 : 0;
            classes += (classes.empty() ? "" : ",") + std::to_string(an.structure.components[c].size()) + " states/" +
                       std::to_string(acc) + " accepting";
        }
        o.note("k=24 closed classes: " + classes);
    }
    // A 31-state agreeing machine with no absorbing state, for comparison.
    const Dfa counter = clamped_counter(-14, 16);
    std::vector<double> rho_counter;
    for (double t : thetas) rho_counter.push_back(limiting_acceptance(counter, Bernoulli{t}).value);
    o.note("clamped counter [-14,16]: " + std::to_string(counter.state_count()) + " states, agrees at k=24: " +
           (majority_agreement_check(counter, a, 23) ? "no" : "yes") + ", crossing at theta = " +
           fmt(half_crossing(thetas, rho_counter)));
    const Threshold t{a};
    o.note("R_1/3(24, theta) at 0.2/0.3/0.4/0.5: " + fmt(error_rate(r24.dfa, t, 0.2).value) + "/" +
           fmt(error_rate(r24.dfa, t, 0.3).value) + "/" + fmt(error_rate(r24.dfa, t, 0.4).value) + "/" +
           fmt(error_rate(r24.dfa, t, 0.5).value));
    return o;
}

Outcome minimality_oracle() {
    Outcome o;
    std::string sizes;
    for (const Ratio a : {Ratio(1, 2), Ratio(1, 3)})
        for (std::size_t k = 1; k <= 4; ++k) {
            const std::size_t learned = learn(a, k).dfa.state_count();
            const BruteForceResult brute = brute_force_min_agreeing(a, k);
            o.require(learned == brute.state_count, "a=" + a.str() + " k=" + std::to_string(k) + " learned " +
                                                        std::to_string(learned) + " vs minimum " +
                                                        std::to_string(brute.state_count));
            sizes += (sizes.empty() ? "" : " ") + a.str() + ":" + std::to_string(brute.state_count);
        }
    for (std::size_t k = 1; k <= 9; ++k)
        o.require(isomorphic(learn(Ratio(1, 2), k).dfa, build_majority_dfa(k)),
                  "learn(1/2, " + std::to_string(k) + ") isomorphic to M(k)");
    o.note("minimum sizes k=1..4 " + sizes);
    return o;
}

Outcome refuter_soundness() {
    Outcome o;
    SplitMix64 rng(5150);
    const Threshold half{Ratio(1, 2)};
    std::size_t refuted = 0;
    double smallest = 1.0;
    for (int i = 0; i < 200; ++i) {
        std::vector<Dfa::Row> delta;
        const std::size_t n = 1 + rng.next() % 12;
        std::vector<bool> acc(n);
        delta.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            delta[q] = {static_cast<State>(rng.next() % n), static_cast<State>(rng.next() % n)};
            acc[q] = (rng.next() & 1) != 0;
        }
        const Dfa d = minimize(Dfa(n, 0, std::move(acc), std::move(delta)));
        const auto cert = refute_consistency(d, half, {0.25, 0.75});
        refuted += cert.epsilon_star > 0.0 ? 1 : 0;
        smallest = std::min(smallest, cert.epsilon_star);
    }
    o.require(refuted == 200, std::to_string(refuted) + "/200 refuted");
    const double m4 = refute_consistency(build_majority_dfa(4), half, {0.25, 0.75}).epsilon_star;
    o.require(std::abs(m4 - 0.1) <= 1e-10, "M(4) epsilon* = " + fmt(m4));
    o.note("200/200 refuted, smallest epsilon* = " + fmt(smallest) + ", M(4) epsilon* = " + fmt(m4));
    return o;
}

Outcome counterexample_automata() {
    Outcome o;
    const Dfa last_bit = example_dominance_dfa();
    const double acc1 = run_trials(last_bit, Dominant{1, 0.1}, 1000, 1000, Seed{61}).frequency;
    const double acc0 = run_trials(last_bit, Dominant{0, 0.1}, 1000, 1000, Seed{61}).frequency;
    o.require(acc1 >= 0.99, "dominant(1) acceptance " + fmt(acc1));
    o.require(1.0 - acc0 >= 0.99, "dominant(0) rejection " + fmt(1.0 - acc0));

    const Dfa both_seen = example_degeneracy_dfa();
    const double deg0 = run_trials(both_seen, Degenerate{0}, 1000, 1000, Seed{62}).frequency;
    const double deg1 = run_trials(both_seen, Degenerate{1}, 1000, 1000, Seed{62}).frequency;
    const double fair = run_trials(both_seen, Bernoulli{0.5}, 1000, 1000, Seed{62}).frequency;
    o.require(deg0 == 0.0 && deg1 == 0.0, "degenerate acceptance 0");
    o.require(fair >= 0.999, "Bernoulli(0.5) acceptance " + fmt(fair));
    o.note("last_bit accept(j=1) " + fmt(acc1) + ", accept(j=0) " + fmt(acc0) + "; both_seen degenerate " + fmt(deg0) +
           "/" + fmt(deg1) + ", Bernoulli(0.5) " + fmt(fair));
    return o;
}

Outcome monte_carlo_vs_theory() {
    Outcome o;
    const std::pair<std::size_t, double> cases[] = {{10, 0.8}, {8, 0.3}, {6, 0.5}};
    for (const auto& [k, theta] : cases) {
        const TrialReport r = run_trials(build_majority_dfa(k), Bernoulli{theta}, 10000, 10000, Seed{70 + k});
        const double expected = 1.0 - eta_derived(k, theta);
        const double z = r.standard_error > 0 ? std::abs(r.frequency - expected) / r.standard_error : 0.0;
        o.require(std::abs(r.frequency - expected) <= 4.0 * r.standard_error,
                  "(k=" + std::to_string(k) + ", theta=" + fmt(theta) + ")");
        o.note("(" + std::to_string(k) + "," + fmt(theta) + "): " + fmt(r.frequency) + " vs " + fmt(expected) +
               ", z=" + fmt(z));
    }
    return o;
}

Outcome majority_disagreement() {
    Outcome o;
    const Dfa m8 = build_majority_dfa(8);
    const BitOracle maj = [](std::span<const Bit> x) { return majority_fn(x, Ratio(1, 2)); };
    const TrialReport fair = disagreement_trials(m8, maj, Bernoulli{0.5}, 10000, 10000, Seed{81});
    o.require(fair.frequency >= 0.45, "theta=1/2 disagreement " + fmt(fair.frequency));
    const TrialReport biased = disagreement_trials(m8, maj, Bernoulli{0.8}, 10000, 10000, Seed{82});
    const double budget = eta_derived(8, 0.8) + std::exp(-2.0 * 1e4 * 0.09) + 4.0 * biased.standard_error;
    o.require(biased.frequency <= budget, "theta=0.8 disagreement within budget");
    o.note("theta=1/2: " + fmt(fair.frequency) + "; theta=0.8: " + fmt(biased.frequency) + " <= " + fmt(budget));
    return o;
}

Outcome hoeffding() {
    Outcome o;
    const TrialReport r = deviation_trials(Bernoulli{0.5}, 0.5, 0.05, 1000, 10000, Seed{91});
    const double budget = std::exp(-5.0) + 4.0 * r.standard_error;
    o.require(r.frequency <= budget, "deviation fraction");
    o.note("P(|mean - 1/2| > 0.05) ~ " + fmt(r.frequency) + " <= " + fmt(budget));
    return o;
}

}  // namespace

// --known-failure N (repeatable) still prints FAIL for N but does not fail
// the exit status, so ctest can track every other criterion.
int main(int argc, char** argv) {
    std::vector<int> known;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--known-failure" && i + 1 < argc) {
            known.push_back(std::stoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--known-failure N]...\n", argv[0]);
            return 2;
        }
    }

    struct Criterion {
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"closed form vs solver", 1, closed_form_vs_solver},
        {"eta bound", 1, bound_check},
        {"learned threshold automata (a=1/3, k=7 and 24)", 120, learned_threshold_automata},
        {"minimality oracle", 60, minimality_oracle},
        {"refuter soundness", 5, refuter_soundness},
        {"counterexample automata", 10, counterexample_automata},
        {"Monte Carlo vs theory", 30, monte_carlo_vs_theory},
        {"majority disagreement", 30, majority_disagreement},
        {"Hoeffding", 5, hoeffding},
    };
    int failures = 0, unexpected = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(seconds < c.budget_seconds, "runtime " + fmt(seconds) + " s over " + fmt(c.budget_seconds) + " s");
        failures += o.pass ? 0 : 1;
        if (!o.pass && std::find(known.begin(), known.end(), index) == known.end()) ++unexpected;
        std::printf("%s %d %s [%.2f s]: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    if (!known.empty()) std::printf("%d unexpected failure(s)\n", unexpected);
    return unexpected == 0 ? 0 : 1;
}
