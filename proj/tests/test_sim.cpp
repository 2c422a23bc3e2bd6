#include <doctest.h>

#include <cmath>

#include "dfastat/markov.hpp"
#include "dfastat/sim.hpp"

using namespace dfastat;

TEST_CASE("trajectories") {
    // 1-based labels 3, 4, 5 on M(5) are 2, 3, 4 here.
    CHECK(trajectory(build_majority_dfa(5), bits_from_string("11")) == std::vector<State>{2, 3, 4});
    CHECK(trajectory(example_degeneracy_dfa(), bits_from_string("0011")) == std::vector<State>{0, 1, 1, 3, 3});
    CHECK(trajectory(build_majority_dfa(3), BitString{}) == std::vector<State>{1});
}

TEST_CASE("checkpoint schedule") {
    CHECK(checkpoint_schedule(1600) == std::vector<std::size_t>{100, 200, 400, 800, 1600});
    CHECK(checkpoint_schedule(5) == std::vector<std::size_t>{1, 2, 5});
    CHECK(checkpoint_schedule(1) == std::vector<std::size_t>{1});
    CHECK(checkpoint_schedule(0) == std::vector<std::size_t>{0});
}

TEST_CASE("degenerate zeros never reach acceptance on M(k)") {
    const TrialReport r = run_trials(build_majority_dfa(5), Degenerate{0}, 50, 100, Seed{1});
    CHECK(r.hits == 0);
    for (const auto& c : r.checkpoints) CHECK(c.frequency == 0.0);
}

TEST_CASE("results do not depend on the thread count") {
    const Dfa m = build_majority_dfa(7);
    const TrialReport one = run_trials(m, Bernoulli{0.55}, 300, 2000, Seed{17}, {1});
    for (unsigned threads : {2u, 3u, 8u}) {
        const TrialReport many = run_trials(m, Bernoulli{0.55}, 300, 2000, Seed{17}, {threads});
        CHECK(many.hits == one.hits);
        REQUIRE(many.checkpoints.size() == one.checkpoints.size());
        for (std::size_t i = 0; i < one.checkpoints.size(); ++i)
            CHECK(many.checkpoints[i].frequency == one.checkpoints[i].frequency);
    }
    CHECK(run_trials(m, Bernoulli{0.55}, 300, 2000, Seed{18}, {1}).hits != one.hits);
}

TEST_CASE("Monte Carlo acceptance approaches the limiting acceptance") {
    const Dfa m = build_majority_dfa(6);
    for (const ProcessSpec& spec : {ProcessSpec{Bernoulli{0.6}}, ProcessSpec{MarkovBinary{0.3, 0.2}}}) {
        const double limit = limiting_acceptance(m, spec).value;
        const TrialReport r = run_trials(m, spec, 400, 20000, Seed{3});
        CHECK(std::abs(r.frequency - limit) < 5 * r.standard_error + 1e-3);
        CHECK(r.standard_error == doctest::Approx(std::sqrt(r.frequency * (1 - r.frequency) / 20000)));
    }
}

TEST_CASE("disagreement and deviation trials") {
    const Dfa m = build_majority_dfa(5);
    const BitOracle self = [&](std::span<const Bit> x) { return accepts(m, x); };
    CHECK(disagreement_trials(m, self, Bernoulli{0.5}, 30, 500, Seed{2}).hits == 0);
    CHECK(deviation_trials(Degenerate{1}, 1.0, 0.01, 10, 50, Seed{2}).hits == 0);
    CHECK(deviation_trials(Degenerate{1}, 0.5, 0.01, 10, 50, Seed{2}).hits == 50);
    const TrialReport d = deviation_trials(Bernoulli{0.5}, 0.5, 0.1, 100, 20000, Seed{4});
    CHECK(d.frequency <= 2 * std::exp(-2.0) + 4 * d.standard_error);
    CHECK_THROWS_AS(run_trials(m, Bernoulli{0.5}, 10, 0, Seed{1}), std::invalid_argument);
    CHECK_THROWS_AS(run_trials(m, Bernoulli{1.5}, 10, 1, Seed{1}), std::invalid_argument);
}

TEST_CASE("dominant processes simulate without a chain") {
    const TrialReport r = run_trials(example_dominance_dfa(), Dominant{1, 0.2}, 200, 500, Seed{6});
    CHECK(r.frequency == 1.0);
    CHECK(r.checkpoints.front().frequency < 1.0);
}

TEST_CASE("trial report CSV") {
    const TrialReport r = run_trials(build_majority_dfa(3), Degenerate{1}, 4, 10, Seed{0});
    CHECK(trial_report_csv(r) == "checkpoint_n,acceptance,stderr\n1,1,0\n2,1,0\n4,1,0\n");
}
