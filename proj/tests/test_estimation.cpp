#include <doctest.h>

#include <cmath>

#include "dfastat/estimation.hpp"
#include "support.hpp"

using namespace dfastat;

TEST_CASE("eta closed form") {
    CHECK(eta_derived(4, Ratio(3, 4)) == BigRational(1, 10));
    CHECK(eta_derived(4, Ratio(1, 2)) == BigRational(1, 2));
    CHECK(eta_derived(5, Ratio(1, 2)) == BigRational(3, 5));
    for (const Ratio theta : {Ratio(1, 10), Ratio(1, 2), Ratio(9, 10)}) CHECK(eta_derived(1, theta) == 1);
    CHECK(eta_derived(4, 0.75) == doctest::Approx(0.1));
    CHECK(eta_derived(2, 0.3) == doctest::Approx(0.7));
    CHECK_THROWS_AS(eta_derived(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(eta_derived(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(eta_derived(3, Ratio(0, 1)), std::invalid_argument);
}

TEST_CASE("eta in floating point is smooth through theta = 1/2") {
    for (std::size_t k = 1; k <= 20; ++k)
        for (std::int64_t d : {-3, -1, 0, 1, 3}) {
            const Ratio theta(100000 + d, 200000);
            CHECK(eta_derived(k, theta.to_double()) ==
                  doctest::Approx(static_cast<double>(eta_derived(k, theta))).epsilon(1e-12));
        }
}

TEST_CASE("eta equals one minus the solved limiting acceptance of M(k)") {
    for (std::size_t k = 1; k <= 16; ++k)
        for (int i = 1; i <= 19; ++i) {
            const double theta = 0.05 * i;
            const double numeric = 1.0 - limiting_acceptance(build_majority_dfa(k), Bernoulli{theta}).value;
            CHECK(std::abs(eta_derived(k, theta) - numeric) < 1e-9);
        }
}

TEST_CASE("the printed closed form evaluates to the limiting acceptance") {
    CHECK(eta_paper_printed(4, 0.75) == doctest::Approx(0.9));
    for (std::size_t k = 1; k <= 12; ++k)
        for (int i = 1; i <= 19; ++i) {
            if (i == 10) continue;
            const double theta = 0.05 * i;
            CHECK(std::abs(eta_paper_printed(k, theta) - (1.0 - eta_derived(k, theta))) < 1e-9);
        }
    CHECK_THROWS_AS(eta_paper_printed(4, 0.5), std::invalid_argument);
}

TEST_CASE("eta bound for even k") {
    CHECK(eta_bound(4, 0.75) == doctest::Approx(0.125));
    for (std::size_t k = 2; k <= 20; k += 2)
        for (double theta : {0.5, 0.6, 0.75, 0.9, 0.99}) CHECK(eta_derived(k, theta) <= eta_bound(k, theta) + 1e-15);
    CHECK_THROWS_AS(eta_bound(3, 0.75), std::invalid_argument);
    CHECK_THROWS_AS(eta_bound(4, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(eta_bound(4, 1.0), std::invalid_argument);
}

TEST_CASE("eta symmetry and monotonicity") {
    for (std::size_t k = 2; k <= 16; k += 2)
        for (double theta : {0.1, 0.3, 0.45}) CHECK(eta_derived(k, theta) + eta_derived(k, 1.0 - theta) == doctest::Approx(1.0));
    for (std::size_t k = 1; k <= 16; ++k)
        for (int i = 1; i < 19; ++i) {
            // Strict while the values are still distinguishable from 1 in double.
            const double lo = eta_derived(k, 0.05 * (i + 1)), hi = eta_derived(k, 0.05 * i);
            if (hi < 1.0 - 1e-12) CHECK(lo < hi);
            else CHECK(lo <= hi);
        }
    for (std::size_t k = 2; k + 2 <= 16; k += 2)
        for (double theta : {0.6, 0.75, 0.9}) CHECK(eta_derived(k + 2, theta) < eta_derived(k, theta));
}

TEST_CASE("error rate of M(4) for the threshold functional") {
    const Dfa m4 = build_majority_dfa(4);
    const Threshold half{Ratio(1, 2)};
    CHECK(error_rate(m4, half, 0.75).value == doctest::Approx(0.1));
    CHECK(error_rate(m4, half, 0.25).value == doctest::Approx(0.1));
    CHECK(error_rate(m4, half, 0.5).at_threshold);
    CHECK(error_rate(m4, half, 0.5).value == doctest::Approx(0.5));
    CHECK_FALSE(error_rate(m4, half, 0.75).at_threshold);
    for (std::size_t k = 2; k <= 12; k += 2)
        for (double theta : {0.1, 0.2, 0.35})
            CHECK(error_rate(build_majority_dfa(k), half, theta).value ==
                  doctest::Approx(error_rate(build_majority_dfa(k), half, 1.0 - theta).value));
    CHECK_THROWS_AS(error_rate(m4, half, 0.0), std::invalid_argument);
}

TEST_CASE("threshold functional is strict") {
    const Threshold t{Ratio(1, 3)};
    CHECK(t(Ratio(1, 3)) == 0);
    CHECK(t(Ratio(1, 2)) == 1);
    CHECK(t(0.3) == 0);
}

TEST_CASE("Hoeffding bound for majority agreement") {
    CHECK(maj_agreement_bound(0.6, 100) == doctest::Approx(std::exp(-2.0)));
    CHECK(maj_agreement_bound(0.75, 8) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(maj_agreement_bound(0.5, 8), std::invalid_argument);
}

TEST_CASE("refuting M(4) against the threshold functional") {
    const auto cert = refute_consistency(build_majority_dfa(4), Threshold{Ratio(1, 2)}, {0.25, 0.75});
    CHECK(cert.epsilon_star == doctest::Approx(0.1));
    CHECK(cert.clause == ObstructionClause::AllHeterogeneous);
    REQUIRE(cert.classes.size() == 1);
    CHECK(cert.classes[0].kind == ClassKind::Heterogeneous);
    CHECK(cert.points.size() == 2);
    CHECK(format_certificate(cert).find("epsilon* = 0.1") != std::string::npos);
    CHECK(certificate_csv(cert).rfind("process,target,acceptance,error\n", 0) == 0);
}

TEST_CASE("refuting the degeneracy automaton against a table") {
    Table table;
    table.entries.emplace_back(Bernoulli{0.5}, 0);
    table.entries.emplace_back(MarkovBinary{0.3, 0.3}, 1);
    const auto cert = refute_consistency(example_degeneracy_dfa(), table);
    CHECK(cert.epsilon_star == doctest::Approx(1.0));
    CHECK(cert.clause == ObstructionClause::HomogeneousTrap);
    CHECK(std::holds_alternative<Bernoulli>(cert.points[cert.witness].process));
    REQUIRE(cert.classes.size() == 1);
    CHECK(cert.classes[0].kind == ClassKind::HomogeneousAccepting);
}

TEST_CASE("refuting a constant automaton") {
    const Dfa all(1, 0, {true}, {{{0, 0}}});
    const auto cert = refute_consistency(all, Threshold{Ratio(1, 2)}, {0.2, 0.8});
    CHECK(cert.epsilon_star == doctest::Approx(1.0));
    CHECK(cert.clause == ObstructionClause::HomogeneousTrap);
    CHECK(to_string(cert.points[cert.witness].process) == "bernoulli:0.2");
}

TEST_CASE("refutation rejects vacuous or unsupported inputs") {
    const Dfa m3 = build_majority_dfa(3);
    CHECK_THROWS_AS(refute_consistency(m3, Threshold{Ratio(1, 2)}, {0.6, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(refute_consistency(m3, Threshold{Ratio(1, 2)}, {}), std::invalid_argument);
    CHECK_THROWS_AS(refute_consistency(m3, Threshold{Ratio(1, 2)}, {0.0, 0.7}), std::invalid_argument);
    Table degenerate;
    degenerate.entries.emplace_back(Degenerate{0}, 0);
    degenerate.entries.emplace_back(Bernoulli{0.5}, 1);
    CHECK_THROWS_AS(refute_consistency(m3, degenerate), std::invalid_argument);
    CHECK_THROWS_AS(refute_consistency(m3, Table{}), std::invalid_argument);
    Table constant;
    constant.entries.emplace_back(Bernoulli{0.2}, 1);
    CHECK_FALSE(constant.nontrivial());
    CHECK_THROWS_AS(refute_consistency(m3, constant), std::invalid_argument);
}

TEST_CASE("every random DFA is refuted with a consistent certificate") {
    SplitMix64 rng(99);
    const std::vector<double> thetas{0.2, 0.4, 0.6, 0.8};
    const Threshold half{Ratio(1, 2)};
    for (int i = 0; i < 300; ++i) {
        const Dfa d = testing::random_dfa(rng, 1 + rng.next() % 10);
        const auto cert = refute_consistency(d, half, thetas);
        CHECK(cert.epsilon_star > 0.0);
        CHECK(cert.dfa == minimize(d));
        double worst = 0.0;
        for (double theta : thetas) worst = std::max(worst, error_rate(d, half, theta).value);
        CHECK(cert.epsilon_star == doctest::Approx(worst).epsilon(1e-12));
        bool homogeneous = false;
        for (const auto& cls : cert.classes) homogeneous |= cls.kind != ClassKind::Heterogeneous;
        CHECK(homogeneous == (cert.clause == ObstructionClause::HomogeneousTrap));
        if (cert.clause == ObstructionClause::AllHeterogeneous)
            for (const auto& p : cert.points) {
                CHECK(p.acceptance > 0.0);
                CHECK(p.acceptance < 1.0);
            }
    }
}

TEST_CASE("eta report and discrepancy table") {
    const EtaReport r = eta_report(4, Ratio(3, 4));
    CHECK(r.eta_derived == doctest::Approx(0.1));
    CHECK(r.eta_numeric == doctest::Approx(0.1));
    REQUIRE(r.eta_paper_printed.has_value());
    CHECK(*r.eta_paper_printed == doctest::Approx(0.9));
    REQUIRE(r.bound.has_value());
    CHECK(*r.bound == doctest::Approx(0.125));
    CHECK(format_eta_report(r) == "k=4 theta=3/4 derived=0.1 printed=0.9 numeric=0.1 bound=0.125");
    CHECK_FALSE(eta_report(3, Ratio(1, 2)).eta_paper_printed.has_value());

    const std::string csv = eta_discrepancy_csv({4}, {0.5, 0.75});
    CHECK(csv.rfind("k,theta,derived,printed,one_minus_derived,printed_inverted_ratio,numeric,"
                    "printed_minus_acceptance\n",
                    0) == 0);
    CHECK(csv.find("\n4,0.5,0.5,,0.5,,0.5,\n") != std::string::npos);
    CHECK(csv.find("\n4,0.75,0.1,0.9,0.9,") != std::string::npos);
}
