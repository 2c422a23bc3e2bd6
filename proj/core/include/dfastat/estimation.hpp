#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dfastat/automata.hpp"
#include "dfastat/markov.hpp"
#include "dfastat/processes.hpp"
#include "dfastat/ratio.hpp"

namespace dfastat {

/// T_a(theta) = [theta > a].
struct Threshold {
    Ratio a;

    Bit operator()(const Ratio& theta) const { return theta > a ? 1 : 0; }
    Bit operator()(double theta) const { return theta > a.to_double() ? 1 : 0; }
};

/// Functional on a finite parameter set: explicit process -> label pairs.
struct Table {
    std::vector<std::pair<ProcessSpec, Bit>> entries;

    /// Both labels occur.
    bool nontrivial() const;
};

using Functional = std::variant<Threshold, Table>;

// ---------------------------------------------------------------------------
// Majority automaton error theory

/// Limiting rejection probability of M(k) under Bernoulli(theta):
/// (r^m - 1) / (r^k - 1) with r = theta / (1 - theta) and m = ceil(k/2),
/// and m / k at theta = 1/2. Requires 0 < theta < 1.
BigRational eta_derived(std::size_t k, const Ratio& theta);
double eta_derived(std::size_t k, double theta);

/// The printed closed form (u - u^(floor(k/2)+1)) / (u - u^(k+1)) with
/// u = 1/theta - 1, evaluated literally. Undefined at theta = 1/2.
double eta_paper_printed(std::size_t k, double theta);

/// (1/2)(2 - 2 theta)^(k/2) for even k and 1/2 <= theta < 1.
double eta_bound(std::size_t k, double theta);

/// exp(-2 n (theta - 1/2)^2), the Hoeffding bound on P(MAJ(X^n) != T_1/2(theta)).
double maj_agreement_bound(double theta, std::size_t n);

struct EtaReport {
    std::size_t k = 0;
    Ratio theta;
    double eta_derived = 0.0;
    std::optional<double> eta_paper_printed;
    double eta_numeric = 0.0;
    std::optional<double> bound;
};

EtaReport eta_report(std::size_t k, const Ratio& theta);
std::string format_eta_report(const EtaReport& report);

/// One row per (k, theta): derived, printed, 1 - derived, the printed form
/// with u replaced by 1/u, and the solver value.
std::string eta_discrepancy_csv(const std::vector<std::size_t>& ks, const std::vector<double>& thetas);

// ---------------------------------------------------------------------------
// Error rates and refutation

struct ErrorRate {
    double value = 0.0;
    /// theta == a, where the target is defined as [theta > a] = 0 but the
    /// asymptotic error of M_a(k) tends to 1/2.
    bool at_threshold = false;
    bool is_true_limit = true;
};

/// Limiting probability that the DFA's verdict differs from T_a(theta).
ErrorRate error_rate(const Dfa& dfa, const Threshold& functional, double theta);

enum class ClassKind { HomogeneousAccepting, HomogeneousRejecting, Heterogeneous };
const char* to_string(ClassKind kind);

struct ClassVerdict {
    std::vector<State> members;
    ClassKind kind;
};

struct PointError {
    ProcessSpec process;
    Bit target;
    double acceptance;
    double error;
};

enum class ObstructionClause {
    /// A reachable recurrent class is all-accepting or all-rejecting, so the
    /// limit is pinned away from the target at some parameter.
    HomogeneousTrap,
    /// Every reachable recurrent class mixes accepting and rejecting states,
    /// so the limiting acceptance lies strictly inside (0,1).
    AllHeterogeneous,
};

struct RefutationCertificate {
    Dfa dfa;
    std::vector<ClassVerdict> classes;
    std::vector<PointError> points;
    double epsilon_star = 0.0;
    std::size_t witness = 0;
    ObstructionClause clause = ObstructionClause::AllHeterogeneous;
    std::string explanation;
};

/// Minimizes the DFA, classifies its reachable recurrent classes, and
/// evaluates the limiting error at every theta. Throws std::invalid_argument
/// if a theta lies outside (0,1) or the functional is constant on thetas.
RefutationCertificate refute_consistency(const Dfa& dfa, const Threshold& functional, const std::vector<double>& thetas);

/// Table form: every entry must be a full-support process with a Markov
/// representation (Bernoulli in (0,1) or MarkovBinary).
RefutationCertificate refute_consistency(const Dfa& dfa, const Table& functional);

std::string format_certificate(const RefutationCertificate& cert);
std::string certificate_csv(const RefutationCertificate& cert);

}  // namespace dfastat
