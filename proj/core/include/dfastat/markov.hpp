#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dfastat/automata.hpp"
#include "dfastat/errors.hpp"
#include "dfastat/processes.hpp"
#include "dfastat/ratio.hpp"

namespace dfastat {

/// Markov chain on DFA states (times source modes for a Markov source)
/// obtained by feeding the process into the transition map.
struct InducedChain {
    struct Edge {
        std::size_t to;
        double prob;
    };

    /// Row-stochastic sparse transitions; only positive entries are stored.
    std::vector<std::vector<Edge>> rows;
    std::vector<double> start;
    std::vector<bool> accepting;
    /// DFA state and source mode behind each chain state. The mode is the
    /// last emitted bit for a Markov source and always 0 for iid sources.
    std::vector<State> dfa_state;
    std::vector<Bit> mode;
    std::size_t mode_count = 1;

    std::size_t size() const { return rows.size(); }
    std::string label(std::size_t s) const;
};

/// Bernoulli, Degenerate and MarkovBinary only. The DFA is
/// reachability-pruned first. A Dominant spec throws UnsupportedModelError.
InducedChain induce_chain(const Dfa& dfa, const ProcessSpec& spec);

/// Strongly connected components of the positive-probability graph.
/// Recurrent classes are the closed components.
struct ChainStructure {
    std::vector<std::vector<std::size_t>> components;
    std::vector<std::size_t> component_of;
    std::vector<bool> recurrent;
    /// Reachable from the support of the start distribution.
    std::vector<bool> reachable;
    /// gcd of cycle lengths; 0 for transient components.
    std::vector<std::size_t> period;
    /// Cyclic subclass of each state within its recurrent class, in [0, period).
    std::vector<std::size_t> phase;
    /// Probability of eventually entering each component (0 for transient ones).
    std::vector<double> absorption;

    std::vector<std::size_t> recurrent_ids() const;
};

ChainStructure decompose(const InducedChain& chain);

struct ClassAnalysis {
    std::size_t class_id = 0;
    std::vector<std::size_t> members;
    /// Stationary probabilities, aligned with members.
    std::vector<double> pi;
    double acceptance_mass = 0.0;
    /// pi(F | cyclic subclass) for each subclass; one entry when aperiodic.
    std::vector<double> cyclic_acceptance;
};

/// Dense partial-pivoting LU solve of pi P = pi, sum(pi) = 1 on one
/// recurrent class. Throws NumericError if the solution is not a
/// strictly positive distribution.
ClassAnalysis stationary(const InducedChain& chain, const ChainStructure& structure, std::size_t class_id);

struct AcceptanceLimit {
    double value = 0.0;
    /// False when a reachable periodic class has acceptance varying across
    /// its cyclic subclasses; value is then the Cesaro limit.
    bool is_true_limit = true;
};

struct ChainAnalysis {
    InducedChain chain;
    ChainStructure structure;
    std::vector<ClassAnalysis> classes;
    AcceptanceLimit limit;
};

ChainAnalysis analyze_chain(const Dfa& dfa, const ProcessSpec& spec);

/// Sum over reachable recurrent classes of absorption times pi(F).
AcceptanceLimit limiting_acceptance(const Dfa& dfa, const ProcessSpec& spec);

/// Same quantity under Bernoulli(theta) in exact rational arithmetic
/// (Gaussian elimination over rationals). Intended for small automata.
BigRational exact_limiting_acceptance(const Dfa& dfa, const Ratio& theta);

/// CSV: one row per recurrent class, then a final `limit` row.
std::string analysis_csv(const ChainAnalysis& analysis);
std::string analysis_text(const ChainAnalysis& analysis);

/// Fixed rendering for CSV cells: up to 15 significant digits, '.' decimal.
std::string format_number(double value);

}  // namespace dfastat
