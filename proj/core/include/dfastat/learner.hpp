#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dfastat/automata.hpp"
#include "dfastat/ratio.hpp"

namespace dfastat {

/// Returns a string on which the hypothesis is wrong, or nothing.
using EquivalenceOracle = std::function<std::optional<BitString>(const Dfa&)>;

/// Angluin observation table. Rows are indexed by S and S.{0,1}, columns by
/// E; entries come from a memoized membership oracle.
class ObservationTable {
public:
    explicit ObservationTable(BitOracle membership);

    const std::vector<BitString>& prefixes() const { return prefixes_; }
    const std::vector<BitString>& suffixes() const { return suffixes_; }
    std::size_t membership_queries() const { return cache_.size(); }

    std::vector<Bit> row(const BitString& prefix);

    /// Adds S.b rows whose signature is missing from S. Returns true if S grew.
    bool close();
    /// Adds b.e columns for equal S rows whose b-successors differ. Returns true if E grew.
    bool make_consistent();
    bool is_closed();
    bool is_consistent();

    /// Every suffix of the counterexample joins E.
    void add_counterexample(const BitString& cex);

    Dfa hypothesis();

private:
    Bit member(const BitString& word);
    bool add_suffix(const BitString& suffix);

    BitOracle oracle_;
    std::map<BitString, Bit> cache_;
    std::vector<BitString> prefixes_;
    std::vector<BitString> suffixes_;
};

struct LearnResult {
    Dfa dfa;
    /// Size of the L* hypothesis before the agreement-preserving merge pass.
    std::size_t lstar_states = 0;
    std::size_t equivalence_queries = 0;
    std::size_t membership_queries = 0;
    std::vector<BitString> counterexamples;
};

/// Generic L* loop.
LearnResult learn_lstar(const BitOracle& membership, const EquivalenceOracle& equivalence);

/// Greedily redirects every edge into one state onto another whenever the
/// result still agrees with MAJ_a on {0,1}^{<k}; repeats to a fixed point.
/// Pairs are tried in (removed, kept) index order.
Dfa merge_agreeing_states(const Dfa& dfa, const Ratio& a, std::size_t k);

/// M_a(k): membership answers MAJ_a on every length; equivalence is exact
/// on {0,1}^{<k} and returns the shortest, lexicographically least
/// disagreement. The converged hypothesis then goes through
/// merge_agreeing_states, which only matters when the table separates
/// states using strings longer than the agreement horizon (k = 1).
LearnResult learn(const Ratio& a, std::size_t k);

struct BruteForceResult {
    /// An agreeing DFA of minimum size; transitions and labels the sample
    /// does not constrain are completed as self-loops and rejecting.
    Dfa dfa;
    std::size_t state_count = 0;
    /// Number of minimum-size machines, counted on the constrained part only
    /// and up to renaming of states.
    std::size_t minimal_solutions = 0;
};

inline constexpr std::size_t kBruteForceMaxK = 4;

/// Exhaustive search over canonical DFAs of size 1, 2, 3, ... for the
/// smallest agreeing with MAJ_a on {0,1}^{<k}. Throws std::length_error
/// for k > kBruteForceMaxK.
BruteForceResult brute_force_min_agreeing(const Ratio& a, std::size_t k);

}  // namespace dfastat
