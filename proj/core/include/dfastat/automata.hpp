#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfastat/ratio.hpp"

namespace dfastat {

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;
using State = std::uint32_t;

/// Membership oracle over finite bit strings.
using BitOracle = std::function<Bit(std::span<const Bit>)>;

/// "0110" -> {0,1,1,0}. Throws on characters other than '0' and '1'.
BitString bits_from_string(std::string_view text);
std::string bits_to_string(std::span<const Bit> bits);

/// Deterministic automaton over the alphabet {0,1} with a total transition
/// map. States are 0-indexed. Immutable once constructed.
class Dfa {
public:
    using Row = std::array<State, 2>;

    /// Validates that delta is total over state_count states and every
    /// image, the start state, and each accepting state is in range.
    Dfa(std::size_t state_count, State start, std::vector<bool> accepting, std::vector<Row> delta);

    std::size_t state_count() const { return delta_.size(); }
    State start() const { return start_; }
    bool accepting(State q) const { return accepting_[q]; }
    const std::vector<bool>& accepting_mask() const { return accepting_; }
    State step(State q, Bit b) const { return delta_[q][b]; }
    const std::vector<Row>& delta() const { return delta_; }

    std::vector<State> accepting_states() const;

    friend bool operator==(const Dfa&, const Dfa&) = default;

private:
    State start_;
    std::vector<bool> accepting_;
    std::vector<Row> delta_;
};

struct RunResult {
    State final_state;
    Bit accepted;
};

/// Left fold of delta over the input from the start state.
RunResult run(const Dfa& dfa, std::span<const Bit> input);

inline Bit accepts(const Dfa& dfa, std::span<const Bit> input) { return run(dfa, input).accepted; }

/// MAJ_a(x) = [ones(x) > a|x|], evaluated by integer cross-multiplication.
/// Throws std::invalid_argument unless 0 < a < 1.
Bit majority_fn(std::span<const Bit> input, const Ratio& threshold);

/// The same predicate on the sufficient statistic (length, ones).
inline bool majority_exceeds(std::int64_t length, std::int64_t ones, const Ratio& threshold) {
    return static_cast<__int128>(ones) * threshold.den() > static_cast<__int128>(threshold.num()) * length;
}

/// The k-state majority automaton M(k). The 1-indexed construction
/// Q = {1..k}, q0 = floor((k+1)/2), F = {ceil(k/2)+1..k},
/// delta(i,0) = i-1+[i=1], delta(i,1) = i+1-[i=k] is shifted down by one.
Dfa build_majority_dfa(std::size_t k);

/// Two states; state j is entered by reading bit j, and state 1 accepts.
Dfa example_dominance_dfa();

/// Four states remembering which symbols have been seen.
/// Indices: 0 = q_eps (start), 1 = q_0, 2 = q_1, 3 = q_01 (accepting, absorbing).
Dfa example_degeneracy_dfa();

/// States reachable from start, renumbered breadth-first (0-edge first).
Dfa prune_unreachable(const Dfa& dfa);

/// Moore partition refinement followed by canonical breadth-first
/// renumbering. Equal languages give identical outputs.
Dfa minimize(const Dfa& dfa);

/// Start-, acceptance-, and transition-preserving bijection test.
bool isomorphic(const Dfa& a, const Dfa& b);

/// Shortest, then lexicographically least, string of length <= max_len
/// on which dfa and oracle differ.
std::optional<BitString> agreement_check(const Dfa& dfa, const BitOracle& oracle, std::size_t max_len);

/// Exact agreement check against MAJ_a, equivalent to the exhaustive
/// search but run over (length, ones, state) triples so it stays cheap for
/// max_len in the twenties.
std::optional<BitString> majority_agreement_check(const Dfa& dfa, const Ratio& threshold, std::size_t max_len);

}  // namespace dfastat
