#pragma once

#include <vector>

#include "dfastat/automata.hpp"
#include "dfastat/rng.hpp"

namespace dfastat::testing {

/// Uniformly random total DFA with the given number of states.
inline Dfa random_dfa(SplitMix64& rng, std::size_t states) {
    std::vector<Dfa::Row> delta(states);
    std::vector<bool> accepting(states);
    for (std::size_t q = 0; q < states; ++q) {
        delta[q] = {static_cast<State>(rng.next() % states), static_cast<State>(rng.next() % states)};
        accepting[q] = (rng.next() & 1) != 0;
    }
    return Dfa(states, static_cast<State>(rng.next() % states), std::move(accepting), std::move(delta));
}

/// Language equality by breadth-first search of the product automaton.
inline bool same_language(const Dfa& a, const Dfa& b) {
    std::vector<std::vector<bool>> seen(a.state_count(), std::vector<bool>(b.state_count(), false));
    std::vector<std::pair<State, State>> work{{a.start(), b.start()}};
    seen[a.start()][b.start()] = true;
    while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        if (a.accepting(p) != b.accepting(q)) return false;
        for (Bit bit : {Bit{0}, Bit{1}}) {
            State np = a.step(p, bit), nq = b.step(q, bit);
            if (!seen[np][nq]) {
                seen[np][nq] = true;
                work.emplace_back(np, nq);
            }
        }
    }
    return true;
}

/// Every string of length <= max_len gets the same verdict.
inline bool agree_up_to(const Dfa& a, const Dfa& b, std::size_t max_len) {
    for (std::size_t len = 0; len <= max_len; ++len)
        for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
            BitString x(len);
            for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<Bit>((code >> (len - 1 - i)) & 1);
            if (accepts(a, x) != accepts(b, x)) return false;
        }
    return true;
}

}  // namespace dfastat::testing
