#include "dfastat/automata.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace dfastat {

BitString bits_from_string(std::string_view text) {
    BitString bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string may only contain '0' and '1'");
        bits.push_back(static_cast<Bit>(c - '0'));
    }
    return bits;
}

std::string bits_to_string(std::span<const Bit> bits) {
    std::string out;
    out.reserve(bits.size());
    for (Bit b : bits) out.push_back(b ? '1' : '0');
    return out;
}

Dfa::Dfa(std::size_t state_count, State start, std::vector<bool> accepting, std::vector<Row> delta)
    : start_(start), accepting_(std::move(accepting)), delta_(std::move(delta)) {
    if (state_count == 0) throw std::invalid_argument("a DFA needs at least one state");
    if (delta_.size() != state_count) throw std::invalid_argument("transition table size differs from state count");
    if (accepting_.size() != state_count) throw std::invalid_argument("acceptance mask size differs from state count");
    if (start_ >= state_count) throw std::invalid_argument("start state out of range");
    for (const Row& row : delta_)
        for (State target : row)
            if (target >= state_count) throw std::invalid_argument("transition target out of range");
}

std::vector<State> Dfa::accepting_states() const {
    std::vector<State> out;
    for (State q = 0; q < state_count(); ++q)
        if (accepting_[q]) out.push_back(q);
    return out;
}

RunResult run(const Dfa& dfa, std::span<const Bit> input) {
    State q = dfa.start();
    for (Bit b : input) q = dfa.step(q, b);
    return {q, static_cast<Bit>(dfa.accepting(q))};
}

Bit majority_fn(std::span<const Bit> input, const Ratio& threshold) {
    if (!threshold.in_open_unit()) throw std::invalid_argument("majority threshold must lie in (0,1)");
    std::int64_t ones = 0;
    for (Bit b : input) ones += b;
    return majority_exceeds(static_cast<std::int64_t>(input.size()), ones, threshold) ? 1 : 0;
}

Dfa build_majority_dfa(std::size_t k) {
    if (k == 0) throw std::invalid_argument("majority automaton needs k >= 1");
    std::vector<Dfa::Row> delta(k);
    std::vector<bool> accepting(k, false);
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t down = i - 1 + (i == 1 ? 1 : 0);
        const std::size_t up = i + 1 - (i == k ? 1 : 0);
        delta[i - 1] = {static_cast<State>(down - 1), static_cast<State>(up - 1)};
        accepting[i - 1] = i >= (k + 1) / 2 + 1;  // i > ceil(k/2)
    }
    const auto start = static_cast<State>((k + 1) / 2 - 1);
    return Dfa(k, start, std::move(accepting), std::move(delta));
}

Dfa example_dominance_dfa() {
    return Dfa(2, 0, {false, true}, {{{0, 1}}, {{0, 1}}});
}

Dfa example_degeneracy_dfa() {
    // q_eps -0-> q_0, q_eps -1-> q_1, q_0 loops on 0, q_1 loops on 1, q_01 absorbs.
    return Dfa(4, 0, {false, false, false, true}, {{{1, 2}}, {{1, 3}}, {{3, 2}}, {{3, 3}}});
}

namespace {

// Breadth-first order of the states reachable from start, 0-edge first.
std::vector<State> bfs_order(const Dfa& dfa) {
    std::vector<State> order;
    std::vector<bool> seen(dfa.state_count(), false);
    order.push_back(dfa.start());
    seen[dfa.start()] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (Bit b : {Bit{0}, Bit{1}}) {
            State next = dfa.step(order[head], b);
            if (!seen[next]) {
                seen[next] = true;
                order.push_back(next);
            }
        }
    }
    return order;
}

// Quotient of dfa by a class labelling, renumbered canonically.
Dfa quotient(const Dfa& dfa, const std::vector<std::size_t>& cls) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> rename(dfa.state_count(), unset);
    std::vector<State> reps;
    std::queue<State> work;
    auto visit = [&](State q) {
        if (rename[cls[q]] == unset) {
            rename[cls[q]] = reps.size();
            reps.push_back(q);
            work.push(q);
        }
    };
    visit(dfa.start());
    while (!work.empty()) {
        State q = work.front();
        work.pop();
        visit(dfa.step(q, 0));
        visit(dfa.step(q, 1));
    }
    std::vector<Dfa::Row> delta(reps.size());
    std::vector<bool> accepting(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) {
        State q = reps[i];
        delta[i] = {static_cast<State>(rename[cls[dfa.step(q, 0)]]), static_cast<State>(rename[cls[dfa.step(q, 1)]])};
        accepting[i] = dfa.accepting(q);
    }
    return Dfa(reps.size(), 0, std::move(accepting), std::move(delta));
}

}  // namespace

Dfa prune_unreachable(const Dfa& dfa) {
    std::vector<std::size_t> identity(dfa.state_count());
    for (std::size_t q = 0; q < identity.size(); ++q) identity[q] = q;
    return quotient(dfa, identity);
}

Dfa minimize(const Dfa& input) {
    const Dfa dfa = prune_unreachable(input);
    const std::size_t n = dfa.state_count();

    std::vector<std::size_t> cls(n);
    for (State q = 0; q < n; ++q) cls[q] = dfa.accepting(q) ? 1 : 0;
    std::size_t class_count = 0;

    // Moore refinement: split by (class, class of 0-successor, class of 1-successor)
    // until the number of classes stops growing.
    while (true) {
        std::map<std::array<std::size_t, 3>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (State q = 0; q < n; ++q) {
            std::array<std::size_t, 3> key{cls[q], cls[dfa.step(q, 0)], cls[dfa.step(q, 1)]};
            auto [it, inserted] = ids.try_emplace(key, ids.size());
            next[q] = it->second;
        }
        cls = std::move(next);
        if (ids.size() == class_count) break;
        class_count = ids.size();
    }
    return quotient(dfa, cls);
}

bool isomorphic(const Dfa& a, const Dfa& b) {
    if (a.state_count() != b.state_count()) return false;
    const auto order_a = bfs_order(a);
    const auto order_b = bfs_order(b);
    if (order_a.size() != order_b.size()) return false;

    constexpr State unset = static_cast<State>(-1);
    std::vector<State> map_ab(a.state_count(), unset);
    std::vector<State> map_ba(b.state_count(), unset);
    std::queue<std::pair<State, State>> work;
    map_ab[a.start()] = b.start();
    map_ba[b.start()] = a.start();
    work.emplace(a.start(), b.start());
    while (!work.empty()) {
        auto [qa, qb] = work.front();
        work.pop();
        if (a.accepting(qa) != b.accepting(qb)) return false;
        for (Bit bit : {Bit{0}, Bit{1}}) {
            State na = a.step(qa, bit);
            State nb = b.step(qb, bit);
            if (map_ab[na] == unset && map_ba[nb] == unset) {
                map_ab[na] = nb;
                map_ba[nb] = na;
                work.emplace(na, nb);
            } else if (map_ab[na] != nb || map_ba[nb] != na) {
                return false;
            }
        }
    }
    // Unreachable remainders are compared by count only.
    return true;
}

std::optional<BitString> agreement_check(const Dfa& dfa, const BitOracle& oracle, std::size_t max_len) {
    BitString word;
    // Depth-first in lexicographic order, one length at a time, so the
    // first hit is the shortest and lexicographically least.
    std::vector<State> states;
    for (std::size_t len = 0; len <= max_len; ++len) {
        word.assign(len, 0);
        states.assign(len + 1, dfa.start());
        for (std::size_t i = 0; i < len; ++i) states[i + 1] = dfa.step(states[i], 0);
        while (true) {
            if (static_cast<Bit>(dfa.accepting(states[len])) != oracle(word)) return word;
            // Increment as a binary counter, refreshing the affected suffix of states.
            std::size_t pos = len;
            while (pos > 0 && word[pos - 1] == 1) --pos;
            if (pos == 0) break;
            word[pos - 1] = 1;
            for (std::size_t i = pos; i < len; ++i) word[i] = 0;
            for (std::size_t i = pos - 1; i < len; ++i) states[i + 1] = dfa.step(states[i], word[i]);
        }
    }
    return std::nullopt;
}

std::optional<BitString> majority_agreement_check(const Dfa& dfa, const Ratio& threshold, std::size_t max_len) {
    if (!threshold.in_open_unit()) throw std::invalid_argument("majority threshold must lie in (0,1)");
    // (ones, state) -> lexicographically least word of the current length reaching it.
    std::map<std::pair<std::int64_t, State>, BitString> level;
    level.emplace(std::pair<std::int64_t, State>{0, dfa.start()}, BitString{});
    for (std::size_t len = 0; len <= max_len; ++len) {
        const BitString* witness = nullptr;
        for (const auto& [key, word] : level) {
            const bool want = majority_exceeds(static_cast<std::int64_t>(len), key.first, threshold);
            if (dfa.accepting(key.second) != want && (witness == nullptr || word < *witness)) witness = &word;
        }
        if (witness != nullptr) return *witness;
        if (len == max_len) break;

        std::map<std::pair<std::int64_t, State>, BitString> next;
        for (const auto& [key, word] : level) {
            for (Bit b : {Bit{0}, Bit{1}}) {
                std::pair<std::int64_t, State> child{key.first + b, dfa.step(key.second, b)};
                BitString extended = word;
                extended.push_back(b);
                auto [it, inserted] = next.try_emplace(child, extended);
                if (!inserted && extended < it->second) it->second = std::move(extended);
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

}  // namespace dfastat
