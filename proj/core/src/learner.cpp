#include "dfastat/learner.hpp"

#include <algorithm>
#include <stdexcept>

namespace dfastat {

ObservationTable::ObservationTable(BitOracle membership) : oracle_(std::move(membership)) {
    prefixes_.push_back({});
    suffixes_.push_back({});
}

Bit ObservationTable::member(const BitString& word) {
    auto it = cache_.find(word);
    if (it != cache_.end()) return it->second;
    const Bit answer = oracle_(word);
    cache_.emplace(word, answer);
    return answer;
}

std::vector<Bit> ObservationTable::row(const BitString& prefix) {
    std::vector<Bit> out;
    out.reserve(suffixes_.size());
    BitString word;
    for (const auto& e : suffixes_) {
        word = prefix;
        word.insert(word.end(), e.begin(), e.end());
        out.push_back(member(word));
    }
    return out;
}

bool ObservationTable::add_suffix(const BitString& suffix) {
    if (std::find(suffixes_.begin(), suffixes_.end(), suffix) != suffixes_.end()) return false;
    suffixes_.push_back(suffix);
    return true;
}

bool ObservationTable::close() {
    bool grew = false;
    // New prefixes are appended, so this loop also visits their extensions.
    for (std::size_t i = 0; i < prefixes_.size(); ++i) {
        for (Bit b : {Bit{0}, Bit{1}}) {
            BitString ext = prefixes_[i];
            ext.push_back(b);
            const auto ext_row = row(ext);
            bool found = false;
            for (const auto& s : prefixes_)
                if (row(s) == ext_row) {
                    found = true;
                    break;
                }
            if (!found) {
                prefixes_.push_back(std::move(ext));
                grew = true;
            }
        }
    }
    return grew;
}

bool ObservationTable::is_closed() {
    for (std::size_t i = 0; i < prefixes_.size(); ++i)
        for (Bit b : {Bit{0}, Bit{1}}) {
            BitString ext = prefixes_[i];
            ext.push_back(b);
            const auto ext_row = row(ext);
            if (std::none_of(prefixes_.begin(), prefixes_.end(), [&](const BitString& s) { return row(s) == ext_row; }))
                return false;
        }
    return true;
}

bool ObservationTable::make_consistent() {
    for (std::size_t i = 0; i < prefixes_.size(); ++i)
        for (std::size_t j = i + 1; j < prefixes_.size(); ++j) {
            if (row(prefixes_[i]) != row(prefixes_[j])) continue;
            for (Bit b : {Bit{0}, Bit{1}}) {
                BitString si = prefixes_[i], sj = prefixes_[j];
                si.push_back(b);
                sj.push_back(b);
                const auto ri = row(si), rj = row(sj);
                for (std::size_t e = 0; e < suffixes_.size(); ++e) {
                    if (ri[e] == rj[e]) continue;
                    BitString suffix{b};
                    suffix.insert(suffix.end(), suffixes_[e].begin(), suffixes_[e].end());
                    add_suffix(suffix);
                    return true;
                }
            }
        }
    return false;
}

bool ObservationTable::is_consistent() {
    for (std::size_t i = 0; i < prefixes_.size(); ++i)
        for (std::size_t j = i + 1; j < prefixes_.size(); ++j) {
            if (row(prefixes_[i]) != row(prefixes_[j])) continue;
            for (Bit b : {Bit{0}, Bit{1}}) {
                BitString si = prefixes_[i], sj = prefixes_[j];
                si.push_back(b);
                sj.push_back(b);
                if (row(si) != row(sj)) return false;
            }
        }
    return true;
}

void ObservationTable::add_counterexample(const BitString& cex) {
    for (std::size_t start = 0; start <= cex.size(); ++start)
        add_suffix(BitString(cex.begin() + static_cast<std::ptrdiff_t>(start), cex.end()));
}

Dfa ObservationTable::hypothesis() {
    std::map<std::vector<Bit>, State> state_of;
    std::vector<std::size_t> representative;
    for (std::size_t i = 0; i < prefixes_.size(); ++i) {
        auto [it, inserted] = state_of.try_emplace(row(prefixes_[i]), static_cast<State>(representative.size()));
        if (inserted) representative.push_back(i);
    }
    const std::size_t n = representative.size();
    std::vector<Dfa::Row> delta(n);
    std::vector<bool> accepting(n);
    for (std::size_t q = 0; q < n; ++q) {
        const BitString& s = prefixes_[representative[q]];
        accepting[q] = member(s) == 1;
        for (Bit b : {Bit{0}, Bit{1}}) {
            BitString ext = s;
            ext.push_back(b);
            auto it = state_of.find(row(ext));
            if (it == state_of.end()) throw std::logic_error("hypothesis built from a table that is not closed");
            delta[q][b] = it->second;
        }
    }
    return Dfa(n, state_of.at(row({})), std::move(accepting), std::move(delta));
}

LearnResult learn_lstar(const BitOracle& membership, const EquivalenceOracle& equivalence) {
    ObservationTable table(membership);
    std::size_t equivalence_queries = 0;
    std::vector<BitString> counterexamples;
    while (true) {
        while (true) {
            const bool closed_grew = table.close();
            const bool consistent_grew = table.make_consistent();
            if (!closed_grew && !consistent_grew) break;
        }
        Dfa hyp = minimize(table.hypothesis());
        ++equivalence_queries;
        auto cex = equivalence(hyp);
        if (!cex) return {hyp, hyp.state_count(), equivalence_queries, table.membership_queries(), std::move(counterexamples)};
        table.add_counterexample(*cex);
        counterexamples.push_back(std::move(*cex));
    }
}

LearnResult learn(const Ratio& a, std::size_t k) {
    if (k == 0) throw std::invalid_argument("learning M_a(k) needs k >= 1");
    if (!a.in_open_unit()) throw std::invalid_argument("threshold must lie in (0,1)");
    BitOracle membership = [a](std::span<const Bit> x) { return majority_fn(x, a); };
    EquivalenceOracle equivalence = [a, k](const Dfa& hyp) { return majority_agreement_check(hyp, a, k - 1); };
    LearnResult result = learn_lstar(membership, equivalence);
    result.dfa = merge_agreeing_states(result.dfa, a, k);
    return result;
}

Dfa merge_agreeing_states(const Dfa& input, const Ratio& a, std::size_t k) {
    if (k == 0) throw std::invalid_argument("agreement horizon needs k >= 1");
    Dfa dfa = minimize(input);
    bool merged = true;
    while (merged) {
        merged = false;
        for (State removed = 0; removed < dfa.state_count() && !merged; ++removed) {
            for (State kept = 0; kept < dfa.state_count() && !merged; ++kept) {
                if (kept == removed) continue;
                auto delta = dfa.delta();
                for (auto& row : delta)
                    for (State& t : row)
                        if (t == removed) t = kept;
                const State start = dfa.start() == removed ? kept : dfa.start();
                Dfa candidate(dfa.state_count(), start, dfa.accepting_mask(), std::move(delta));
                if (!majority_agreement_check(candidate, a, k - 1)) {
                    dfa = minimize(candidate);
                    merged = true;
                }
            }
        }
    }
    return dfa;
}

namespace {

// Sample = complete binary tree of all strings shorter than k in heap
// layout: node i has children 2i+1 (bit 0) and 2i+2 (bit 1).
class MinAgreeingSearch {
public:
    MinAgreeingSearch(std::vector<Bit> labels, std::size_t states)
        : labels_(std::move(labels)), states_(states), node_state_(labels_.size(), 0),
          delta_(states, {kUnset, kUnset}), accept_(states, -1) {}

    std::size_t count_solutions() {
        used_ = 1;
        accept_[0] = labels_[0];
        node_state_[0] = 0;
        search(1);
        return solutions_;
    }

    const std::vector<Dfa::Row>& first_delta() const { return first_delta_; }
    const std::vector<int>& first_accept() const { return first_accept_; }

    static constexpr State kUnset = static_cast<State>(-1);

private:
    void search(std::size_t node) {
        if (node == labels_.size()) {
            if (solutions_++ == 0) {
                first_delta_ = delta_;
                first_accept_ = accept_;
            }
            return;
        }
        const std::size_t parent = (node - 1) / 2;
        const Bit bit = node % 2 == 1 ? 0 : 1;
        const State from = static_cast<State>(node_state_[parent]);
        if (delta_[from][bit] != kUnset) {
            place(node, delta_[from][bit]);
            return;
        }
        const std::size_t limit = std::min(used_ + 1, states_);
        for (State to = 0; to < limit; ++to) {
            const bool fresh = to == used_;
            if (fresh) ++used_;
            delta_[from][bit] = to;
            place(node, to);
            delta_[from][bit] = kUnset;
            if (fresh) --used_;
        }
    }

    void place(std::size_t node, State q) {
        const int label = labels_[node];
        if (accept_[q] != -1 && accept_[q] != label) return;
        const bool set_here = accept_[q] == -1;
        if (set_here) accept_[q] = label;
        node_state_[node] = q;
        search(node + 1);
        if (set_here) accept_[q] = -1;
    }

    std::vector<Bit> labels_;
    std::size_t states_;
    std::vector<std::size_t> node_state_;
    std::vector<Dfa::Row> delta_;
    std::vector<int> accept_;
    std::size_t used_ = 0;
    std::size_t solutions_ = 0;
    std::vector<Dfa::Row> first_delta_;
    std::vector<int> first_accept_;
};

}  // namespace

BruteForceResult brute_force_min_agreeing(const Ratio& a, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (k > kBruteForceMaxK)
        throw std::length_error("brute-force minimal DFA search is limited to k <= " + std::to_string(kBruteForceMaxK));
    if (!a.in_open_unit()) throw std::invalid_argument("threshold must lie in (0,1)");

    const std::size_t nodes = (std::size_t{1} << k) - 1;
    std::vector<Bit> labels(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        std::int64_t length = 0, ones = 0;
        for (std::size_t v = i; v > 0; v = (v - 1) / 2) {
            ++length;
            ones += v % 2 == 0 ? 1 : 0;
        }
        labels[i] = majority_exceeds(length, ones, a) ? 1 : 0;
    }

    for (std::size_t n = 1;; ++n) {
        MinAgreeingSearch search(labels, n);
        const std::size_t count = search.count_solutions();
        if (count == 0) continue;
        std::vector<Dfa::Row> delta = search.first_delta();
        std::vector<bool> accepting(n);
        for (State q = 0; q < n; ++q) {
            for (Bit b : {Bit{0}, Bit{1}})
                if (delta[q][b] == MinAgreeingSearch::kUnset) delta[q][b] = q;
            accepting[q] = search.first_accept()[q] == 1;
        }
        return {Dfa(n, 0, std::move(accepting), std::move(delta)), n, count};
    }
}

}  // namespace dfastat
