#include "dfastat/markov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>

namespace dfastat {

namespace {

void add_edge(std::vector<InducedChain::Edge>& row, std::size_t to, double prob) {
    if (prob <= 0.0) return;
    for (auto& e : row) {
        if (e.to == to) {
            e.prob += prob;
            return;
        }
    }
    row.push_back({to, prob});
}

InducedChain iid_chain(const Dfa& dfa, double theta) {
    InducedChain chain;
    const std::size_t n = dfa.state_count();
    chain.rows.resize(n);
    chain.start.assign(n, 0.0);
    chain.start[dfa.start()] = 1.0;
    chain.accepting = dfa.accepting_mask();
    chain.dfa_state.resize(n);
    chain.mode.assign(n, 0);
    for (State q = 0; q < n; ++q) {
        chain.dfa_state[q] = q;
        add_edge(chain.rows[q], dfa.step(q, 0), 1.0 - theta);
        add_edge(chain.rows[q], dfa.step(q, 1), theta);
    }
    return chain;
}

// State (q, b) has index 2q + b, where b is the bit most recently emitted.
// The start law puts a phantom previous bit at stationarity on q0, which
// makes the first real bit stationary as well.
InducedChain markov_source_chain(const Dfa& dfa, const MarkovBinary& src) {
    InducedChain chain;
    const std::size_t n = dfa.state_count();
    chain.mode_count = 2;
    chain.rows.resize(2 * n);
    chain.start.assign(2 * n, 0.0);
    chain.accepting.resize(2 * n);
    chain.dfa_state.resize(2 * n);
    chain.mode.resize(2 * n);
    const double one = src.stationary_one();
    chain.start[2 * dfa.start()] = 1.0 - one;
    chain.start[2 * dfa.start() + 1] = one;
    for (State q = 0; q < n; ++q) {
        for (Bit b : {Bit{0}, Bit{1}}) {
            const std::size_t s = 2 * q + b;
            chain.accepting[s] = dfa.accepting(q);
            chain.dfa_state[s] = q;
            chain.mode[s] = b;
            const double to_one = b == 0 ? src.p01 : 1.0 - src.p10;
            add_edge(chain.rows[s], 2 * dfa.step(q, 0), 1.0 - to_one);
            add_edge(chain.rows[s], 2 * dfa.step(q, 1) + 1, to_one);
        }
    }
    return chain;
}

// Iterative Tarjan over the positive-probability graph.
std::vector<std::vector<std::size_t>> tarjan_scc(const InducedChain& chain) {
    const std::size_t n = chain.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_edge;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& frame = call.back();
            const std::size_t v = frame.v;
            if (frame.next_edge < chain.rows[v].size()) {
                const std::size_t w = chain.rows[v][frame.next_edge++].to;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
    }
    return components;
}

// Grassmann-Taksar-Heyman state reduction for an irreducible stochastic matrix.
Eigen::VectorXd gth_stationary(Eigen::MatrixXd p) {
    const Eigen::Index m = p.rows();
    for (Eigen::Index n = m - 1; n > 0; --n) {
        const double out = p.row(n).head(n).sum();
        p.col(n).head(n) /= out;
        p.topLeftCorner(n, n) += p.col(n).head(n) * p.row(n).head(n);
    }
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(m);
    pi(0) = 1.0;
    for (Eigen::Index j = 1; j < m; ++j) pi(j) = pi.head(j).dot(p.col(j).head(j));
    return pi / pi.sum();
}

}  // namespace

std::string InducedChain::label(std::size_t s) const {
    if (mode_count == 1) return std::to_string(dfa_state[s]);
    return std::to_string(dfa_state[s]) + "/" + std::to_string(int(mode[s]));
}

InducedChain induce_chain(const Dfa& input, const ProcessSpec& spec) {
    validate(spec);
    if (std::holds_alternative<Dominant>(spec))
        throw UnsupportedModelError("dominant processes have no finite induced chain; use the simulation commands");
    const Dfa dfa = prune_unreachable(input);
    InducedChain chain;
    if (const auto* p = std::get_if<Bernoulli>(&spec)) chain = iid_chain(dfa, p->theta);
    if (const auto* p = std::get_if<Degenerate>(&spec)) chain = iid_chain(dfa, p->bit);
    if (const auto* p = std::get_if<MarkovBinary>(&spec)) chain = markov_source_chain(dfa, *p);

    // Report the caller's state labels. prune_unreachable numbers states in
    // breadth-first order, 0-edge first; replay that order to invert it.
    std::vector<State> original{input.start()};
    std::vector<bool> seen(input.state_count(), false);
    seen[input.start()] = true;
    for (std::size_t i = 0; i < original.size(); ++i)
        for (Bit b : {Bit{0}, Bit{1}}) {
            const State t = input.step(original[i], b);
            if (!seen[t]) {
                seen[t] = true;
                original.push_back(t);
            }
        }
    for (State& q : chain.dfa_state) q = original[q];
    return chain;
}

std::vector<std::size_t> ChainStructure::recurrent_ids() const {
    std::vector<std::size_t> ids;
    for (std::size_t c = 0; c < components.size(); ++c)
        if (recurrent[c]) ids.push_back(c);
    return ids;
}

ChainStructure decompose(const InducedChain& chain) {
    ChainStructure out;
    const std::size_t n = chain.size();
    out.components = tarjan_scc(chain);
    // Tarjan emits sinks first; present components in order of their smallest state.
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    const std::size_t m = out.components.size();
    out.component_of.assign(n, 0);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t s : out.components[c]) out.component_of[s] = c;

    out.recurrent.assign(m, true);
    for (std::size_t s = 0; s < n; ++s)
        for (const auto& e : chain.rows[s])
            if (out.component_of[e.to] != out.component_of[s]) out.recurrent[out.component_of[s]] = false;

    // Reachability from the start support.
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> work;
    for (std::size_t s = 0; s < n; ++s)
        if (chain.start[s] > 0.0) {
            seen[s] = true;
            work.push(s);
        }
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop();
        for (const auto& e : chain.rows[s])
            if (!seen[e.to]) {
                seen[e.to] = true;
                work.push(e.to);
            }
    }
    out.reachable.assign(m, false);
    for (std::size_t s = 0; s < n; ++s)
        if (seen[s]) out.reachable[out.component_of[s]] = true;

    // Periods: BFS levels inside each recurrent class; the period is the gcd
    // of level[u] + 1 - level[v] over the class's internal edges.
    out.period.assign(m, 0);
    out.phase.assign(n, 0);
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(n, unset);
    for (std::size_t c = 0; c < m; ++c) {
        if (!out.recurrent[c]) continue;
        const std::size_t root = out.components[c].front();
        level[root] = 0;
        work.push(root);
        while (!work.empty()) {
            std::size_t s = work.front();
            work.pop();
            for (const auto& e : chain.rows[s])
                if (level[e.to] == unset) {
                    level[e.to] = level[s] + 1;
                    work.push(e.to);
                }
        }
        std::size_t g = 0;
        for (std::size_t s : out.components[c])
            for (const auto& e : chain.rows[s]) {
                const auto diff = static_cast<long long>(level[s]) + 1 - static_cast<long long>(level[e.to]);
                g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
            }
        out.period[c] = g;
        for (std::size_t s : out.components[c]) out.phase[s] = level[s] % g;
    }

    // Absorption: h(t, r) = sum_{s in r} P(t, s) + sum_{t' transient} P(t, t') h(t', r).
    std::vector<std::size_t> transient;
    std::vector<std::size_t> transient_index(n, unset);
    for (std::size_t s = 0; s < n; ++s)
        if (!out.recurrent[out.component_of[s]]) {
            transient_index[s] = transient.size();
            transient.push_back(s);
        }
    const auto rec = out.recurrent_ids();
    std::vector<std::size_t> rec_index(m, unset);
    for (std::size_t i = 0; i < rec.size(); ++i) rec_index[rec[i]] = i;

    Eigen::MatrixXd hit;
    if (!transient.empty()) {
        const auto t = static_cast<Eigen::Index>(transient.size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(t, t);
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(t, static_cast<Eigen::Index>(rec.size()));
        for (std::size_t i = 0; i < transient.size(); ++i)
            for (const auto& e : chain.rows[transient[i]]) {
                if (transient_index[e.to] != unset)
                    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(transient_index[e.to])) -= e.prob;
                else
                    b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rec_index[out.component_of[e.to]])) +=
                        e.prob;
            }
        if (rec.size() == 1) {
            hit = Eigen::MatrixXd::Ones(t, 1);
        } else {
            hit = a.partialPivLu().solve(b);
            if (!hit.allFinite()) throw NumericError("absorption solve produced non-finite values");
            // Each transient row is a distribution over classes; undo rounding drift.
            hit = hit.cwiseMax(0.0);
            for (Eigen::Index i = 0; i < t; ++i)
                if (const double sum = hit.row(i).sum(); sum > 0.0) hit.row(i) /= sum;
        }
    }

    out.absorption.assign(m, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        if (chain.start[s] <= 0.0) continue;
        const std::size_t c = out.component_of[s];
        if (out.recurrent[c]) {
            out.absorption[c] += chain.start[s];
        } else {
            for (std::size_t i = 0; i < rec.size(); ++i)
                out.absorption[rec[i]] +=
                    chain.start[s] * hit(static_cast<Eigen::Index>(transient_index[s]), static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

ClassAnalysis stationary(const InducedChain& chain, const ChainStructure& structure, std::size_t class_id) {
    if (class_id >= structure.components.size() || !structure.recurrent[class_id])
        throw std::invalid_argument("stationary distribution requested for a non-recurrent component");

    ClassAnalysis out;
    out.class_id = class_id;
    out.members = structure.components[class_id];
    const auto m = static_cast<Eigen::Index>(out.members.size());
    std::vector<Eigen::Index> local(chain.size(), -1);
    for (Eigen::Index i = 0; i < m; ++i) local[out.members[static_cast<std::size_t>(i)]] = i;

    // Rows of (P^T - I) with the last equation swapped for sum(pi) = 1.
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (const auto& e : chain.rows[out.members[static_cast<std::size_t>(i)]]) p(i, local[e.to]) += e.prob;
    Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(m, m);
    a.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(m - 1) = 1.0;
    Eigen::VectorXd pi = a.partialPivLu().solve(rhs);
    auto acceptable = [&](const Eigen::VectorXd& v) {
        return v.allFinite() && v.minCoeff() > 0.0 &&
               (v.transpose() * p - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12;
    };
    // LU loses the smallest masses to cancellation when pi spans many orders
    // of magnitude; state reduction has no subtractions and keeps them.
    if (!acceptable(pi)) pi = gth_stationary(p);
    if (!pi.allFinite() || pi.minCoeff() <= 0.0)
        throw NumericError("stationary solve did not return a strictly positive distribution");
    if ((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw NumericError("stationary solve residual too large");

    out.pi.assign(pi.data(), pi.data() + m);
    const std::size_t d = structure.period[class_id];
    std::vector<double> phase_mass(d, 0.0), phase_accept(d, 0.0);
    for (std::size_t i = 0; i < out.members.size(); ++i) {
        const std::size_t s = out.members[i];
        phase_mass[structure.phase[s]] += out.pi[i];
        if (chain.accepting[s]) {
            out.acceptance_mass += out.pi[i];
            phase_accept[structure.phase[s]] += out.pi[i];
        }
    }
    out.cyclic_acceptance.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.cyclic_acceptance[j] = phase_accept[j] / phase_mass[j];
    return out;
}

ChainAnalysis analyze_chain(const Dfa& dfa, const ProcessSpec& spec) {
    ChainAnalysis out;
    out.chain = induce_chain(dfa, spec);
    out.structure = decompose(out.chain);
    out.limit = {};
    for (std::size_t c : out.structure.recurrent_ids()) {
        if (!out.structure.reachable[c]) continue;
        ClassAnalysis cls = stationary(out.chain, out.structure, c);
        out.limit.value += out.structure.absorption[c] * cls.acceptance_mass;
        const auto [lo, hi] = std::minmax_element(cls.cyclic_acceptance.begin(), cls.cyclic_acceptance.end());
        if (*hi - *lo > 1e-12) out.limit.is_true_limit = false;
        out.classes.push_back(std::move(cls));
    }
    out.limit.value = std::clamp(out.limit.value, 0.0, 1.0);
    return out;
}

AcceptanceLimit limiting_acceptance(const Dfa& dfa, const ProcessSpec& spec) { return analyze_chain(dfa, spec).limit; }

namespace {

// Gaussian elimination with nonzero pivoting over exact rationals.
std::vector<BigRational> exact_solve(std::vector<std::vector<BigRational>> a, std::vector<BigRational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw NumericError("singular system in exact solve");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const BigRational f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

}  // namespace

BigRational exact_limiting_acceptance(const Dfa& input, const Ratio& theta) {
    if (theta < Ratio(0, 1) || theta > Ratio(1, 1)) throw std::invalid_argument("theta must lie in [0,1]");
    const Dfa dfa = prune_unreachable(input);
    const InducedChain chain = iid_chain(dfa, theta.to_double());
    const ChainStructure structure = decompose(chain);
    const std::size_t n = chain.size();

    const BigRational p1 = theta.to_big();
    const BigRational p0 = BigRational(1) - p1;
    std::vector<std::vector<std::pair<std::size_t, BigRational>>> rows(n);
    for (State q = 0; q < n; ++q) {
        auto add = [&](std::size_t to, const BigRational& p) {
            if (p == 0) return;
            for (auto& [t, w] : rows[q])
                if (t == to) {
                    w += p;
                    return;
                }
            rows[q].emplace_back(to, p);
        };
        add(dfa.step(q, 0), p0);
        add(dfa.step(q, 1), p1);
    }

    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> transient, tindex(n, unset);
    for (std::size_t s = 0; s < n; ++s)
        if (!structure.recurrent[structure.component_of[s]]) {
            tindex[s] = transient.size();
            transient.push_back(s);
        }

    BigRational total = 0;
    for (std::size_t c : structure.recurrent_ids()) {
        if (!structure.reachable[c]) continue;
        const auto& members = structure.components[c];
        const std::size_t m = members.size();
        std::vector<std::size_t> local(n, unset);
        for (std::size_t i = 0; i < m; ++i) local[members[i]] = i;

        std::vector<std::vector<BigRational>> a(m, std::vector<BigRational>(m, BigRational(0)));
        for (std::size_t i = 0; i < m; ++i) {
            a[i][i] -= 1;
            for (const auto& [to, w] : rows[members[i]]) a[local[to]][i] += w;
        }
        for (auto& x : a[m - 1]) x = 1;
        std::vector<BigRational> rhs(m, BigRational(0));
        rhs[m - 1] = 1;
        const auto pi = exact_solve(std::move(a), std::move(rhs));
        BigRational mass = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (chain.accepting[members[i]]) mass += pi[i];

        BigRational absorb = 0;
        const std::size_t s0 = dfa.start();
        if (structure.component_of[s0] == c) {
            absorb = 1;
        } else if (tindex[s0] != unset) {
            const std::size_t t = transient.size();
            std::vector<std::vector<BigRational>> ta(t, std::vector<BigRational>(t, BigRational(0)));
            std::vector<BigRational> tb(t, BigRational(0));
            for (std::size_t i = 0; i < t; ++i) {
                ta[i][i] += 1;
                for (const auto& [to, w] : rows[transient[i]]) {
                    if (tindex[to] != unset)
                        ta[i][tindex[to]] -= w;
                    else if (structure.component_of[to] == c)
                        tb[i] += w;
                }
            }
            absorb = exact_solve(std::move(ta), std::move(tb))[tindex[s0]];
        }
        total += absorb * mass;
    }
    return total;
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

std::string analysis_csv(const ChainAnalysis& analysis) {
    std::ostringstream out;
    out << "record,class,members,period,absorption,acceptance_mass,is_true_limit\n";
    for (const auto& cls : analysis.classes) {
        out << "class," << cls.class_id << ',';
        for (std::size_t i = 0; i < cls.members.size(); ++i)
            out << (i ? " " : "") << analysis.chain.label(cls.members[i]);
        out << ',' << analysis.structure.period[cls.class_id] << ','
            << format_number(analysis.structure.absorption[cls.class_id]) << ',' << format_number(cls.acceptance_mass)
            << ",\n";
    }
    out << "limit,,,,," << format_number(analysis.limit.value) << ',' << (analysis.limit.is_true_limit ? 1 : 0)
        << '\n';
    return out.str();
}

std::string analysis_text(const ChainAnalysis& analysis) {
    std::ostringstream out;
    const auto& st = analysis.structure;
    out << "chain states: " << analysis.chain.size() << "\n";
    out << "components: " << st.components.size() << " (" << st.recurrent_ids().size() << " recurrent)\n";
    for (std::size_t c = 0; c < st.components.size(); ++c) {
        out << "  component " << c << (st.recurrent[c] ? " recurrent" : " transient")
            << (st.reachable[c] ? "" : " unreachable") << " {";
        for (std::size_t i = 0; i < st.components[c].size(); ++i)
            out << (i ? " " : "") << analysis.chain.label(st.components[c][i]);
        out << "}";
        if (st.recurrent[c]) out << " period " << st.period[c] << " absorption " << format_number(st.absorption[c]);
        out << "\n";
    }
    for (const auto& cls : analysis.classes) {
        out << "  class " << cls.class_id << " acceptance mass " << format_number(cls.acceptance_mass) << " pi:";
        for (double p : cls.pi) out << ' ' << format_number(p);
        out << "\n";
    }
    out << "limiting acceptance: " << format_number(analysis.limit.value)
        << (analysis.limit.is_true_limit ? "" : " (Cesaro limit; P(xi_n in F) oscillates)") << "\n";
    return out.str();
}

}  // namespace dfastat
