#include "dfastat/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dfastat {

namespace {

BigRational power(const BigRational& base, std::size_t exp) {
    BigRational out = 1;
    for (std::size_t i = 0; i < exp; ++i) out *= base;
    return out;
}

void require_open_unit(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
}

}  // namespace

bool Table::nontrivial() const {
    bool zero = false, one = false;
    for (const auto& [spec, label] : entries) (label ? one : zero) = true;
    return zero && one;
}

BigRational eta_derived(std::size_t k, const Ratio& theta) {
    if (k == 0) throw std::invalid_argument("eta needs k >= 1");
    if (!theta.in_open_unit()) throw std::invalid_argument("theta must lie in (0,1)");
    const std::size_t m = (k + 1) / 2;
    if (theta == Ratio(1, 2)) return BigRational(m, k);
    const BigRational r = BigRational(theta.num(), theta.den() - theta.num());
    return (power(r, m) - 1) / (power(r, k) - 1);
}

double eta_derived(std::size_t k, double theta) {
    if (k == 0) throw std::invalid_argument("eta needs k >= 1");
    require_open_unit(theta);
    const std::size_t m = (k + 1) / 2;
    const double r = theta / (1.0 - theta);
    if (std::abs(r - 1.0) < 1e-4) {
        // Near the removable singularity: sum the geometric series directly.
        double num = 0.0, den = 0.0, term = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            term *= r;
            den += term;
            if (i <= m) num += term;
        }
        return num / den;
    }
    return (std::pow(r, static_cast<double>(m)) - 1.0) / (std::pow(r, static_cast<double>(k)) - 1.0);
}

double eta_paper_printed(std::size_t k, double theta) {
    if (k == 0) throw std::invalid_argument("eta needs k >= 1");
    require_open_unit(theta);
    if (theta == 0.5) throw std::invalid_argument("printed eta formula is 0/0 at theta = 1/2");
    const double u = 1.0 / theta - 1.0;
    return (u - std::pow(u, static_cast<double>(k / 2 + 1))) / (u - std::pow(u, static_cast<double>(k + 1)));
}

double eta_bound(std::size_t k, double theta) {
    if (k == 0 || k % 2 != 0) throw std::invalid_argument("eta bound needs an even k");
    if (!(theta >= 0.5 && theta < 1.0)) throw std::invalid_argument("eta bound needs 1/2 <= theta < 1");
    return 0.5 * std::pow(2.0 - 2.0 * theta, static_cast<double>(k / 2));
}

double maj_agreement_bound(double theta, std::size_t n) {
    if (theta == 0.5) throw std::invalid_argument("majority agreement bound is vacuous at theta = 1/2");
    if (n == 0) throw std::invalid_argument("majority agreement bound needs n >= 1");
    const double gap = theta - 0.5;
    return std::exp(-2.0 * static_cast<double>(n) * gap * gap);
}

EtaReport eta_report(std::size_t k, const Ratio& theta) {
    EtaReport out;
    out.k = k;
    out.theta = theta;
    out.eta_derived = static_cast<double>(eta_derived(k, theta));
    const double t = theta.to_double();
    if (theta != Ratio(1, 2)) out.eta_paper_printed = eta_paper_printed(k, t);
    out.eta_numeric = 1.0 - limiting_acceptance(build_majority_dfa(k), Bernoulli{t}).value;
    if (k % 2 == 0 && t >= 0.5) out.bound = eta_bound(k, t);
    return out;
}

std::string format_eta_report(const EtaReport& r) {
    std::ostringstream out;
    out << "k=" << r.k << " theta=" << r.theta.str() << " derived=" << format_number(r.eta_derived)
        << " printed=" << (r.eta_paper_printed ? format_number(*r.eta_paper_printed) : std::string("undefined"))
        << " numeric=" << format_number(r.eta_numeric)
        << " bound=" << (r.bound ? format_number(*r.bound) : std::string("n/a"));
    return out.str();
}

std::string eta_discrepancy_csv(const std::vector<std::size_t>& ks, const std::vector<double>& thetas) {
    std::ostringstream out;
    out << "k,theta,derived,printed,one_minus_derived,printed_inverted_ratio,numeric,printed_minus_acceptance\n";
    for (std::size_t k : ks) {
        const Dfa mk = build_majority_dfa(k);
        for (double theta : thetas) {
            const double derived = eta_derived(k, theta);
            const double numeric = 1.0 - limiting_acceptance(mk, Bernoulli{theta}).value;
            out << k << ',' << format_number(theta) << ',' << format_number(derived) << ',';
            if (theta == 0.5) {
                out << ',' << format_number(1.0 - derived) << ',';
            } else {
                const double printed = eta_paper_printed(k, theta);
                // Replace u = (1-theta)/theta by its reciprocal.
                const double r = theta / (1.0 - theta);
                const double inverted = (r - std::pow(r, static_cast<double>(k / 2 + 1))) /
                                        (r - std::pow(r, static_cast<double>(k + 1)));
                out << format_number(printed) << ',' << format_number(1.0 - derived) << ','
                    << format_number(inverted);
            }
            out << ',' << format_number(numeric) << ',';
            if (theta != 0.5) out << format_number(eta_paper_printed(k, theta) - (1.0 - numeric));
            out << '\n';
        }
    }
    return out.str();
}

ErrorRate error_rate(const Dfa& dfa, const Threshold& functional, double theta) {
    require_open_unit(theta);
    const AcceptanceLimit limit = limiting_acceptance(dfa, Bernoulli{theta});
    ErrorRate out;
    out.value = functional(theta) ? 1.0 - limit.value : limit.value;
    out.at_threshold = theta == functional.a.to_double();
    out.is_true_limit = limit.is_true_limit;
    return out;
}

const char* to_string(ClassKind kind) {
    switch (kind) {
        case ClassKind::HomogeneousAccepting: return "homogeneous-accepting";
        case ClassKind::HomogeneousRejecting: return "homogeneous-rejecting";
        case ClassKind::Heterogeneous: return "heterogeneous";
    }
    return "?";
}

namespace {

RefutationCertificate refute_points(const Dfa& input, std::vector<std::pair<ProcessSpec, Bit>> points) {
    bool zero = false, one = false;
    for (const auto& [spec, target] : points) {
        if (!has_full_support(spec) || std::holds_alternative<Dominant>(spec))
            throw std::invalid_argument("refutation needs full-support processes (theta strictly inside (0,1))");
        (target ? one : zero) = true;
    }
    if (!zero || !one) throw std::invalid_argument("functional is constant on the tested parameters; refutation is vacuous");

    RefutationCertificate cert{minimize(input), {}, {}, 0.0, 0, ObstructionClause::AllHeterogeneous, {}};

    // For full-support sources the class structure is that of the DFA graph itself.
    const InducedChain graph = induce_chain(cert.dfa, Bernoulli{0.5});
    const ChainStructure structure = decompose(graph);
    bool homogeneous_reachable = false;
    for (std::size_t c : structure.recurrent_ids()) {
        if (!structure.reachable[c]) continue;
        ClassVerdict verdict;
        std::size_t accepting = 0;
        for (std::size_t s : structure.components[c]) {
            verdict.members.push_back(graph.dfa_state[s]);
            accepting += graph.accepting[s] ? 1 : 0;
        }
        if (accepting == 0)
            verdict.kind = ClassKind::HomogeneousRejecting;
        else if (accepting == verdict.members.size())
            verdict.kind = ClassKind::HomogeneousAccepting;
        else
            verdict.kind = ClassKind::Heterogeneous;
        homogeneous_reachable |= verdict.kind != ClassKind::Heterogeneous;
        cert.classes.push_back(std::move(verdict));
    }

    for (auto& [spec, target] : points) {
        const double acceptance = limiting_acceptance(cert.dfa, spec).value;
        const double error = target ? 1.0 - acceptance : acceptance;
        cert.points.push_back({spec, target, acceptance, error});
    }
    for (std::size_t i = 0; i < cert.points.size(); ++i)
        if (cert.points[i].error > cert.points[cert.witness].error) cert.witness = i;
    cert.epsilon_star = cert.points[cert.witness].error;

    std::ostringstream why;
    if (homogeneous_reachable) {
        cert.clause = ObstructionClause::HomogeneousTrap;
        why << "(a) a reachable recurrent class is homogeneous; every full-support process is trapped in it "
               "with positive probability, so the limiting acceptance cannot track both labels. ";
    } else {
        cert.clause = ObstructionClause::AllHeterogeneous;
        why << "(b) every reachable recurrent class contains both accepting and rejecting states, so the "
               "limiting acceptance lies strictly inside (0,1) for every full-support process. ";
    }
    why << "Largest limiting error " << format_number(cert.epsilon_star) << " at " << to_string(cert.points[cert.witness].process)
        << " (target " << int(cert.points[cert.witness].target) << ").";
    cert.explanation = why.str();
    return cert;
}

}  // namespace

RefutationCertificate refute_consistency(const Dfa& dfa, const Threshold& functional, const std::vector<double>& thetas) {
    if (thetas.empty()) throw std::invalid_argument("refutation needs at least one theta");
    std::vector<std::pair<ProcessSpec, Bit>> points;
    for (double theta : thetas) {
        require_open_unit(theta);
        points.emplace_back(Bernoulli{theta}, functional(theta));
    }
    return refute_points(dfa, std::move(points));
}

RefutationCertificate refute_consistency(const Dfa& dfa, const Table& functional) {
    if (functional.entries.empty()) throw std::invalid_argument("refutation needs a nonempty table");
    return refute_points(dfa, functional.entries);
}

std::string format_certificate(const RefutationCertificate& cert) {
    std::ostringstream out;
    out << "minimized states: " << cert.dfa.state_count() << "\n";
    out << "recurrent classes:\n";
    for (const auto& cls : cert.classes) {
        out << "  {";
        for (std::size_t i = 0; i < cls.members.size(); ++i) out << (i ? " " : "") << cls.members[i];
        out << "} " << to_string(cls.kind) << "\n";
    }
    out << "limiting errors:\n";
    for (const auto& p : cert.points)
        out << "  " << to_string(p.process) << " target=" << int(p.target)
            << " acceptance=" << format_number(p.acceptance) << " error=" << format_number(p.error) << "\n";
    out << "epsilon* = " << format_number(cert.epsilon_star) << "\n";
    out << cert.explanation << "\n";
    return out.str();
}

std::string certificate_csv(const RefutationCertificate& cert) {
    std::ostringstream out;
    out << "process,target,acceptance,error\n";
    for (const auto& p : cert.points)
        out << to_string(p.process) << ',' << int(p.target) << ',' << format_number(p.acceptance) << ','
            << format_number(p.error) << '\n';
    return out.str();
}

}  // namespace dfastat
