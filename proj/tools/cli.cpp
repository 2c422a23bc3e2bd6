#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dfastat/dfa_io.hpp"
#include "dfastat/errors.hpp"
#include "dfastat/estimation.hpp"
#include "dfastat/learner.hpp"
#include "dfastat/markov.hpp"
#include "dfastat/sim.hpp"

namespace dfastat::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::size_t parse_size(const std::string& text) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("expected an integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

// Writes to the named file, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    file << text;
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') return std::stoull(env);
    return 0;
}

Table parse_table(const std::string& text) {
    Table table;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.rfind('=');
        if (eq == std::string::npos) throw std::invalid_argument("table entries look like <process>=<0|1>");
        const std::string label = item.substr(eq + 1);
        if (label != "0" && label != "1") throw std::invalid_argument("table label must be 0 or 1");
        table.entries.emplace_back(parse_process(item.substr(0, eq)), static_cast<Bit>(label[0] - '0'));
    }
    return table;
}

std::string stats_line(const LearnResult& r) {
    std::ostringstream s;
    s << "states=" << r.dfa.state_count() << " equivalence_queries=" << r.equivalence_queries
      << " membership_queries=" << r.membership_queries;
    return s.str();
}

}  // namespace

Dfa resolve_dfa(const std::string& source) {
    if (source.rfind("maj:", 0) == 0) return build_majority_dfa(parse_size(source.substr(4)));
    if (source.rfind("learn:", 0) == 0) {
        const auto parts = split(source.substr(6), ':');
        if (parts.size() != 2) throw std::invalid_argument("expected learn:<a>:<k>");
        return learn(Ratio::parse(parts[0]), parse_size(parts[1])).dfa;
    }
    if (source == "example:dominance") return example_dominance_dfa();
    if (source == "example:degeneracy") return example_degeneracy_dfa();
    return load_dfa(source);
}

std::vector<double> ThetaGrid::points() const {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i)
        out[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    out.back() = max;
    return out;
}

ThetaGrid parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("theta grid looks like <min>:<max>:<steps>");
    ThetaGrid grid{Ratio::parse(parts[0]).to_double(), Ratio::parse(parts[1]).to_double(), parse_size(parts[2])};
    if (!(0.0 < grid.min && grid.min < grid.max && grid.max < 1.0))
        throw std::invalid_argument("theta grid needs 0 < min < max < 1");
    if (grid.steps < 2) throw std::invalid_argument("theta grid needs at least 2 steps");
    return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-automaton estimators: construction, limiting analysis, refutation, learning, simulation",
                 "dfastat"};
    app.require_subcommand(1);

    // maj-dfa
    std::size_t maj_k = 0;
    std::string maj_out;
    auto* maj = app.add_subcommand("maj-dfa", "Write the k-state majority automaton M(k)");
    maj->add_option("--k", maj_k, "Number of states")->required();
    maj->add_option("--out,-o", maj_out, "Output path (stdout when omitted)");

    // learn
    std::string learn_a;
    std::size_t learn_k = 0;
    std::string learn_out;
    auto* lrn = app.add_subcommand("learn", "Learn M_a(k) with L* against MAJ_a on strings shorter than k");
    lrn->add_option("--a", learn_a, "Threshold in (0,1), decimal or p/q")->required();
    lrn->add_option("--k", learn_k, "Agreement length bound")->required();
    lrn->add_option("--out,-o", learn_out, "Output path (stdout when omitted)");

    // analyze
    std::string an_dfa, an_process, an_format = "text";
    auto* ana = app.add_subcommand("analyze", "Decompose the induced chain and report the limiting acceptance");
    ana->add_option("--dfa", an_dfa, "DFA source")->required();
    ana->add_option("--process", an_process, "Process spec")->required();
    ana->add_option("--format", an_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    // curve
    std::string cv_dfa, cv_theta, cv_out;
    auto* crv = app.add_subcommand("curve", "Limiting acceptance over a Bernoulli theta grid (CSV)");
    crv->add_option("--dfa", cv_dfa, "DFA source")->required();
    crv->add_option("--theta", cv_theta, "Grid min:max:steps")->required();
    crv->add_option("--out,-o", cv_out, "Output path (stdout when omitted)");

    // refute
    std::string rf_dfa, rf_a, rf_table, rf_thetas, rf_format = "text";
    auto* ref = app.add_subcommand("refute", "Certificate that the DFA is not a consistent estimator");
    ref->add_option("--dfa", rf_dfa, "DFA source")->required();
    auto* a_opt = ref->add_option("--a", rf_a, "Threshold functional T_a");
    auto* table_opt = ref->add_option("--table", rf_table, "Table functional: <process>=<bit>,...");
    a_opt->excludes(table_opt);
    ref->add_option("--thetas", rf_thetas, "Comma-separated thetas for --a");
    ref->add_option("--format", rf_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    // simulate
    std::string sm_dfa, sm_process, sm_out;
    std::size_t sm_n = 0, sm_trials = 0;
    std::uint64_t sm_seed = 0;
    unsigned sm_threads = 0;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo acceptance with checkpoints (CSV)");
    sim->add_option("--dfa", sm_dfa, "DFA source")->required();
    sim->add_option("--process", sm_process, "Process spec")->required();
    sim->add_option("--n", sm_n, "Stream length")->required();
    sim->add_option("--trials", sm_trials, "Number of trials")->required();
    auto* seed_opt = sim->add_option("--seed", sm_seed, std::string("Master seed (default from ") + kSeedEnv + ")");
    sim->add_option("--threads", sm_threads, "Worker threads (0 = all cores)");
    sim->add_option("--out,-o", sm_out, "Output path (stdout when omitted)");

    // eta
    std::size_t eta_k = 0;
    std::string eta_theta;
    bool eta_discrepancy = false;
    auto* eta = app.add_subcommand("eta", "Limiting rejection of M(k): derived, printed, numeric, bound");
    auto* eta_k_opt = eta->add_option("--k", eta_k, "Number of states");
    auto* eta_theta_opt = eta->add_option("--theta", eta_theta, "Bernoulli parameter, decimal or p/q");
    eta->add_flag("--discrepancy", eta_discrepancy, "CSV grid over k = 1..12, theta = 0.05..0.95");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*maj) {
            emit(maj_out, write_dfa(build_majority_dfa(maj_k)), out);
        } else if (*lrn) {
            const LearnResult result = learn(Ratio::parse(learn_a), learn_k);
            if (learn_out.empty() || learn_out == "-") {
                out << write_dfa(result.dfa) << "# " << stats_line(result) << '\n';
            } else {
                emit(learn_out, write_dfa(result.dfa), out);
                out << stats_line(result) << '\n';
            }
        } else if (*ana) {
            const ChainAnalysis analysis = analyze_chain(resolve_dfa(an_dfa), parse_process(an_process));
            out << (an_format == "csv" ? analysis_csv(analysis) : analysis_text(analysis));
        } else if (*crv) {
            const Dfa dfa = resolve_dfa(cv_dfa);
            const ThetaGrid grid = parse_grid(cv_theta);
            std::ostringstream csv;
            csv << "theta,limiting_acceptance\n";
            for (double theta : grid.points())
                csv << format_number(theta) << ',' << format_number(limiting_acceptance(dfa, Bernoulli{theta}).value)
                    << '\n';
            emit(cv_out, csv.str(), out);
        } else if (*ref) {
            const Dfa dfa = resolve_dfa(rf_dfa);
            RefutationCertificate cert = [&] {
                if (!rf_table.empty()) return refute_consistency(dfa, parse_table(rf_table));
                if (rf_a.empty()) throw std::invalid_argument("refute needs --a or --table");
                if (rf_thetas.empty()) throw std::invalid_argument("--a needs --thetas");
                std::vector<double> thetas;
                for (const auto& t : split(rf_thetas, ',')) thetas.push_back(Ratio::parse(t).to_double());
                return refute_consistency(dfa, Threshold{Ratio::parse(rf_a)}, thetas);
            }();
            out << (rf_format == "csv" ? certificate_csv(cert) : format_certificate(cert));
            return cert.epsilon_star > 0.0 ? kExitOk : kExitFailure;
        } else if (*sim) {
            const Seed seed{seed_opt->count() ? sm_seed : default_seed()};
            const TrialReport report =
                run_trials(resolve_dfa(sm_dfa), parse_process(sm_process), sm_n, sm_trials, seed, {sm_threads});
            emit(sm_out, trial_report_csv(report), out);
        } else if (*eta) {
            if (eta_discrepancy) {
                std::vector<std::size_t> ks;
                for (std::size_t k = 1; k <= 12; ++k) ks.push_back(k);
                std::vector<double> thetas;
                for (int i = 1; i <= 19; ++i) thetas.push_back(0.05 * i);
                out << eta_discrepancy_csv(ks, thetas);
            } else {
                if (!eta_k_opt->count() || !eta_theta_opt->count())
                    throw std::invalid_argument("eta needs --k and --theta (or --discrepancy)");
                out << format_eta_report(eta_report(eta_k, Ratio::parse(eta_theta))) << '\n';
            }
        }
    } catch (const UnsupportedModelError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnsupportedModel;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace dfastat::cli
