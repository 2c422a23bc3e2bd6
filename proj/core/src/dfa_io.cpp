#include "dfastat/dfa_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace dfastat {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) words.push_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

std::size_t to_index(std::string_view word, std::size_t line) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size())
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(word) + "'");
    return value;
}

}  // namespace

Dfa parse_dfa(std::istream& in) {
    std::optional<std::size_t> count;
    std::optional<std::size_t> start;
    std::optional<std::vector<std::size_t>> accept_list;
    std::vector<std::array<std::optional<std::size_t>, 2>> trans;
    std::size_t trans_lines = 0;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto words = split_words(line);
        if (words.empty()) continue;

        const std::string_view directive = words[0];
        if (directive == "states") {
            if (count) throw ParseError(line_no, "duplicate 'states' directive");
            if (words.size() != 2) throw ParseError(line_no, "'states' takes one argument");
            count = to_index(words[1], line_no);
            if (*count == 0) throw ParseError(line_no, "state count must be positive");
            trans.assign(*count, {});
        } else if (directive == "start") {
            if (start) throw ParseError(line_no, "duplicate 'start' directive");
            if (words.size() != 2) throw ParseError(line_no, "'start' takes one argument");
            start = to_index(words[1], line_no);
        } else if (directive == "accept") {
            if (accept_list) throw ParseError(line_no, "duplicate 'accept' directive");
            accept_list.emplace();
            for (std::size_t i = 1; i < words.size(); ++i) accept_list->push_back(to_index(words[i], line_no));
        } else if (directive == "trans") {
            if (!count) throw ParseError(line_no, "'trans' before 'states'");
            if (words.size() != 4) throw ParseError(line_no, "'trans' takes three arguments");
            const std::size_t from = to_index(words[1], line_no);
            const std::size_t bit = to_index(words[2], line_no);
            const std::size_t to = to_index(words[3], line_no);
            if (from >= *count || to >= *count) throw ParseError(line_no, "transition state out of range");
            if (bit > 1) throw ParseError(line_no, "transition symbol must be 0 or 1");
            if (trans[from][bit]) throw ParseError(line_no, "duplicate transition");
            trans[from][bit] = to;
            ++trans_lines;
        } else {
            throw ParseError(line_no, "unknown directive '" + std::string(directive) + "'");
        }
    }

    if (!count) throw ParseError(line_no, "missing 'states' directive");
    if (!start) throw ParseError(line_no, "missing 'start' directive");
    if (!accept_list) throw ParseError(line_no, "missing 'accept' directive");
    if (*start >= *count) throw ParseError(line_no, "start state out of range");
    if (trans_lines != 2 * *count) throw ParseError(line_no, "missing transitions: expected exactly 2k 'trans' lines");

    std::vector<bool> accepting(*count, false);
    for (std::size_t q : *accept_list) {
        if (q >= *count) throw ParseError(line_no, "accepting state out of range");
        accepting[q] = true;
    }
    std::vector<Dfa::Row> delta(*count);
    for (std::size_t q = 0; q < *count; ++q)
        delta[q] = {static_cast<State>(*trans[q][0]), static_cast<State>(*trans[q][1])};
    return Dfa(*count, static_cast<State>(*start), std::move(accepting), std::move(delta));
}

Dfa parse_dfa_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_dfa(in);
}

Dfa load_dfa(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open DFA file '" + path + "'");
    return parse_dfa(in);
}

std::string write_dfa(const Dfa& dfa) {
    std::ostringstream out;
    out << "states " << dfa.state_count() << '\n';
    out << "start " << dfa.start() << '\n';
    out << "accept";
    for (State q : dfa.accepting_states()) out << ' ' << q;
    out << '\n';
    for (State q = 0; q < dfa.state_count(); ++q)
        for (Bit b : {Bit{0}, Bit{1}}) out << "trans " << q << ' ' << int(b) << ' ' << dfa.step(q, b) << '\n';
    return out.str();
}

void save_dfa(const Dfa& dfa, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write DFA file '" + path + "'");
    out << write_dfa(dfa);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace dfastat
