#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dfastat/automata.hpp"

namespace dfastat {

/// Malformed DFA text. Carries the 1-based line number when one applies.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Line-oriented text format:
///
///     # comment
///     states <k>
///     start <q>
///     accept <q1> <q2> ...      (list may be empty)
///     trans <q> <bit> <q'>      (exactly 2k lines)
///
/// Duplicate or missing transitions are rejected.
Dfa parse_dfa(std::istream& in);
Dfa parse_dfa_string(std::string_view text);
Dfa load_dfa(const std::string& path);

/// Canonical rendering: header lines, then transitions ordered by (q, bit).
std::string write_dfa(const Dfa& dfa);
void save_dfa(const Dfa& dfa, const std::string& path);

}  // namespace dfastat
