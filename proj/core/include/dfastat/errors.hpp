#pragma once

#include <stdexcept>
#include <string>

namespace dfastat {

/// The requested analysis does not apply to this process model, e.g. chain
/// analysis of a dominant process (not finite-state Markov jointly with a DFA).
class UnsupportedModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear solve failed or produced a result outside tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dfastat
