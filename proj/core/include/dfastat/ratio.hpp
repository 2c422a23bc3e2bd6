#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dfastat {

using BigRational = boost::multiprecision::cpp_rational;

/// Exact rational number with 64-bit parts, kept in lowest terms with a
/// positive denominator. Used for thresholds and for parameters that feed
/// exact formulas.
class Ratio {
public:
    constexpr Ratio() = default;
    Ratio(std::int64_t num, std::int64_t den);

    /// Accepts "p/q", an integer, or a plain decimal such as "0.75".
    static Ratio parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    BigRational to_big() const { return BigRational(num_, den_); }
    std::string str() const;

    /// True iff 0 < value < 1.
    bool in_open_unit() const { return num_ > 0 && num_ < den_; }

    friend bool operator==(const Ratio&, const Ratio&) = default;
    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Ratio one_minus(const Ratio& r);

}  // namespace dfastat
