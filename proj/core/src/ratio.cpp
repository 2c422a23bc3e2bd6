#include "dfastat/ratio.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace dfastat {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    return value;
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Ratio Ratio::parse(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Ratio(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));

    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Ratio(parse_int(text, text), 1);

    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15 || (int_part.empty() && frac_part.empty()))
        throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);

    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (whole < 0 || frac < 0) throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    std::int64_t num = whole * scale + frac;
    return Ratio(negative ? -num : num, scale);
}

std::string Ratio::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Ratio one_minus(const Ratio& r) { return Ratio(r.den() - r.num(), r.den()); }

}  // namespace dfastat
