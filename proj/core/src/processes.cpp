#include "dfastat/processes.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dfastat {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_probability(double p, bool open_low, bool open_high, const char* what) {
    const bool ok = std::isfinite(p) && (open_low ? p > 0.0 : p >= 0.0) && (open_high ? p < 1.0 : p <= 1.0);
    if (!ok) throw std::invalid_argument(std::string(what) + " out of range");
}

std::vector<std::string_view> split_colon(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        auto colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos) break;
        pos = colon + 1;
    }
    return parts;
}

double parse_number(std::string_view text) { return Ratio::parse(text).to_double(); }

Bit parse_bit(std::string_view text) {
    if (text == "0") return 0;
    if (text == "1") return 1;
    throw std::invalid_argument("expected bit 0 or 1, got '" + std::string(text) + "'");
}

}  // namespace

void validate(const ProcessSpec& spec) {
    std::visit(overloaded{
                   [](const Bernoulli& p) { require_probability(p.theta, false, false, "bernoulli theta"); },
                   [](const Degenerate& p) {
                       if (p.bit > 1) throw std::invalid_argument("degenerate bit must be 0 or 1");
                   },
                   [](const Dominant& p) {
                       if (p.target_bit > 1) throw std::invalid_argument("dominant target must be 0 or 1");
                       require_probability(p.switch_rate, true, false, "dominant switch rate");
                   },
                   [](const MarkovBinary& p) {
                       require_probability(p.p01, true, true, "markov p01");
                       require_probability(p.p10, true, true, "markov p10");
                   },
               },
               spec);
}

ProcessSpec parse_process(std::string_view text) {
    const auto parts = split_colon(text);
    const std::string_view kind = parts[0];
    auto expect = [&](std::size_t n) {
        if (parts.size() != n) throw std::invalid_argument("malformed process spec '" + std::string(text) + "'");
    };
    ProcessSpec spec;
    if (kind == "bernoulli") {
        expect(2);
        spec = Bernoulli{parse_number(parts[1])};
    } else if (kind == "degenerate") {
        expect(2);
        spec = Degenerate{parse_bit(parts[1])};
    } else if (kind == "dominant") {
        expect(3);
        spec = Dominant{parse_bit(parts[1]), parse_number(parts[2])};
    } else if (kind == "markov") {
        expect(3);
        spec = MarkovBinary{parse_number(parts[1]), parse_number(parts[2])};
    } else {
        throw std::invalid_argument("unknown process kind '" + std::string(kind) + "'");
    }
    validate(spec);
    return spec;
}

std::string to_string(const ProcessSpec& spec) {
    // Shortest text that parses back to the same double.
    auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    return std::visit(overloaded{
                          [&](const Bernoulli& p) { return "bernoulli:" + num(p.theta); },
                          [&](const Degenerate& p) { return "degenerate:" + std::to_string(int(p.bit)); },
                          [&](const Dominant& p) {
                              return "dominant:" + std::to_string(int(p.target_bit)) + ':' + num(p.switch_rate);
                          },
                          [&](const MarkovBinary& p) { return "markov:" + num(p.p01) + ':' + num(p.p10); },
                      },
                      spec);
}

bool has_full_support(const ProcessSpec& spec) {
    if (const auto* b = std::get_if<Bernoulli>(&spec)) return b->theta > 0.0 && b->theta < 1.0;
    return std::holds_alternative<MarkovBinary>(spec);
}

ProcessSampler::ProcessSampler(const ProcessSpec& spec, Seed seed, std::uint64_t trial)
    : spec_(spec), rng_(SplitMix64::for_trial(seed, trial)) {}

Bit ProcessSampler::next() {
    return std::visit(overloaded{
                          [&](const Bernoulli& p) -> Bit { return rng_.uniform() < p.theta ? 1 : 0; },
                          [&](const Degenerate& p) -> Bit { return p.bit; },
                          [&](const Dominant& p) -> Bit {
                              if (!switched_ && rng_.uniform() < p.switch_rate) switched_ = true;
                              if (switched_) return p.target_bit;
                              return static_cast<Bit>(rng_.next() >> 63);
                          },
                          [&](const MarkovBinary& p) -> Bit {
                              if (!started_) {
                                  started_ = true;
                                  previous_ = rng_.uniform() < p.stationary_one() ? 1 : 0;
                              } else if (previous_ == 0) {
                                  previous_ = rng_.uniform() < p.p01 ? 1 : 0;
                              } else {
                                  previous_ = rng_.uniform() < p.p10 ? 0 : 1;
                              }
                              return previous_;
                          },
                      },
                      spec_);
}

BitString sample(const ProcessSpec& spec, std::size_t n, Seed seed, std::uint64_t trial) {
    ProcessSampler sampler(spec, seed, trial);
    BitString out(n);
    for (auto& b : out) b = sampler.next();
    return out;
}

Ratio IncrementalMean::value() const {
    if (count_ == 0) throw std::logic_error("mean of an empty stream is undefined");
    return Ratio(ones_, count_);
}

double IncrementalMean::value_double() const {
    if (count_ == 0) throw std::logic_error("mean of an empty stream is undefined");
    return static_cast<double>(ones_) / static_cast<double>(count_);
}

Ratio incremental_mean(std::span<const Bit> stream) {
    IncrementalMean mean;
    for (Bit b : stream) mean.push(b);
    return mean.value();
}

double hoeffding_bound(std::size_t n, double eps) {
    if (n == 0) throw std::invalid_argument("hoeffding bound needs n >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("hoeffding bound needs eps > 0");
    return std::exp(-2.0 * static_cast<double>(n) * eps * eps);
}

}  // namespace dfastat
