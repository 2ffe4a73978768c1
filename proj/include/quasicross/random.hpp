#pragma once

#include "quasicross/rational.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace quasicross {

/// Seedable, splittable pseudo-random stream.
///
/// Stream k of seed s is std::mt19937_64 seeded through std::seed_seq with
/// the four 32-bit words (s_lo, s_hi, k_lo, k_hi). Both the engine and
/// seed_seq are fully specified by the standard, and every draw below uses
/// raw 64-bit outputs only (no std distributions), so results are identical
/// on every conforming platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound), bound > 0; unbiased by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("empty range");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo);
        if (span == UINT64_MAX) return static_cast<std::int64_t>(next());
        return lo + static_cast<std::int64_t>(below(span + 1));
    }

    /// Uniform real in [0, 1) with 53 bits; for Metropolis acceptance only.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    [[nodiscard]] std::string state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void restore(const std::string& text) {
        std::istringstream is(text);
        is >> engine_;
        if (!is) throw std::invalid_argument("malformed random stream state");
    }

    friend bool operator==(const RandomStream& a, const RandomStream& b) { return a.engine_ == b.engine_; }

private:
    std::mt19937_64 engine_;
};

/// Coin with exact rational bias p in [0, 1]: heads iff a raw 64-bit draw is
/// below floor(p * 2^64). Exact for dyadic p with denominator <= 2^64.
class RationalCoin {
public:
    explicit RationalCoin(const Rational& p) {
        if (p.sign() < 0 || p > Rational(1)) throw std::invalid_argument("probability outside [0, 1]");
        mpz_class two64;
        mpz_ui_pow_ui(two64.get_mpz_t(), 2, 64);
        mpz_class t = (p * Rational(two64)).floor();
        always_ = t == two64;
        threshold_ = always_ ? 0 : static_cast<std::uint64_t>(std::stoull(t.get_str()));
    }

    bool flip(RandomStream& rng) const {
        const std::uint64_t x = rng.next();
        return always_ || x < threshold_;
    }

private:
    std::uint64_t threshold_ = 0;
    bool always_ = false;
};

}  // namespace quasicross
