#ifndef BIHULL_PRNG_HPP
#define BIHULL_PRNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bihull/rational.hpp"

namespace bihull {

/// Deterministic random source. mt19937_64 has a standardized bit stream, and
/// every derived quantity below is computed by a fixed algorithm (std
/// distributions are implementation-defined, so we avoid them); identical
/// seeds give identical results on every platform.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in {0, ..., n-1} by rejection from the top 64-bit range.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (fixed formula, both values used).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = unit();
        } while (u1 == 0.0);
        u2 = unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(6.283185307179586476925286766559 * u2);
        have_spare_ = true;
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Rational in [0, 1] with denominator `den` (numerator uniform in 0..den).
    Rat unit_rational(std::uint64_t den = 64) {
        Rat r(static_cast<unsigned long>(below(den + 1)), static_cast<unsigned long>(den));
        r.canonicalize();
        return r;
    }

    std::vector<Rat> rational_point(std::size_t n, std::uint64_t den = 64) {
        std::vector<Rat> x(n);
        for (auto& xi : x) xi = unit_rational(den);
        return x;
    }

    /// Child generator with an independent-looking stream; used to hand
    /// deterministic per-work-item seeds to parallel or per-graph loops.
    std::uint64_t derive_seed() { return eng_() ^ 0x9e3779b97f4a7c15ULL; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bihull

#endif
