#ifndef BIHULL_RATIONAL_HPP
#define BIHULL_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bihull {

/// Exact arbitrary-precision rational scalar. All polyhedral arithmetic in
/// this library is carried out in this type; doubles appear only at the
/// presentation layer.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline long rat_floor(const Rat& q) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p()) throw std::overflow_error("rat_floor overflow");
    return z.get_si();
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Exact conversion of a finite double (e.g. a sampled N(0,1) weight) into a
/// rational. mpq_class(double) is exact for every finite double.
inline Rat rat_from_double(double v) {
    Rat r(v);
    r.canonicalize();
    return r;
}

/// Parses "num/den", an integer, or a plain decimal like "-3.25".
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        mpz_class z;
        if (z.set_str(s, 10) != 0) throw std::invalid_argument("bad integer literal: " + s);
        return Rat(z);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("bad decimal literal: " + s);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad decimal literal: " + s);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Exact decimal rendering when the reduced denominator is of the form
/// 2^a * 5^b; returns nullopt otherwise (the caller then falls back to
/// "num/den" form).
inline std::optional<std::string> exact_decimal(const Rat& q) {
    mpz_class den = q.get_den();
    unsigned a = 0, b = 0;
    while (mpz_even_p(den.get_mpz_t())) {
        den /= 2;
        ++a;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++b;
    }
    if (den != 1) return std::nullopt;
    unsigned digits = a > b ? a : b;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class scaled = q.get_num() * scale / q.get_den();
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string body = scaled.get_str();
    std::string out;
    if (digits == 0) {
        out = body;
    } else {
        if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
        out = body.substr(0, body.size() - digits) + "." + body.substr(body.size() - digits);
    }
    if (neg) out.insert(out.begin(), '-');
    return out;
}

/// Decimal (exact if terminating) or "num/den" fallback; round-trips through
/// parse_rational either way.
inline std::string rat_to_string(const Rat& q) {
    if (auto dec = exact_decimal(q)) return *dec;
    return q.get_str();
}

/// Fixed-point decimal with round-half-even, for report columns. Exact
/// internals stay rational; this is presentation only.
inline std::string rat_to_fixed(const Rat& q, unsigned places) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    Rat scaled = q * Rat(scale);
    mpz_class lo;
    mpz_fdiv_q(lo.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Rat frac = scaled - Rat(lo);
    mpz_class rounded = lo;
    if (frac > Rat(1, 2))
        rounded = lo + 1;
    else if (frac == Rat(1, 2) && mpz_odd_p(lo.get_mpz_t()))
        rounded = lo + 1;
    bool neg = rounded < 0;
    if (neg) rounded = -rounded;
    std::string body = rounded.get_str();
    std::string out;
    if (places == 0) {
        out = body;
    } else {
        if (body.size() <= places) body.insert(0, places + 1 - body.size(), '0');
        out = body.substr(0, body.size() - places) + "." + body.substr(body.size() - places);
    }
    if (neg && rounded != 0) out.insert(out.begin(), '-');
    return out;
}

}  // namespace bihull

#endif
