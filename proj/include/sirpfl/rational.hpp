#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sirpfl {

/// Exact rational number. All arithmetic in the toolkit is exact; the rounding
/// algorithms branch on 1/2-thresholds of LP values, which floats would miss.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q" in lowest terms.
inline std::string rat_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p" or "p/q" with optional leading minus. Rejects floats, empty parts
/// and zero denominators.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto is_int = [](const std::string& s) {
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!is_int(num) || !is_int(den)) return std::nullopt;
    mpz_class p(num), q(den);
    if (q == 0) return std::nullopt;
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline Rational parse_rational_or_throw(const std::string& text, const std::string& where) {
    auto r = parse_rational(text);
    if (!r) throw std::invalid_argument(where + ": malformed rational '" + text + "'");
    return *r;
}

inline mpz_class rat_floor(const Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline mpz_class rat_ceil(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

/// ceil(a/b) for positive rationals, as a machine integer. Trip counts at desk
/// scale always fit.
inline long ceil_div(const Rational& a, const Rational& b) {
    if (b <= 0) throw std::invalid_argument("ceil_div: nonpositive divisor");
    mpz_class c = rat_ceil(Rational(a / b));
    if (!c.fits_slong_p()) throw std::overflow_error("ceil_div: result too large");
    return c.get_si();
}

/// 6-decimal approximation used in reports next to the exact value.
inline std::string rat_approx6(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", q.get_d());
    return buf;
}

}  // namespace sirpfl
