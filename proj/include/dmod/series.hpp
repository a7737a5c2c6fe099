#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "dmod/error.hpp"
#include "dmod/rat.hpp"

namespace dmod {

// Truncated Puiseux series: a finite exponent->coefficient map on the
// lattice (1/ram)Z together with a truncation bound. Coefficients at
// exponents >= trunc are unknown (not zero); a missing trunc means the
// series is exact and everything unstored is genuinely zero.
//
// Exponents are exact rationals throughout. The lattice constraint is
// den(e) | ram, which also accommodates offset lattices gamma + (1/r)Z
// once ram absorbs den(gamma).
struct Series {
    long ram = 1;
    std::map<Rat, Rat> c;
    std::optional<Rat> trunc;

    bool exact() const { return !trunc.has_value(); }
    bool known_zero() const { return c.empty(); }
    bool is_exact_zero() const { return c.empty() && exact(); }

    const Rat& at(const Rat& e) const {
        static const Rat zero(0);
        auto it = c.find(e);
        return it == c.end() ? zero : it->second;
    }

    // Order of the known part; nullopt when nothing is known (exact zero
    // or everything hidden behind the truncation).
    std::optional<Rat> ord() const {
        if (c.empty()) return std::nullopt;
        return c.begin()->first;
    }

    Rat leading_coeff() const {
        if (c.empty()) fail(errc::bad_input, "leading coefficient of a zero series");
        return c.begin()->second;
    }

    std::string str(const char* var = "z") const {
        if (c.empty() && exact()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, v] : c) {
            if (!first) os << " + ";
            os << "(" << rat_str(v) << ")" << var << "^(" << rat_str(e) << ")";
            first = false;
        }
        if (trunc) os << (first ? "" : " + ") << "O(" << var << "^(" << rat_str(*trunc) << "))";
        return os.str();
    }
};

namespace detail {
inline void check_lattice(const Series& s) {
    for (const auto& [e, v] : s.c) {
        if (!is_integer(e * s.ram))
            fail(errc::invalid_ramified_data,
                 "exponent " + rat_str(e) + " is not on the (1/" + std::to_string(s.ram) +
                     ")Z lattice");
        (void)v;
    }
}
}  // namespace detail

// Drops zero coefficients and anything at or above the truncation.
inline Series normalized(Series s) {
    if (s.ram <= 0) fail(errc::invalid_ramified_data, "ramification must be positive");
    detail::check_lattice(s);
    for (auto it = s.c.begin(); it != s.c.end();) {
        bool drop = it->second == 0 || (s.trunc && it->first >= *s.trunc);
        it = drop ? s.c.erase(it) : std::next(it);
    }
    return s;
}

inline Series series_zero(long ram = 1) { return Series{ram, {}, std::nullopt}; }

inline Series monomial(const Rat& e, const Rat& coeff, long ram = 1) {
    Series s;
    s.ram = ram;
    if (coeff != 0) s.c[e] = coeff;
    return normalized(std::move(s));
}

inline Series constant(const Rat& v) { return monomial(Rat(0), v); }

inline Series truncated(Series s, const Rat& tau) {
    if (!s.trunc || tau < *s.trunc) s.trunc = tau;
    return normalized(std::move(s));
}

inline long merged_ram(const Series& a, const Series& b) { return lcm_long(a.ram, b.ram); }

inline std::optional<Rat> min_trunc(const std::optional<Rat>& a, const std::optional<Rat>& b) {
    if (!a) return b;
    if (!b) return a;
    return a < b ? a : b;
}

inline Series series_add(const Series& a, const Series& b) {
    Series r;
    r.ram = merged_ram(a, b);
    r.trunc = min_trunc(a.trunc, b.trunc);
    r.c = a.c;
    for (const auto& [e, v] : b.c) r.c[e] += v;
    return normalized(std::move(r));
}

inline Series series_neg(Series a) {
    for (auto& [e, v] : a.c) v = -v;
    return a;
}

inline Series series_sub(const Series& a, const Series& b) { return series_add(a, series_neg(b)); }

inline Series series_scale(Series a, const Rat& k) {
    if (k == 0) return Series{a.ram, {}, a.trunc};
    for (auto& [e, v] : a.c) v *= k;
    return a;
}

// Multiply by the monomial coeff*z^e0.
inline Series series_shift(const Series& a, const Rat& e0, const Rat& coeff = Rat(1)) {
    Series r;
    r.ram = lcm_long(a.ram, static_cast<long>(rat_den(e0)));
    if (a.trunc) r.trunc = *a.trunc + e0;
    if (coeff != 0)
        for (const auto& [e, v] : a.c) r.c[e + e0] = v * coeff;
    return normalized(std::move(r));
}

inline Series series_mul(const Series& a, const Series& b) {
    Series r;
    r.ram = merged_ram(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return Series{r.ram, {}, std::nullopt};

    // Tightest truncation implied by the operands: unknown tails enter the
    // product shifted by the other factor's order.
    std::optional<Rat> bound;
    auto fold = [&bound](const std::optional<Rat>& tau, const Series& other) {
        if (!tau) return;
        std::optional<Rat> o = other.ord();
        Rat cand = o ? *tau + *o : *tau + *other.trunc;
        if (!bound || cand < *bound) bound = cand;
    };
    fold(a.trunc, b);
    fold(b.trunc, a);
    r.trunc = bound;

    for (const auto& [ea, va] : a.c)
        for (const auto& [eb, vb] : b.c) {
            Rat e = ea + eb;
            if (r.trunc && e >= *r.trunc) continue;
            r.c[e] += va * vb;
        }
    return normalized(std::move(r));
}

// Multiplicative inverse. The input must have a known leading term; a
// series with more than one term needs a finite truncation to bound the
// geometric expansion.
inline Series series_inv(const Series& a) {
    if (a.c.empty()) fail(errc::not_a_unit, "inverse of a series with no known terms");
    Rat e0 = a.c.begin()->first;
    Rat c0 = a.c.begin()->second;
    if (a.c.size() == 1 && a.exact()) return monomial(-e0, Rat(1) / c0, a.ram);
    if (a.exact())
        fail(errc::insufficient_precision,
             "inverse of a multi-term exact series needs a truncation bound");

    Rat rel = *a.trunc - e0;  // relative precision of 1 + h
    Series h = series_shift(a, -e0, Rat(1) / c0);
    h.c.erase(Rat(0));
    h = truncated(std::move(h), rel);

    Series sum = truncated(constant(Rat(1)), rel);
    Series term = sum;
    Series neg_h = series_neg(h);
    while (!term.known_zero()) {
        term = series_mul(term, neg_h);
        sum = series_add(sum, term);
    }
    sum.trunc = rel;
    return series_shift(sum, -e0, Rat(1) / c0);
}

// Termwise z^e -> e z^{e-1}; lowers the truncation by one.
inline Series series_derive(const Series& a) {
    Series r;
    r.ram = a.ram;
    if (a.trunc) r.trunc = *a.trunc - 1;
    for (const auto& [e, v] : a.c) {
        if (e == 0) continue;
        r.c[e - 1] = v * e;
    }
    return normalized(std::move(r));
}

// Substitute z -> z^k (k > 0), e.g. to move a series to a cover.
inline Series series_stretch(const Series& a, long k) {
    Series r;
    r.ram = a.ram;  // exponents scale by k, so denominators only shrink
    if (a.trunc) r.trunc = *a.trunc * k;
    for (const auto& [e, v] : a.c) r.c[e * k] = v;
    return normalized(std::move(r));
}

inline bool series_known_equal(const Series& a, const Series& b) {
    // Equality of the known parts on the common window.
    std::optional<Rat> tau = min_trunc(a.trunc, b.trunc);
    auto within = [&tau](const Rat& e) { return !tau || e < *tau; };
    for (const auto& [e, v] : a.c)
        if (within(e) && b.at(e) != v) return false;
    for (const auto& [e, v] : b.c)
        if (within(e) && a.at(e) != v) return false;
    return true;
}

inline bool series_identical(const Series& a, const Series& b) {
    return a.c == b.c && a.trunc == b.trunc;
}

}  // namespace dmod
