#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "dmod/error.hpp"

namespace dmod {

// Exact arbitrary-precision rationals over Q. The rational backend keeps
// the canonical form (positive denominator, reduced fraction) on every
// operation, which is exactly the invariant the rest of the library
// relies on for equality tests. Expression templates are disabled so the
// types behave as plain values in deduced contexts.
using Int = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

inline Rat make_rat(long num, long den) {
    if (den == 0) fail(errc::bad_input, "rational with zero denominator");
    return Rat(num, den);
}

// Largest integer <= r.
inline Int floor_int(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
    return q;
}

inline Int ceil_int(const Rat& r) { return -floor_int(-r); }

// r reduced into [0, m) by integer multiples of m (m > 0).
inline Rat reduce_mod(const Rat& r, const Rat& m) {
    Rat q = r / m;
    return r - Rat(floor_int(q)) * m;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) fail(errc::bad_input, "zero to a negative power");
    Rat acc(1), b = base;
    long n = e < 0 ? -e : e;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return e < 0 ? Rat(1) / acc : acc;
}

inline std::string rat_str(const Rat& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Accepts "p/q", "p", and an optional leading sign on either part.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) fail(errc::bad_input, "zero denominator in \"" + s + "\"");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        fail(errc::bad_input, "not a rational: \"" + s + "\"");
    }
}

inline long lcm_long(long a, long b) {
    Int g = boost::multiprecision::gcd(Int(a), Int(b));
    return static_cast<long>(Int(Int(a) / g * Int(b)));
}

// Gamma(-alpha-k)/Gamma(-alpha), evaluated through the recurrence
// Gamma(x) = Gamma(x+1)/x so that only rational ratios ever appear.
// k > 0:  prod_{j=1..k} 1/(-alpha-j);  k < 0:  prod_{j=0..-k-1} (-alpha+j).
inline Rat pochhammer_ratio(const Rat& alpha, long k) {
    if (is_integer(alpha))
        fail(errc::integer_residue, "pochhammer_ratio needs a non-integral residue");
    Rat acc(1);
    if (k > 0) {
        for (long j = 1; j <= k; ++j) acc /= -alpha - j;
    } else {
        for (long j = 0; j < -k; ++j) acc *= -alpha + j;
    }
    return acc;
}

}  // namespace dmod
