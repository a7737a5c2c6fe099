#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/formal.hpp"
#include "dmod/poly.hpp"
#include "dmod/series.hpp"

namespace dmod {

// Symbol of the normalized connection operator P = (1/C)(d/dz + f) acting
// on monomials: P(z^b) = sum_i p_i(b) z^{b + (d+i)/ram}. The index i runs
// in steps of 1/ram above the leading offset d/ram = ord(f).
struct OperatorSymbol {
    long d = 0;  // leading offset, in 1/ram steps (equals ord(f) * ram)
    long ram = 1;
    Rat C;                 // leading coefficient of f
    std::vector<QPoly> p;  // p[0] = 1

    Rat d_exp() const { return Rat(d, ram); }
    Rat step() const { return Rat(1, ram); }
    QPoly coeff_poly(long i) const { return i >= 0 && i < (long)p.size() ? p[i] : QPoly(); }
};

inline OperatorSymbol symbol_from_connection(const Series& f, long r) {
    if (!f.exact()) fail(errc::bad_input, "connection data must be exact");
    auto o = f.ord();
    if (!o || !(*o < -1))
        fail(errc::regular_connection, "fractional powers need an irregular connection");
    for (const auto& [ex, c] : f.c) {
        if (!is_integer(ex * r))
            fail(errc::invalid_ramified_data,
                 "exponent " + rat_str(ex) + " not in (1/" + std::to_string(r) + ")Z");
        (void)c;
    }

    OperatorSymbol sym;
    sym.ram = r;
    sym.C = f.leading_coeff();
    Rat d_exp = *o;
    sym.d = static_cast<long>(Int(rat_num(d_exp * r)));

    long ideriv = static_cast<long>(Int(rat_num((Rat(-1) - d_exp) * r)));
    sym.p.assign(ideriv + 1, QPoly());
    for (const auto& [ex, c] : f.c) {
        long i = static_cast<long>(Int(rat_num((ex - d_exp) * r)));
        if ((long)sym.p.size() <= i) sym.p.resize(i + 1);
        sym.p[i] = sym.p[i] + QPoly(c / sym.C);
    }
    // the derivative contributes beta/C at the offset of z^{beta-1}
    sym.p[ideriv] = sym.p[ideriv] + QPoly{Rat(0), Rat(1) / sym.C};
    return sym;
}

// Bivariate table p_i(alpha, beta) with p_0 = 1, built by induction from
// P^alpha = P * P^{alpha-1}: the difference p_i(alpha,.) - p_i(alpha-1,.)
// involves only lower entries, and the discrete antiderivative closes the
// recursion with p_i(0,.) = 0.
struct PowerTable {
    long depth = 0;
    std::vector<BiPoly> p;  // variables (alpha, beta)
};

inline PowerTable power_table(const OperatorSymbol& sym, long depth) {
    PowerTable t;
    t.depth = depth;
    t.p.push_back(BiPoly::con(Rat(1)));
    const std::array<BiPoly, 2> alpha_down{BiPoly::var(0) - BiPoly::con(Rat(1)),
                                           BiPoly::var(1)};
    for (long i = 1; i <= depth; ++i) {
        BiPoly r;
        for (long j = 0; j < i; ++j) {
            QPoly u = sym.coeff_poly(i - j);
            if (u.zero()) continue;
            // u evaluated at beta + (alpha-1) d + j, in exponent units
            BiPoly arg = BiPoly::var(1) + BiPoly::var(0) * sym.d_exp() +
                         BiPoly::con(Rat(j, sym.ram) - sym.d_exp());
            BiPoly lhs = compose_qpoly(u, arg);
            r = r + lhs * compose_affine<2, 2>(t.p[j], alpha_down);
        }
        BiPoly pi = discrete_antiderivative(r, 0);
        if (pi.deg_in(0) > 2 * i + 2 || pi.deg_in(1) > i + 2)
            fail(errc::bad_input, "power table degree growth exceeded the expected bound");
        t.p.push_back(std::move(pi));
    }
    return t;
}

// P^alpha on a truncated series living on gamma + (1/ram)Z; the output
// lattice is shifted by alpha*d/ram.
inline Series apply_power(const OperatorSymbol& sym, const PowerTable& table, const Rat& alpha,
                          const Series& v, std::optional<Rat> want = std::nullopt) {
    Rat shift = alpha * sym.d_exp();
    Series out;
    out.ram = lcm_long(lcm_long(v.ram, sym.ram), static_cast<long>(rat_den(shift)));

    std::optional<Rat> bound;
    if (v.trunc) bound = *v.trunc + shift;
    if (auto o = v.ord()) {
        Rat exp_bound = *o + shift + Rat(table.depth + 1, sym.ram);
        bound = min_trunc(bound, exp_bound);
    }
    out.trunc = bound;
    if (want) {
        if (!bound || *bound < *want)
            fail(errc::insufficient_depth, "power table depth insufficient for the requested bound");
        out.trunc = want;
    }

    for (const auto& [b, c] : v.c)
        for (long i = 0; i <= table.depth; ++i) {
            Rat e = b + shift + Rat(i, sym.ram);
            if (out.trunc && e >= *out.trunc) break;
            Rat w = table.p[i].eval({alpha, b});
            if (w != 0) out.c[e] += c * w;
        }
    return normalized(std::move(out));
}

struct CheckReport {
    bool pass = true;
    long first_fail = -1;
    std::string detail;
};

// P^{a'+a''} = P^{a'} P^{a''} as an exact three-variable polynomial
// identity on the table entries.
inline CheckReport check_addition(const OperatorSymbol& sym, const PowerTable& table,
                                  long depth) {
    if (depth > table.depth) fail(errc::insufficient_depth, "table shallower than requested check");
    CheckReport rep;
    using T3 = TriPoly;  // variables (a', a'', beta)
    for (long i = 0; i <= depth; ++i) {
        std::array<T3, 2> lhs_sub{T3::var(0) + T3::var(1), T3::var(2)};
        T3 lhs = compose_affine<2, 3>(table.p[i], lhs_sub);
        T3 rhs;
        for (long j = 0; j <= i; ++j) {
            std::array<T3, 2> left_sub{
                T3::var(0), T3::var(2) + T3::var(1) * sym.d_exp() + T3::con(Rat(j, sym.ram))};
            std::array<T3, 2> right_sub{T3::var(1), T3::var(2)};
            rhs = rhs + compose_affine<2, 3>(table.p[i - j], left_sub) *
                            compose_affine<2, 3>(table.p[j], right_sub);
        }
        if (!(lhs == rhs)) {
            rep.pass = false;
            rep.first_fail = i;
            rep.detail = "addition law fails at index " + std::to_string(i);
            return rep;
        }
    }
    rep.detail = "addition law holds to index " + std::to_string(depth);
    return rep;
}

namespace detail {
// d/dz + f on literal exponents (the twist is carried by the lattice).
inline Series connection_d(const Series& f, const Series& v) {
    return series_add(series_derive(v), series_mul(f, v));
}

inline bool agree_with_window(const Series& a, const Series& b) {
    if (!series_known_equal(a, b)) return false;
    // demand a genuine comparison window
    std::optional<Rat> tau = min_trunc(a.trunc, b.trunc);
    if (!tau) return true;
    auto oa = a.ord(), ob = b.ord();
    Rat bottom = oa ? *oa : (ob ? *ob : *tau);
    return *tau - bottom >= 3;
}
}  // namespace detail

// P^alpha d = d P^alpha and P^alpha z = z P^alpha + (alpha/C) P^{alpha-1}
// on a spanning set of twisted monomials.
inline CheckReport check_heisenberg(const OperatorSymbol& sym, const PowerTable& table,
                                    const Rat& alpha) {
    Series f;  // reconstruct f from the symbol
    f.ram = sym.ram;
    for (long i = 0; i < (long)sym.p.size(); ++i) {
        QPoly u = sym.p[i];
        // constant part of p_i is f_{(d+i)/ram}/C; the beta-linear part is
        // the derivative marker and contributes no f term
        if (!u.zero() && u.coeff(0) != 0) f.c[Rat(sym.d + i, sym.ram)] = u.coeff(0) * sym.C;
    }
    f = normalized(std::move(f));

    CheckReport rep;
    for (const Rat& gamma : {Rat(0), Rat(1, 3)})
        for (long k = 0; k <= 2; ++k) {
            Series v = monomial(gamma + k, Rat(1), lcm_long(sym.ram, 3));
            // (2) P^a d = d P^a
            Series lhs = apply_power(sym, table, alpha, detail::connection_d(f, v));
            Series rhs = detail::connection_d(f, apply_power(sym, table, alpha, v));
            if (!detail::agree_with_window(lhs, rhs)) {
                rep.pass = false;
                rep.detail = "P^a d != d P^a at gamma=" + rat_str(gamma) + " k=" + std::to_string(k);
                return rep;
            }
            // (3) P^a z = z P^a + (a/C) P^{a-1}
            Series l3 = apply_power(sym, table, alpha, series_shift(v, Rat(1)));
            Series r3 = series_add(series_shift(apply_power(sym, table, alpha, v), Rat(1)),
                                   series_scale(apply_power(sym, table, alpha - 1, v),
                                                alpha / sym.C));
            if (!detail::agree_with_window(l3, r3)) {
                rep.pass = false;
                rep.detail =
                    "P^a z != z P^a + (a/C) P^{a-1} at gamma=" + rat_str(gamma) +
                    " k=" + std::to_string(k);
                return rep;
            }
        }
    rep.detail = "Heisenberg identities hold at alpha=" + rat_str(alpha);
    return rep;
}

// dzeta P^alpha = P^alpha (dzeta - alpha/zeta) on twisted monomial spaces,
// with zeta = -d^{-1} and dzeta = -d d z; only 1/zeta = -d is needed, so
// both sides stay exact.
inline CheckReport check_radon_intertwiner(const Series& f, const Rat& alpha, long tau) {
    OperatorSymbol sym = symbol_from_connection(f, 1);
    long pole = static_cast<long>(-floor_int(*f.ord()));
    PowerTable table = power_table(sym, tau + 2 * pole + 4);

    auto dz = [&](const Series& v) { return detail::connection_d(f, v); };
    auto dzeta = [&](const Series& v) {
        return series_neg(dz(dz(series_shift(v, Rat(1)))));
    };

    CheckReport rep;
    for (const Rat& gamma : {Rat(0), Rat(1, 3)})
        for (long k = 0; k <= 2; ++k) {
            Series v = monomial(gamma + k, Rat(1), 3);
            Series lhs = dzeta(apply_power(sym, table, alpha, v));
            // (dzeta - alpha/zeta) v = dzeta(v) + alpha d(v)
            Series rhs = apply_power(sym, table, alpha,
                                     series_add(dzeta(v), series_scale(dz(v), alpha)));
            if (!detail::agree_with_window(lhs, rhs)) {
                rep.pass = false;
                rep.detail = "intertwiner fails at gamma=" + rat_str(gamma) +
                             " k=" + std::to_string(k);
                return rep;
            }
        }
    rep.detail = "dzeta P^a = P^a (dzeta - a/zeta) verified at alpha=" + rat_str(alpha);
    return rep;
}

}  // namespace dmod
