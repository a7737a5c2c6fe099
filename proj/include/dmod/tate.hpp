#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/formal.hpp"
#include "dmod/matrix.hpp"
#include "dmod/series.hpp"

namespace dmod {

// First-principles realization of a rank-one unramified connection on a
// truncated exponent-indexed space. Vectors are Laurent series on the
// lattice offset + Z; the Kummer residue is carried by the lattice offset
// so the derivation is the literal one, d/dz + f.
//
// The integral-residue case (trivial Kummer structure) uses the two-sided
// basis {z^k, k >= 0} u {d^j(1), j >= 1} with z d(1) = 0. Those vectors
// live on the integer lattice with key -j standing for d^j(1).
struct Realization {
    Series f;     // canonical: exact, exponents <= -2 (possibly empty)
    Rat offset;   // lattice offset; the canonical residue in [0,1)
    bool extended = false;
    long pole = 0;  // pole order of f (0 when regular)

    bool irregular() const { return pole >= 2; }
};

inline Realization make_realization(const Series& f, const Rat& residue,
                                    bool allow_extended = true) {
    ElementaryModule e = canonicalize(ElementaryModule{1, f, residue, 1});
    Realization r;
    r.f = e.f;
    if (auto o = e.f.ord()) {
        r.pole = static_cast<long>(-floor_int(*o));
        r.offset = e.residue;  // irregular: any offset works, keep the residue
    } else if (e.residue != 0) {
        r.offset = e.residue;
    } else {
        if (!allow_extended)
            fail(errc::resonance, "trivial Kummer structure has horizontal sections");
        r.extended = true;
    }
    return r;
}

inline Series realization_generator(const Realization& r) {
    return monomial(r.extended ? Rat(0) : r.offset, Rat(1),
                    r.extended ? 1 : static_cast<long>(rat_den(r.offset)));
}

// --- basic actions ---------------------------------------------------------

inline Series apply_z(const Realization& r, const Series& v) {
    if (!r.extended) return series_shift(v, Rat(1));
    Series out;
    out.ram = 1;
    if (v.trunc) out.trunc = *v.trunc + 1;
    for (const auto& [e, c] : v.c) {
        if (e >= 0) {
            out.c[e + 1] += c;
        } else {
            // z d^j(1) = (1-j) d^{j-1}(1); kills d(1)
            Rat j = -e;
            if (j > 1) out.c[e + 1] += c * (Rat(1) - j);
        }
    }
    return normalized(std::move(out));
}

inline Series apply_d(const Realization& r, const Series& v) {
    if (!r.extended) return series_add(series_derive(v), series_mul(r.f, v));
    Series out;
    out.ram = 1;
    if (v.trunc) out.trunc = *v.trunc - 1;
    for (const auto& [e, c] : v.c) {
        if (e > 0)
            out.c[e - 1] += c * e;
        else if (e == 0)
            out.c[Rat(-1)] += c;  // d(1) = delta_1
        else
            out.c[e - 1] += c;  // d(d^j(1)) = d^{j+1}(1)
    }
    return normalized(std::move(out));
}

// Solve d(v) = w exactly to the requested bound, by back-substitution in
// the triangular coefficient system. Irregular connections pivot on the
// leading pole coefficient and gain pole-order many exponents of
// precision; the regular non-resonant case is termwise division.
inline Series solve_d(const Realization& r, const Series& w, const Rat& tau) {
    Series v;
    if (r.extended) {
        // termwise and exact: d is bijective on the two-sided basis
        v.ram = 1;
        v.trunc = w.trunc ? std::optional<Rat>(*w.trunc + 1) : std::nullopt;
        for (const auto& [e, c] : w.c) {
            if (e == -1)
                v.c[Rat(0)] += c;  // delta_1 comes from the constant
            else if (e < -1)
                v.c[e + 1] += c;
            else
                v.c[e + 1] += c / (e + 1);
        }
        return normalized(std::move(v));
    }

    v.ram = static_cast<long>(rat_den(r.offset));
    if (!r.irregular()) {
        // (e+1) v_{e+1} = w_e, and e+1 is never zero off the resonant case;
        // exact inputs give exact outputs
        v.trunc = w.trunc ? std::optional<Rat>(*w.trunc + 1) : std::nullopt;
        for (const auto& [e, c] : w.c) {
            if (e + 1 == 0) fail(errc::resonance, "horizontal section obstruction");
            v.c[e + 1] = c / (e + 1);
        }
        return normalized(std::move(v));
    }

    const long p = r.pole;
    const Rat fp = r.f.leading_coeff();
    std::optional<Rat> bound = w.trunc ? std::optional<Rat>(*w.trunc + p) : std::nullopt;
    Rat vtrunc = bound && *bound < tau ? *bound : tau;
    if (w.known_zero()) {
        v.trunc = vtrunc;
        return v;
    }
    Rat q = *w.ord() + p;  // bottom of the solution
    v.ram = lcm_long(v.ram, w.ram);
    for (; q < vtrunc; q += 1) {
        // row at exponent q - p determines v_q
        Rat m = q - p;
        Rat rhs = w.at(m);
        rhs -= (m + 1) * v.at(m + 1);
        for (const auto& [e, fe] : r.f.c) {
            if (e == -p) continue;
            rhs -= fe * v.at(m - e);
        }
        if (rhs != 0) v.c[q] = rhs / fp;
    }
    v.trunc = vtrunc;
    return normalized(std::move(v));
}

inline Series zeta_action(const Realization& r, const Series& v, const Rat& tau) {
    return series_neg(solve_d(r, v, tau));
}

// dzeta = -d(d(z v)); the twisted variant realizes tensoring by a Kummer
// module at infinity, dzeta + lambda/zeta = -d d z - lambda d.
inline Series dzeta_action(const Realization& r, const Series& v, const Rat& lambda = Rat(0)) {
    Series out = series_neg(apply_d(r, apply_d(r, apply_z(r, v))));
    if (lambda != 0) out = series_sub(out, series_scale(apply_d(r, v), lambda));
    return out;
}

// --- annihilating operators ------------------------------------------------

struct AnnihilatorOptions {
    long max_order = 6;
    long precision = 40;   // guaranteed exponent window below which vectors are exact
    long max_degree = -1;  // zeta-degree cap; defaults to precision/2
    Rat twist;             // lambda of the twisted dzeta, 0 for none
};

// Minimal-order monic-normalized operator sum a_j(zeta) dzeta^j that
// annihilates the generator on the verified window. The window is
// overdetermined by a fixed margin, and the (order, degree) pair is
// minimal by construction, so the kernel is one-dimensional.
inline DifferentialOperator annihilator(const Realization& r, const Series& gen,
                                        const AnnihilatorOptions& opt) {
    const long N = opt.precision;
    const long Dmax = opt.max_degree >= 0 ? opt.max_degree : N / 2;
    const long margin = 4;

    std::vector<std::vector<Series>> vecs;  // vecs[j][k] = zeta^k dzeta^j gen
    std::vector<Series> dpow{gen};

    auto column = [&](long j, long k) -> const Series& {
        while ((long)vecs.size() <= j) {
            long jj = static_cast<long>(vecs.size());
            if (jj > 0) dpow.push_back(dzeta_action(r, dpow[jj - 1], opt.twist));
            vecs.push_back({dpow[jj]});
        }
        auto& row = vecs[j];
        while ((long)row.size() <= k) row.push_back(zeta_action(r, row.back(), Rat(N)));
        return row[k];
    };

    for (long m = 1; m <= opt.max_order; ++m) {
        for (long D = 0; D <= Dmax; ++D) {
            // usable rows sit below every truncated column's bound
            std::optional<Rat> cap;
            bool any_truncated = false;
            for (long j = 0; j <= m; ++j)
                for (long k = 0; k <= D; ++k)
                    if (column(j, k).trunc) {
                        any_truncated = true;
                        cap = min_trunc(cap, column(j, k).trunc);
                    }
            std::map<Rat, long> row_of;
            for (long j = 0; j <= m; ++j)
                for (long k = 0; k <= D; ++k)
                    for (const auto& [e, c] : column(j, k).c) {
                        if (cap && e >= *cap) continue;
                        row_of.emplace(e, (long)row_of.size());
                        (void)c;
                    }
            // renumber rows in exponent order for determinism
            long idx = 0;
            for (auto& [e, i] : row_of) i = idx++;

            const long unknowns = (m + 1) * (D + 1);
            // exact columns certify a relation outright; truncated ones
            // need the window overdetermined
            if (any_truncated && (long)row_of.size() < unknowns + margin) continue;

            if (row_of.empty()) continue;
            Mat sys((long)row_of.size(), unknowns);
            for (long j = 0; j <= m; ++j)
                for (long k = 0; k <= D; ++k) {
                    long colidx = j * (D + 1) + k;
                    for (const auto& [e, c] : column(j, k).c) {
                        if (cap && e >= *cap) continue;
                        sys(row_of[e], colidx) = c;
                    }
                }
            auto ker = kernel_basis(std::move(sys));
            if (ker.empty()) continue;
            if (ker.size() > 1)
                fail(errc::insufficient_precision,
                     "annihilator kernel is not one-dimensional at the minimal degree");
            // leading coefficient must be present, otherwise the true order is lower
            bool leading = false;
            for (long k = 0; k <= D; ++k)
                if (ker[0][m * (D + 1) + k] != 0) leading = true;
            if (!leading) continue;

            DifferentialOperator op;
            for (long j = 0; j <= m; ++j) {
                Series a;
                a.ram = 1;
                for (long k = 0; k <= D; ++k) {
                    const Rat& c = ker[0][j * (D + 1) + k];
                    if (c != 0) a.c[Rat(k)] = c;
                }
                op.coeff.push_back(std::move(a));
            }
            return monic_normalized(std::move(op));
        }
    }
    fail(errc::no_relation_found,
         "no annihilating relation up to order " + std::to_string(opt.max_order));
}

// --- local Fourier data from the oracle ------------------------------------

struct OracleReport {
    long rank_out = 0;
    NewtonData newton;
    std::optional<Rat> residue_out;
    DifferentialOperator op;
    long precision = 0;
};

// Realizes zeta = -d^{-1}, dzeta = -d d z on the extension of the rank-one
// module and reads off the transform through the minimal annihilator of
// the generator. The operator order must reproduce rank + irregularity.
inline OracleReport local_fourier_invariants(const Series& f, const Rat& residue,
                                             long precision = 40) {
    Realization r = make_realization(f, residue);
    long expected = 1 + (r.irregular() ? r.pole - 1 : 0);

    AnnihilatorOptions opt;
    opt.max_order = expected;
    opt.precision = precision;
    DifferentialOperator op = annihilator(r, realization_generator(r), opt);

    OracleReport rep;
    rep.op = op;
    rep.precision = precision;
    rep.rank_out = op.order();
    rep.newton = newton_slopes(op);
    if (rep.rank_out != expected)
        fail(errc::inconsistent_type,
             "oracle rank " + std::to_string(rep.rank_out) + " disagrees with rank+irregularity " +
                 std::to_string(expected));
    for (const auto& [s, mult] : rep.newton.slopes) {
        if (s >= 1)
            fail(errc::inconsistent_type, "output slope " + rat_str(s) + " is not below 1");
        (void)mult;
    }
    if (rep.rank_out == 1 && rep.newton.slopes.size() == 1 &&
        rep.newton.slopes[0].first == 0) {
        const Series& a0 = op.coeff[0];
        const Series& a1 = op.coeff[1];
        rep.residue_out = -a0.leading_coeff() / a1.leading_coeff();
    }
    return rep;
}

// --- growth classification --------------------------------------------------

// First-order local operator v -> A v' + B v on plain Laurent vectors;
// covers z^a d on any elementary component once moved to its ramified
// cover, and multiplication operators (A = 0).
struct LocalOp {
    Series A;
    Series B;
};

inline Series local_apply(const LocalOp& op, const Series& v) {
    return series_add(series_mul(op.A, series_derive(v)), series_mul(op.B, v));
}

inline Series local_solve(const LocalOp& op, const Series& w, const Rat& tau) {
    std::optional<Rat> dA, dB;
    if (auto o = op.A.ord()) dA = *o - 1;
    if (auto o = op.B.ord()) dB = *o;
    if (!dA && !dB) fail(errc::bad_input, "solve of the zero operator");
    Rat delta = dA && dB ? (*dA < *dB ? *dA : *dB) : (dA ? *dA : *dB);
    Rat lcA = dA ? op.A.leading_coeff() : Rat(0);
    Rat lcB = dB ? op.B.leading_coeff() : Rat(0);

    Series v;
    v.ram = lcm_long(lcm_long(op.A.ram, op.B.ram), w.ram);
    std::optional<Rat> bound = w.trunc ? std::optional<Rat>(*w.trunc - delta) : std::nullopt;
    Rat vtrunc = bound && *bound < tau ? *bound : tau;
    if (w.known_zero()) {
        v.trunc = vtrunc;
        return v;
    }
    Rat step = Rat(1, v.ram);
    for (Rat e = *w.ord() - delta; e < vtrunc; e += step) {
        Rat rr = e + delta;  // row index
        Rat rhs = w.at(rr);
        // lower, already-determined positions feeding this row (ep == e is
        // the pivot, split off below; ep > e cannot occur by triangularity)
        for (const auto& [a, ca] : op.A.c) {
            Rat ep = rr + 1 - a;
            if (ep >= e) continue;
            rhs -= ca * ep * v.at(ep);
        }
        for (const auto& [b, cb] : op.B.c) {
            Rat ep = rr - b;
            if (ep >= e) continue;
            rhs -= cb * v.at(ep);
        }
        Rat pivot = (dA && *dA == delta ? lcA * e : Rat(0)) + (dB && *dB == delta ? lcB : Rat(0));
        if (pivot == 0) {
            if (rhs != 0) fail(errc::resonance, "operator is not invertible at this exponent");
            continue;
        }
        if (rhs != 0) v.c[e] = rhs / pivot;
    }
    v.trunc = vtrunc;
    return normalized(std::move(v));
}

enum class Growth { Contracting, Expanding, Inconclusive };

struct GrowthVerdict {
    Growth verdict = Growth::Inconclusive;
    std::vector<Rat> witness;  // observed minimal orders per iteration
};

inline const char* growth_name(Growth g) {
    switch (g) {
        case Growth::Contracting: return "Contracting";
        case Growth::Expanding: return "Expanding";
        case Growth::Inconclusive: return "Inconclusive";
    }
    return "?";
}

// z^a d on the elementary component, written on its ramified cover: in the
// coordinate w with z = w^r the operator is (1/r) w^{ra-r+1} d/dw +
// w^{ra}(f(w) + residue w^{-r}).
inline LocalOp z_pow_d_operator(const ElementaryModule& e_in, long a) {
    ElementaryModule e = canonicalize(e_in);
    long rr = e.ram;
    Series fw = series_stretch(e.f, rr);
    Series B = series_add(fw, monomial(Rat(-rr), e.residue));
    B = series_shift(B, Rat(rr * a));
    Series A = monomial(Rat(rr * a - rr + 1), Rat(1, rr));
    return LocalOp{A, B};
}

inline GrowthVerdict classify_growth(const LocalOp& op, long iters, const Rat& tau) {
    std::vector<Series> gens{monomial(Rat(0), Rat(1)), monomial(Rat(1), Rat(1)),
                             monomial(Rat(2), Rat(1))};
    auto run = [&](bool forward) -> std::optional<std::vector<Rat>> {
        std::vector<Rat> mins;
        for (long it = 0; it < iters; ++it) mins.push_back(tau);
        for (auto g : gens) {
            Rat prev = *g.ord();
            Series u = g;
            for (long it = 0; it < iters; ++it) {
                try {
                    u = forward ? local_apply(op, u) : local_solve(op, u, tau);
                } catch (const domain_error&) {
                    return std::nullopt;
                }
                auto o = u.ord();
                if (!o || !(*o > prev)) return std::nullopt;
                prev = *o;
                if (*o < mins[it]) mins[it] = *o;
            }
        }
        return mins;
    };
    GrowthVerdict v;
    if (auto w = run(true)) {
        v.verdict = Growth::Contracting;
        v.witness = *w;
    } else if (auto w = run(false)) {
        v.verdict = Growth::Expanding;
        v.witness = *w;
    }
    return v;
}

inline GrowthVerdict classify_z_pow_d(const ElementaryModule& e, long a, long iters = 6,
                                      const Rat& tau = Rat(40)) {
    return classify_growth(z_pow_d_operator(e, a), iters, tau);
}

// p(d) and p(z) classification. p(z) is a multiplication operator; p(d)
// factors into linear pieces over Q or the inverse direction is skipped.
inline GrowthVerdict classify_poly_z(const ElementaryModule& e, const QPoly& p, long iters = 6,
                                     const Rat& tau = Rat(40)) {
    Series B;
    B.ram = canonicalize(e).ram;
    for (long i = 0; i <= p.deg(); ++i)
        if (p.coeff(i) != 0) B.c[Rat(i * B.ram)] = p.coeff(i);
    return classify_growth(LocalOp{series_zero(B.ram), B}, iters, tau);
}

// --- lattice comparison (the two topologies agree) ---------------------------

struct TopologyReport {
    long z_bound = 0;     // m(n): zeta-order >= m forces z-order >= n
    long zeta_bound = 0;  // symmetric direction
};

inline TopologyReport topology_compare(const Realization& r, long n, long window = 40) {
    Series gen = realization_generator(r);
    long rank = 1 + (r.irregular() ? r.pole - 1 : 0);

    // zeta-lattice generators: dzeta^i(gen), i < rank
    std::vector<Series> zgens{gen};
    for (long i = 1; i < rank; ++i) zgens.push_back(dzeta_action(r, zgens.back()));

    // full table of zeta^k g_i with their orders; the orders increase in k
    // by the contraction claim
    std::vector<std::vector<std::pair<Series, Rat>>> table(zgens.size());
    Rat mu_max = Rat(-window);
    for (size_t i = 0; i < zgens.size(); ++i) {
        Series v = truncated(zgens[i], Rat(window));
        for (long k = 0; k <= window; ++k) {
            auto o = v.ord();
            if (!o) break;
            table[i].push_back({v, *o});
            if (*o > mu_max) mu_max = *o;
            v = zeta_action(r, v, Rat(window));
        }
    }

    long m = -1;
    for (long k = 0; k <= window && m < 0; ++k) {
        bool all_above = true;
        for (const auto& gens : table) {
            if (k >= (long)gens.size() || gens[k].second < n) all_above = false;
        }
        if (all_above) m = k;
    }
    if (m < 0) fail(errc::insufficient_precision, "window exhausted in topology_compare");

    // Symmetric direction: zeta-order of z^k gen via greedy expansion in
    // the zeta-lattice basis. Greedy reduction is complete as long as the
    // generator orders are pairwise distinct, which holds for the rank-one
    // realizations handled here; ties would only overestimate the bound.
    auto in_lattice = [&](Series rem) -> bool {
        long guard = 0;
        while (auto o = rem.ord()) {
            if (*o > mu_max) return true;  // below observable precision
            if (++guard > 8 * window) return false;
            bool hit = false;
            for (size_t i = 0; i < table.size() && !hit; ++i)
                for (size_t k = 0; k < table[i].size() && !hit; ++k) {
                    if (table[i][k].second != *o) continue;
                    Rat c = rem.at(*o) / table[i][k].first.at(*o);
                    rem = series_sub(rem, series_scale(table[i][k].first, c));
                    hit = true;
                }
            if (!hit) return false;
        }
        return true;
    };
    auto zeta_ord = [&](Series v) -> long {
        long t = 0;
        for (; t <= window; ++t) {
            if (!in_lattice(v)) break;
            v = series_neg(apply_d(r, v));  // zeta^{-1}
        }
        return t - 1;
    };

    long mp = -1, stable = 0;
    for (long k = 0; k <= window; ++k) {
        Series zk = truncated(series_shift(gen, Rat(k)), Rat(window));
        long zo = zeta_ord(zk);
        if (zo >= n) {
            if (mp < 0) mp = k;
            if (++stable >= 5) break;
        } else {
            mp = -1;
            stable = 0;
        }
    }
    if (mp < 0) fail(errc::insufficient_precision, "window exhausted in topology_compare");
    return TopologyReport{m, mp};
}

}  // namespace dmod
