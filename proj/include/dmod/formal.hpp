#pragma once

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/poly.hpp"
#include "dmod/series.hpp"

namespace dmod {

// Classification-level model of a holonomic module on the punctured
// formal disk: a finite multiset of elementary components
// (ramification, exponential part, Kummer residue, unipotent size).
// The exponential part is the f of the derivation d/dz + f(z) upstairs
// on the ramified cover, written in the downstairs coordinate, so its
// exponents live on (1/ram)Z.
struct ElementaryModule {
    long ram = 1;
    Series f;  // exact Laurent data, canonical form keeps only exponents < -1
    Rat residue;
    long unip = 1;
};

struct FormalModule {
    std::vector<ElementaryModule> comps;
};

namespace detail {

inline void validate_elementary(const ElementaryModule& e) {
    if (e.ram < 1 || e.unip < 1)
        fail(errc::invalid_ramified_data, "ramification and unipotent size must be >= 1");
    if (!e.f.exact())
        fail(errc::invalid_ramified_data, "exponential part must be exact data");
    for (const auto& [ex, v] : e.f.c) {
        if (!is_integer(ex * e.ram))
            fail(errc::invalid_ramified_data,
                 "exponent " + rat_str(ex) + " not in (1/" + std::to_string(e.ram) + ")Z");
        (void)v;
    }
}

// Galois conjugate z^{1/2} -> -z^{1/2}: flips the sign of coefficients at
// half-odd exponents.
inline Series conj_sqrt(const Series& f) {
    Series g = f;
    for (auto& [e, v] : g.c)
        if (!is_integer(e)) v = -v;
    return g;
}

inline bool f_less(const Series& a, const Series& b) { return a.c < b.c; }

}  // namespace detail

// Gauge normal form of one component, keeping its ramification: exponents
// >= -1 of f are removed (units gauge them away), the z^{-1} coefficient
// moves into the residue, the residue is reduced mod 1 (r = 1) or mod 1/r
// (r >= 2), and for r = 2 the representative is made sign-canonical under
// z^{1/2} -> -z^{1/2}.
inline ElementaryModule canonicalize(ElementaryModule e) {
    detail::validate_elementary(e);
    e.f.ram = e.ram;
    for (auto it = e.f.c.begin(); it != e.f.c.end();) {
        if (it->first >= -1) {
            if (it->first == -1) e.residue += it->second;
            it = e.f.c.erase(it);
        } else {
            ++it;
        }
    }
    Rat modulus = e.ram == 1 ? Rat(1) : Rat(1, e.ram);
    e.residue = reduce_mod(e.residue, modulus);
    if (e.ram == 2) {
        for (const auto& [ex, v] : e.f.c) {
            if (is_integer(ex)) continue;
            if (v < 0) e.f = detail::conj_sqrt(e.f);
            break;
        }
    }
    return e;
}

// Slope of a canonical component: 0 when regular, else -ord(f) - 1.
inline Rat slope(const ElementaryModule& e_in) {
    ElementaryModule e = canonicalize(e_in);
    auto o = e.f.ord();
    return o ? -*o - 1 : Rat(0);
}

inline long rank(const ElementaryModule& e) { return e.ram * e.unip; }

// Canonical decomposition of one component into primitive ones: if the
// exponential part actually lives on a coarser lattice (1/r')Z with
// r' < r, the pushforward splits into r/r' components with residues
// shifted by k/r.
inline std::vector<ElementaryModule> canonical_components(const ElementaryModule& e_in) {
    ElementaryModule e = canonicalize(e_in);
    long eff = 1;
    for (const auto& [ex, v] : e.f.c) {
        eff = lcm_long(eff, static_cast<long>(rat_den(ex)));
        (void)v;
    }
    long s = e.ram / eff;
    if (s == 1) return {e};
    std::vector<ElementaryModule> out;
    for (long k = 0; k < s; ++k) {
        ElementaryModule part = e;
        part.ram = eff;
        part.f.ram = eff;
        part.residue = e.residue + Rat(k, e.ram);
        out.push_back(canonicalize(std::move(part)));
    }
    return out;
}

namespace detail {
inline bool comp_less(const ElementaryModule& a, const ElementaryModule& b) {
    if (a.ram != b.ram) return a.ram < b.ram;
    if (a.f.c != b.f.c) return f_less(a.f, b.f);
    if (a.residue != b.residue) return a.residue < b.residue;
    return a.unip < b.unip;
}

inline bool comp_equal(const ElementaryModule& a, const ElementaryModule& b) {
    return a.ram == b.ram && a.f.c == b.f.c && a.residue == b.residue && a.unip == b.unip;
}
}  // namespace detail

inline FormalModule canonical(const FormalModule& m) {
    FormalModule r;
    for (const auto& e : m.comps)
        for (auto& part : canonical_components(e)) r.comps.push_back(std::move(part));
    std::sort(r.comps.begin(), r.comps.end(), detail::comp_less);
    return r;
}

inline FormalModule make_module(std::vector<ElementaryModule> comps) {
    return canonical(FormalModule{std::move(comps)});
}

inline long rank(const FormalModule& m) {
    long n = 0;
    for (const auto& e : m.comps) n += rank(e);
    return n;
}

inline Rat irregularity(const FormalModule& m) {
    Rat irr(0);
    for (const auto& e : m.comps) irr += slope(e) * rank(e);
    if (!is_integer(irr))
        fail(errc::invalid_ramified_data, "total irregularity " + rat_str(irr) + " is not integral");
    return irr;
}

inline FormalModule slope_part(const FormalModule& m, const Rat& s) {
    FormalModule r;
    for (const auto& e : canonical(m).comps)
        if (slope(e) == s) r.comps.push_back(e);
    return r;
}

inline std::vector<std::pair<Rat, long>> slope_multiset(const FormalModule& m) {
    std::map<Rat, long> acc;
    for (const auto& e : canonical(m).comps) acc[slope(e)] += rank(e);
    return {acc.begin(), acc.end()};
}

inline FormalModule tensor_kummer(const FormalModule& m, const Rat& gamma) {
    FormalModule r = m;
    for (auto& e : r.comps) e.residue += gamma;
    return canonical(r);
}

inline FormalModule dual(const FormalModule& m) {
    FormalModule r = m;
    for (auto& e : r.comps) {
        e.f = series_neg(e.f);
        e.residue = -e.residue;
    }
    return canonical(r);
}

// U_a (x) U_b = sum of U_{a+b+1-2k}, k = 1..min(a,b). Hard-coded here and
// validated against a brute-force Jordan oracle in the test suite.
inline std::vector<long> clebsch_gordan(long a, long b) {
    std::vector<long> sizes;
    for (long k = 1; k <= std::min(a, b); ++k) sizes.push_back(a + b + 1 - 2 * k);
    return sizes;
}

// END(M) = M (x) M^dual, restricted to unramified components: over Q a
// ramified tensor square would need roots of unity.
inline FormalModule end_of(const FormalModule& m_in) {
    FormalModule m = canonical(m_in);
    for (const auto& e : m.comps)
        if (e.ram != 1)
            fail(errc::unsupported_ramification, "end_of requires unramified components");
    FormalModule r;
    for (const auto& a : m.comps)
        for (const auto& b : m.comps) {
            Series f = series_sub(a.f, b.f);
            Rat residue = a.residue - b.residue;
            for (long u : clebsch_gordan(a.unip, b.unip))
                r.comps.push_back(ElementaryModule{1, f, residue, u});
        }
    return canonical(r);
}

// Horizontal sections: each canonical component with f = 0 and residue 0
// contributes exactly one line (the socle of its unipotent block).
inline long hor_rank(const FormalModule& m) {
    long h = 0;
    for (const auto& e : canonical(m).comps)
        if (e.f.known_zero() && e.residue == 0) ++h;
    return h;
}

inline long phi_mid_rank(const FormalModule& m) { return rank(m) - hor_rank(m); }

namespace detail {
inline bool trivial_type(const ElementaryModule& e) {
    return e.ram == 1 && e.f.known_zero() && e.residue == 0;
}
}  // namespace detail

// Vanishing cycles of the middle extension: quotient by the horizontal
// lines, i.e. each trivial-type U_m drops to U_{m-1}.
inline FormalModule psi_to_phi(const FormalModule& m) {
    FormalModule r;
    for (const auto& e : canonical(m).comps) {
        if (detail::trivial_type(e)) {
            if (e.unip > 1) {
                ElementaryModule shrunk = e;
                shrunk.unip = e.unip - 1;
                r.comps.push_back(std::move(shrunk));
            }
        } else {
            r.comps.push_back(e);
        }
    }
    return canonical(r);
}

// Inverse reconstruction: promote each trivial-type U_j to U_{j+1} and pad
// with trivial lines up to the prescribed rank.
inline FormalModule phi_to_psi(const FormalModule& phi_level, long total_rank) {
    FormalModule r;
    long promoted = 0;
    for (const auto& e : canonical(phi_level).comps) {
        ElementaryModule c = e;
        if (detail::trivial_type(e)) {
            c.unip = e.unip + 1;
            ++promoted;
        }
        r.comps.push_back(std::move(c));
    }
    long deficit = total_rank - rank(phi_level);
    long pad = deficit - promoted;
    if (deficit < 0 || pad < 0)
        fail(errc::inconsistent_rank, "rank " + std::to_string(total_rank) +
                                          " is too small for the given vanishing cycles");
    for (long i = 0; i < pad; ++i)
        r.comps.push_back(ElementaryModule{1, series_zero(), Rat(0), 1});
    return canonical(r);
}

inline bool is_isomorphic(const FormalModule& a, const FormalModule& b) {
    FormalModule ca = canonical(a), cb = canonical(b);
    if (ca.comps.size() != cb.comps.size()) return false;
    for (size_t i = 0; i < ca.comps.size(); ++i)
        if (!detail::comp_equal(ca.comps[i], cb.comps[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Newton polygons of differential operators sum a_j(z) D^j.
// ---------------------------------------------------------------------------

struct DifferentialOperator {
    std::vector<Series> coeff;  // coeff[j] multiplies D^j
    long order() const { return static_cast<long>(coeff.size()) - 1; }
};

struct NewtonEdge {
    Rat slope;
    long extent;
    QPoly edge_poly;  // normalized so the top coefficient is 1
};

struct NewtonData {
    std::vector<std::pair<Rat, long>> slopes;  // slope -> multiplicity
    Rat irregularity;
    std::vector<NewtonEdge> edges;  // positive-slope edges, left to right
};

// Plot (j, ord a_j - j), take the lower convex hull; positive edge slopes
// are the module slopes with multiplicity the horizontal extent, edges of
// slope <= 0 count as the regular part.
inline NewtonData newton_slopes(const DifferentialOperator& op) {
    long n = op.order();
    if (n < 0 || op.coeff.back().known_zero())
        fail(errc::bad_input, "operator needs a nonzero leading coefficient");

    struct Pt {
        long j;
        Rat v;
    };
    std::vector<Pt> pts;
    std::vector<std::pair<long, Rat>> uncertain;  // (j, lower bound on value)
    for (long j = 0; j <= n; ++j) {
        const Series& a = op.coeff[j];
        if (auto o = a.ord())
            pts.push_back({j, *o - j});
        else if (!a.exact())
            uncertain.push_back({j, *a.trunc - j});
    }
    if (pts.empty()) fail(errc::bad_input, "operator with no known coefficients");

    // Lower convex hull, monotone in j.
    std::vector<Pt> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const Pt& a = hull[hull.size() - 2];
            const Pt& b = hull[hull.size() - 1];
            // keep b only on a strict convex turn; collinear points are
            // dropped so each slope gives a single edge
            if ((b.v - a.v) * (p.j - b.j) < (p.v - b.v) * (b.j - a.j))
                break;
            hull.pop_back();
        }
        hull.push_back(p);
    }

    auto hull_value = [&hull](const Rat& x) {
        // piecewise-linear value of the hull at abscissa x (inside range)
        for (size_t i = 0; i + 1 < hull.size(); ++i) {
            Rat x1(hull[i].j), x2(hull[i + 1].j);
            if (x >= x1 && x <= x2)
                return hull[i].v + (hull[i + 1].v - hull[i].v) * (x - x1) / (x2 - x1);
        }
        return hull.back().v;
    };
    for (const auto& [j, bound] : uncertain) {
        if (j < hull.front().j || j > hull.back().j) {
            if (j > hull.back().j)
                fail(errc::insufficient_precision,
                     "leading coefficients undetermined at the truncation");
            continue;  // left of the hull cannot lower it below known points? it can -- check
        }
        if (!(bound > hull_value(Rat(j))))
            fail(errc::insufficient_precision,
                 "coefficient order at D^" + std::to_string(j) + " undetermined at truncation");
    }
    // An unknown coefficient strictly left of all known ones could extend
    // the hull; demand it be safely above the leftmost point.
    for (const auto& [j, bound] : uncertain)
        if (j < hull.front().j && !(bound > hull.front().v))
            fail(errc::insufficient_precision, "low-order coefficients undetermined");

    NewtonData out;
    out.irregularity = Rat(0);
    long flat = 0;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        long dj = hull[i + 1].j - hull[i].j;
        Rat s = (hull[i + 1].v - hull[i].v) / dj;
        if (s > 0) {
            out.slopes.emplace_back(s, dj);
            out.irregularity += s * dj;

            // Edge polynomial from the leading coefficients on the edge.
            long w = static_cast<long>(rat_den(s));
            QPoly ep;
            for (long j = hull[i].j; j <= hull[i + 1].j; ++j) {
                if ((j - hull[i].j) % w != 0) continue;
                const Series& a = op.coeff[j];
                auto o = a.ord();
                Rat line = hull[i].v + s * (j - hull[i].j);
                if (o && *o - j == line) {
                    long idx = (j - hull[i].j) / w;
                    if ((long)ep.a.size() <= idx) ep.a.resize(idx + 1, Rat(0));
                    ep.a[idx] = a.leading_coeff();
                }
            }
            ep.strip();
            out.edges.push_back(NewtonEdge{s, dj, monic(ep)});
        } else {
            flat += dj;
        }
    }
    if (flat > 0) out.slopes.insert(out.slopes.begin(), {Rat(0), flat});
    return out;
}

// Divide the whole operator by the leading coefficient's leading term so
// comparisons across runs are deterministic.
inline DifferentialOperator monic_normalized(DifferentialOperator op) {
    if (op.coeff.empty() || op.coeff.back().known_zero())
        fail(errc::bad_input, "cannot normalize an operator without a leading term");
    Rat e0 = *op.coeff.back().ord();
    Rat c0 = op.coeff.back().leading_coeff();
    for (auto& a : op.coeff) a = series_shift(a, -e0, Rat(1) / c0);
    return op;
}

}  // namespace dmod
