#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/formal.hpp"
#include "dmod/tate.hpp"

namespace dmod {

// Symbolic local Fourier rules (exact on regular components, invariant
// bookkeeping everywhere) and the local Katz-Radon transform with its
// oracle cross-check.

// Kummer rule at a rational point x: K^a (x) U_m |-> K^{a+1} (x) U_m,
// twisted into the class-(x) sector by the rank-one module with
// exponential part x zeta^{-2} when x is nonzero.
inline FormalModule fourier_local_regular(const FormalModule& m_in, const Rat& x) {
    FormalModule m = canonical(m_in);
    for (const auto& e : m.comps)
        if (e.f.ord())
            fail(errc::use_bookkeeping,
                 "irregular component: only invariant-level bookkeeping is available");
    FormalModule out;
    for (const auto& e : m.comps) {
        Series f_out = x == 0 ? series_zero() : monomial(Rat(-2), x);
        out.comps.push_back(ElementaryModule{1, f_out, e.residue + 1, e.unip});
    }
    return canonical(out);
}

enum class FourierFlavor { x_to_inf, inf_to_x, inf_to_inf };

inline const char* flavor_name(FourierFlavor f) {
    switch (f) {
        case FourierFlavor::x_to_inf: return "(x,infty)";
        case FourierFlavor::inf_to_x: return "(infty,x)";
        case FourierFlavor::inf_to_inf: return "(infty,infty)";
    }
    return "?";
}

struct TransformBookkeeping {
    long rank_out = 0;
    Rat irr_out;
    std::vector<std::pair<Rat, long>> slopes_out;  // untwisted slopes
    std::optional<Rat> class_label;                // finite class, nullopt = infinity sector
};

namespace detail {
inline FormalModule untwist_class(const FormalModule& m, const Rat& x) {
    FormalModule out = canonical(m);
    if (x == 0) return out;
    for (auto& e : out.comps) e.f = series_sub(e.f, monomial(Rat(-2), x, e.ram));
    return canonical(out);
}

inline long as_long(const Rat& r) {
    if (!is_integer(r)) fail(errc::bad_input, "expected an integer, got " + rat_str(r));
    return static_cast<long>(Int(rat_num(r)));
}
}  // namespace detail

// Rank, irregularity and slope bookkeeping of the three local Fourier
// flavors. Slopes map s -> s/(1+s) toward infinity, s -> s/(s-1) inside
// the steep sector, and back by t -> t/(1-t); ranks follow
// rank + irregularity in the (x,infty) direction.
inline TransformBookkeeping fourier_bookkeeping(const FormalModule& m_in, FourierFlavor flavor,
                                                std::optional<Rat> x = std::nullopt) {
    TransformBookkeeping out;
    out.irr_out = Rat(0);
    std::map<Rat, long> slopes;

    switch (flavor) {
        case FourierFlavor::x_to_inf: {
            FormalModule m = canonical(m_in);
            out.class_label = x.value_or(Rat(0));
            for (const auto& e : m.comps) {
                Rat s = slope(e);
                long rk = rank(e);
                long mult = detail::as_long(Rat(rk) * (1 + s));
                slopes[s / (1 + s)] += mult;
                out.rank_out += mult;
            }
            break;
        }
        case FourierFlavor::inf_to_inf: {
            FormalModule m = canonical(m_in);
            for (const auto& e : m.comps) {
                Rat s = slope(e);
                if (!(s > 1))
                    fail(errc::wrong_slope_sector,
                         "(infty,infty) needs all slopes above 1, found " + rat_str(s));
                long rk = rank(e);
                long mult = detail::as_long(Rat(rk) * (s - 1));
                slopes[s / (s - 1)] += mult;
                out.rank_out += mult;
            }
            break;
        }
        case FourierFlavor::inf_to_x: {
            Rat cls = x.value_or(Rat(0));
            FormalModule m = detail::untwist_class(m_in, cls);
            out.class_label = cls;
            for (const auto& e : m.comps) {
                Rat t = slope(e);
                if (!(t < 1))
                    fail(errc::wrong_slope_sector,
                         "(infty,x) input is not in the class-(" + rat_str(cls) +
                             ") sector after untwisting");
                long rk = rank(e);
                long mult = detail::as_long(Rat(rk) * (1 - t));
                slopes[t / (1 - t)] += mult;
                out.rank_out += mult;
            }
            break;
        }
    }
    for (const auto& [s, mult] : slopes) {
        out.slopes_out.emplace_back(s, mult);
        out.irr_out += s * mult;
    }
    return out;
}

// Slope/leading-term decomposition at infinity: slopes above one on one
// side, everything else keyed by the zeta^{-2} coefficient of the
// canonical exponential part.
struct InfinityDecomposition {
    FormalModule over1;
    std::map<Rat, FormalModule> classes;
};

inline InfinityDecomposition infinity_decompose(const FormalModule& m_in) {
    InfinityDecomposition out;
    for (const auto& e : canonical(m_in).comps) {
        if (slope(e) > 1) {
            out.over1.comps.push_back(e);
        } else {
            out.classes[e.f.at(Rat(-2))].comps.push_back(e);
        }
    }
    return out;
}

// Local Katz-Radon: tensor each slope-s part by the Kummer module with
// residue lambda (s+1).
inline FormalModule radon_local(const FormalModule& m_in, const Rat& lambda) {
    if (is_integer(lambda)) fail(errc::integral_lambda, "lambda must avoid the integers");
    FormalModule out;
    for (const auto& e : canonical(m_in).comps) {
        ElementaryModule c = e;
        c.residue += lambda * (slope(e) + 1);
        out.comps.push_back(std::move(c));
    }
    return canonical(out);
}

struct CrosscheckReport {
    bool agree = false;
    long rank = 0;
    std::vector<std::pair<Rat, long>> slopes;
    std::string detail;
    long precision = 0;
};

namespace detail {
inline bool newton_match(const NewtonData& a, const NewtonData& b, std::string& why) {
    if (a.slopes != b.slopes) {
        why = "slope multisets differ";
        return false;
    }
    if (a.edges.size() != b.edges.size()) {
        why = "edge counts differ";
        return false;
    }
    for (size_t i = 0; i < a.edges.size(); ++i)
        if (!(a.edges[i].edge_poly == b.edges[i].edge_poly)) {
            why = "edge polynomial differs on the slope-" + rat_str(a.edges[i].slope) + " edge";
            return false;
        }
    return true;
}
}  // namespace detail

// Oracle confirmation of the local Katz-Radon formula on a rank-one
// irregular input: the annihilator of the generator after transform-then-
// twist must carry the same Newton data as the one after twist-then-
// transform, where the twisted input is the symbolic radon_local output.
inline CrosscheckReport radon_local_crosscheck(const Series& f, const Rat& residue,
                                               const Rat& lambda, long precision = 30) {
    if (is_integer(lambda)) fail(errc::integral_lambda, "lambda must avoid the integers");
    ElementaryModule e = canonicalize(ElementaryModule{1, f, residue, 1});
    if (!e.f.ord()) fail(errc::regular_connection, "cross-check needs an irregular input");
    Rat s = slope(e);

    // side A: Four(M) tensored by K^lambda at infinity, via the twisted dzeta
    Realization ra = make_realization(e.f, e.residue);
    AnnihilatorOptions oa;
    oa.precision = precision;
    oa.max_order = 1 + detail::as_long(s * 1) + 1;
    oa.twist = lambda;
    DifferentialOperator la = annihilator(ra, realization_generator(ra), oa);
    NewtonData na = newton_slopes(la);

    // side B: the symbolic Radon output, transformed with the plain dzeta
    FormalModule mb = radon_local(FormalModule{{e}}, lambda);
    const ElementaryModule& eb = mb.comps.at(0);
    Realization rb = make_realization(eb.f, eb.residue);
    AnnihilatorOptions ob = oa;
    ob.twist = Rat(0);
    DifferentialOperator lb = annihilator(rb, realization_generator(rb), ob);
    NewtonData nb = newton_slopes(lb);

    CrosscheckReport rep;
    rep.precision = precision;
    rep.rank = la.order();
    rep.slopes = na.slopes;
    std::string why;
    if (la.order() != lb.order()) {
        rep.detail = "operator orders differ";
        return rep;
    }
    if (!detail::newton_match(na, nb, why)) {
        rep.detail = why;
        return rep;
    }
    rep.agree = true;
    rep.detail = "oracle Newton data of both sides agree with the symbolic transform";
    return rep;
}

// Oracle-vs-symbolic comparison for the (x,infty) Fourier bookkeeping of a
// rank-one input; used by the command-line driver.
inline bool fourier_oracle_agrees(const ElementaryModule& e_in, const OracleReport& rep) {
    ElementaryModule e = canonicalize(e_in);
    if (e.ram != 1) fail(errc::unsupported_ramification, "oracle handles unramified rank one");
    TransformBookkeeping book =
        fourier_bookkeeping(FormalModule{{e}}, FourierFlavor::x_to_inf, Rat(0));
    if (book.rank_out != rep.rank_out) return false;
    std::vector<std::pair<Rat, long>> got = rep.newton.slopes;
    return got == book.slopes_out;
}

}  // namespace dmod
