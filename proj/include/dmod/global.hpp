#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/formal.hpp"
#include "dmod/transforms.hpp"

namespace dmod {

// Formal-type level global data: genus, rank, and the nearby-cycle class
// at every singular point, weighted by the residue-field degree.
struct FormalPoint {
    std::string label;
    std::optional<Rat> position;  // rational coordinate; nullopt for infinity or non-rational
    long degree = 1;
    FormalModule psi;
};

struct FormalType {
    long genus = 0;
    long rank = 1;
    std::vector<FormalPoint> points;
};

inline const char* kInfinityLabel = "infty";

inline FormalPoint make_point(const std::string& label, long degree, FormalModule psi) {
    FormalPoint p;
    p.label = label;
    p.degree = degree;
    p.psi = canonical(psi);
    if (label != kInfinityLabel) {
        try {
            p.position = parse_rat(label);
        } catch (const domain_error&) {
            p.position = std::nullopt;  // non-rational closed point, degree carries it
        }
    }
    return p;
}

inline void validate(const FormalType& ft) {
    if (ft.rank < 1) fail(errc::inconsistent_type, "rank must be positive");
    if (ft.genus < 0) fail(errc::inconsistent_type, "genus must be nonnegative");
    std::set<std::string> seen;
    for (const auto& p : ft.points) {
        if (!seen.insert(p.label).second)
            fail(errc::inconsistent_type, "duplicate point label " + p.label);
        if (p.degree < 1) fail(errc::inconsistent_type, "degree weights must be positive");
        if (rank(p.psi) != ft.rank)
            fail(errc::inconsistent_type, "psi at " + p.label + " has rank " +
                                              std::to_string(rank(p.psi)) + ", expected " +
                                              std::to_string(ft.rank));
    }
}

// chi_dR = rk (2-2g) - sum_x [k_x:k] (rk Phi_x + irreg Psi_x), with the
// middle-extension reading of Phi_x.
inline long euler_char(const FormalType& ft) {
    validate(ft);
    long chi = ft.rank * (2 - 2 * ft.genus);
    for (const auto& p : ft.points)
        chi -= p.degree * (phi_mid_rank(p.psi) + detail::as_long(irregularity(p.psi)));
    return chi;
}

// rig = chi of the middle extension of END: 2 n^2 minus the local END
// contributions. Requires genus zero and unramified nearby cycles.
inline long rigidity_index(const FormalType& ft) {
    validate(ft);
    if (ft.genus != 0) fail(errc::inconsistent_type, "rigidity index is defined over genus 0");
    long rig = 2 * ft.rank * ft.rank;
    for (const auto& p : ft.points) {
        FormalModule endo = end_of(p.psi);
        rig -= p.degree * (phi_mid_rank(endo) + detail::as_long(irregularity(endo)));
    }
    return rig;
}

namespace detail {
inline FormalModule trivial_module(long n) {
    FormalModule m;
    for (long i = 0; i < n; ++i) m.comps.push_back(ElementaryModule{1, series_zero(), Rat(0), 1});
    return m;
}

inline const FormalPoint* find_point(const FormalType& ft, const std::string& label) {
    for (const auto& p : ft.points)
        if (p.label == label) return &p;
    return nullptr;
}
}  // namespace detail

// rk Four(M) = irreg(psi_inf^{>1}) - rk(psi_inf^{>1})
//            + sum over finite x of [k_x:k] (rk Phi_x + irreg Psi_x).
inline long fourier_rank(const FormalType& ft) {
    validate(ft);
    const FormalPoint* inf = detail::find_point(ft, kInfinityLabel);
    FormalModule psi_inf = inf ? inf->psi : detail::trivial_module(ft.rank);

    long total = 0;
    FormalModule steep;
    for (const auto& e : canonical(psi_inf).comps)
        if (slope(e) > 1) steep.comps.push_back(e);
    total += detail::as_long(irregularity(steep)) - rank(steep);

    for (const auto& p : ft.points) {
        if (p.label == kInfinityLabel) continue;
        total += p.degree * (phi_mid_rank(p.psi) + detail::as_long(irregularity(p.psi)));
    }
    if (total < 0) fail(errc::inconsistent_type, "Fourier rank formula is negative");
    return total;
}

// rk Rad(M) = sum over all points of [k_x:k](rk Phi_x + irreg Psi_x) - rk M.
inline long radon_rank(const FormalType& ft) {
    validate(ft);
    if (ft.points.empty())
        fail(errc::no_singularities, "the Katz-Radon rank formula needs a singular point");
    long total = -ft.rank;
    for (const auto& p : ft.points)
        total += p.degree * (phi_mid_rank(p.psi) + detail::as_long(irregularity(p.psi)));
    if (total < 0) fail(errc::inconsistent_type, "Katz-Radon rank formula is negative");
    return total;
}

struct TransformedPoint {
    std::string label;
    bool exact = true;
    FormalModule module;        // Psi-level data in exact mode
    TransformBookkeeping book;  // invariant-level record in bookkeeping mode
};

struct TransformedType {
    long rank_out = 0;
    bool exact = true;
    long genus = 0;
    std::vector<TransformedPoint> points;
    std::string note;
};

namespace detail {
inline bool all_regular(const FormalType& ft) {
    for (const auto& p : ft.points)
        for (const auto& e : canonical(p.psi).comps)
            if (slope(e) != 0) return false;
    return true;
}
}  // namespace detail

// Transformed formal type under Fourier. Exact mode covers regular
// inputs: finite vanishing cycles of the output come from the inverse
// Kummer rule on psi_infty (all of it sits in the class-0 sector), and
// the output at infinity assembles the (x,infty) transforms of the
// vanishing cycles at the finite singular points. Any irregular input
// component demotes the whole transform to invariant bookkeeping.
inline TransformedType fourier_formal_type(const FormalType& ft) {
    validate(ft);
    TransformedType out;
    out.rank_out = fourier_rank(ft);
    const FormalPoint* inf = detail::find_point(ft, kInfinityLabel);
    FormalModule psi_inf = inf ? inf->psi : detail::trivial_module(ft.rank);

    if (detail::all_regular(ft)) {
        out.exact = true;
        // vanishing cycles of the output at z = 0
        FormalModule phi0 = tensor_kummer(psi_inf, Rat(-1));
        TransformedPoint p0;
        p0.label = "0";
        p0.exact = true;
        try {
            p0.module = phi_to_psi(phi0, out.rank_out);
        } catch (const domain_error& err) {
            if (err.code() != errc::inconsistent_rank) throw;
            fail(errc::inconsistent_rank,
                 "output is not a middle extension (punctual summands detected): " +
                     std::string(err.what()));
        }
        out.points.push_back(std::move(p0));

        // output nearby cycles at infinity
        FormalModule psi_out;
        for (const auto& p : ft.points) {
            if (p.label == kInfinityLabel) continue;
            FormalModule phi_x = psi_to_phi(p.psi);
            if (rank(phi_x) == 0) continue;
            if (!p.position)
                fail(errc::unsupported_ramification,
                     "exact Fourier transform needs rational finite singular points");
            FormalModule piece = fourier_local_regular(phi_x, *p.position);
            for (auto& c : piece.comps) psi_out.comps.push_back(std::move(c));
        }
        psi_out = canonical(psi_out);
        if (rank(psi_out) != out.rank_out)
            fail(errc::inconsistent_type, "assembled rank at infinity disagrees with the formula");
        TransformedPoint pinf;
        pinf.label = kInfinityLabel;
        pinf.exact = true;
        pinf.module = psi_out;
        out.points.push_back(std::move(pinf));
        return out;
    }

    // bookkeeping mode
    out.exact = false;
    out.note = "irregular input: invariant-level bookkeeping only";
    InfinityDecomposition dec = infinity_decompose(psi_inf);
    for (const auto& [cls, part] : dec.classes) {
        FormalModule reduced = psi_to_phi(part);
        if (rank(reduced) == 0 && cls == 0) continue;
        TransformedPoint p;
        p.label = rat_str(cls);
        p.exact = false;
        p.book = fourier_bookkeeping(part, FourierFlavor::inf_to_x, cls);
        out.points.push_back(std::move(p));
    }
    TransformedPoint pinf;
    pinf.label = kInfinityLabel;
    pinf.exact = false;
    TransformBookkeeping binf;
    binf.irr_out = Rat(0);
    if (rank(dec.over1) > 0) binf = fourier_bookkeeping(dec.over1, FourierFlavor::inf_to_inf);
    for (const auto& p : ft.points) {
        if (p.label == kInfinityLabel) continue;
        FormalModule phi_x = psi_to_phi(p.psi);
        if (rank(phi_x) == 0) continue;
        TransformBookkeeping bx = fourier_bookkeeping(phi_x, FourierFlavor::x_to_inf,
                                                      p.position.value_or(Rat(0)));
        binf.rank_out += bx.rank_out;
        binf.irr_out += bx.irr_out;  // untwisted irregularities add
        for (auto& sm : bx.slopes_out) binf.slopes_out.push_back(sm);
    }
    pinf.book = std::move(binf);
    out.points.push_back(std::move(pinf));
    return out;
}

// Transformed formal type under the local Katz-Radon transform: exact at
// every point, vanishing-cycle level, with the rank from the global
// formula.
inline TransformedType radon_formal_type(const FormalType& ft, const Rat& lambda) {
    validate(ft);
    if (is_integer(lambda)) fail(errc::integral_lambda, "lambda must avoid the integers");
    TransformedType out;
    out.rank_out = radon_rank(ft);
    out.exact = true;
    for (const auto& p : ft.points) {
        FormalModule phi_x = psi_to_phi(p.psi);
        FormalModule phi_out = radon_local(phi_x, lambda);
        TransformedPoint q;
        q.label = p.label;
        q.exact = true;
        q.module = phi_to_psi(phi_out, out.rank_out);
        out.points.push_back(std::move(q));
    }
    return out;
}

// Rebuild a FormalType from an exact transformed type (used by the
// round-trip identities).
inline FormalType to_formal_type(const TransformedType& t) {
    if (!t.exact) fail(errc::use_bookkeeping, "bookkeeping output carries no formal type");
    FormalType ft;
    ft.genus = t.genus;
    ft.rank = t.rank_out;
    for (const auto& p : t.points) ft.points.push_back(make_point(p.label, 1, p.module));
    return ft;
}

}  // namespace dmod
