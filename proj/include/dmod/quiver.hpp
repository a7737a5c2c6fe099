#pragma once

#include <random>
#include <utility>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/matrix.hpp"

namespace dmod {

// Regular-unipotent disk modules in their linear-algebra form: a local
// system on the punctured disk is a pair (V, rho) with rho invertible,
// and a module on the disk is a quadruple (V, V', can, var) with
// id + can*var (equivalently id + var*can) invertible.

struct MonodromyPair {
    long dim = 0;
    Mat rho;  // dim x dim, invertible

    static MonodromyPair make(Mat rho_) {
        if (rho_.rows != rho_.cols) fail(errc::bad_input, "monodromy must be square");
        if (!invertible(rho_)) fail(errc::bad_input, "monodromy must be invertible");
        return MonodromyPair{rho_.rows, std::move(rho_)};
    }
};

struct DiskQuad {
    long dimV = 0, dimVp = 0;
    Mat can;  // V  -> V'   (dimVp x dimV)
    Mat var;  // V' -> V    (dimV x dimVp)

    static DiskQuad make(Mat can_, Mat var_) {
        DiskQuad q;
        q.dimV = can_.cols;
        q.dimVp = can_.rows;
        if (var_.rows != q.dimV || var_.cols != q.dimVp)
            fail(errc::bad_input, "can/var shapes are inconsistent");
        q.can = std::move(can_);
        q.var = std::move(var_);
        if (!invertible(Mat::identity(q.dimV) + q.var * q.can))
            fail(errc::bad_input, "id + var*can must be invertible");
        return q;
    }
};

struct QuadMorphism {
    Mat phiV;   // V1  -> V2
    Mat phiVp;  // V1' -> V2'
};

inline bool is_morphism(const DiskQuad& q1, const DiskQuad& q2, const QuadMorphism& m) {
    if (m.phiV.rows != q2.dimV || m.phiV.cols != q1.dimV) return false;
    if (m.phiVp.rows != q2.dimVp || m.phiVp.cols != q1.dimVp) return false;
    return (m.phiVp * q1.can == q2.can * m.phiV) && (m.phiV * q1.var == q2.var * m.phiVp);
}

inline QuadMorphism compose(const DiskQuad&, const QuadMorphism& g, const QuadMorphism& f) {
    return QuadMorphism{g.phiV * f.phiV, g.phiVp * f.phiVp};
}

// Nearby cycles: (V, var*can + id).
inline MonodromyPair psi(const DiskQuad& q) {
    return MonodromyPair{q.dimV, q.var * q.can + Mat::identity(q.dimV)};
}

// Vanishing cycles: (V', can*var + id).
inline MonodromyPair phi(const DiskQuad& q) {
    return MonodromyPair{q.dimVp, q.can * q.var + Mat::identity(q.dimVp)};
}

// Extensions across the puncture. The two quadruples are told apart by
// their sub/quotient structure: the !-extension contains the punctual
// module and surjects onto the constant one, the *-extension the other
// way around; j_mid is the image of the canonical map j_shriek -> j_star.
inline DiskQuad j_shriek(const MonodromyPair& p) {
    return DiskQuad{p.dim, p.dim, Mat::identity(p.dim), p.rho - Mat::identity(p.dim)};
}

inline DiskQuad j_star(const MonodromyPair& p) {
    return DiskQuad{p.dim, p.dim, p.rho - Mat::identity(p.dim), Mat::identity(p.dim)};
}

// (V, (rho-id)(V)); the column-space basis uses leftmost pivots so the
// result is reproducible.
inline DiskQuad j_mid(const MonodromyPair& p) {
    ColFactor f = column_space_factor(p.rho - Mat::identity(p.dim));
    return DiskQuad{p.dim, f.basis.cols, f.coords, f.basis};
}

// The adjunction morphism j_shriek(p) -> j_star(p); its image is j_mid(p).
inline QuadMorphism canonical_shriek_to_star(const MonodromyPair& p) {
    return QuadMorphism{Mat::identity(p.dim), p.rho - Mat::identity(p.dim)};
}

inline MonodromyPair dual_pair(const MonodromyPair& p) {
    return MonodromyPair{p.dim, transpose(inverse(p.rho))};
}

// D(V,V',a,b) = (V^*, V'^*, -b^*, a^*(b^* a^* + id)^{-1}).
inline DiskQuad dual_quad(const DiskQuad& q) {
    Mat ct = transpose(q.can), vt = transpose(q.var);
    Mat inner = vt * ct + Mat::identity(q.dimVp);
    return DiskQuad{q.dimV, q.dimVp, vt * Rat(-1), ct * inverse(inner)};
}

// Basis of Hom(q1, q2): the two commuting squares as one exact linear
// system in (phiV, phiVp).
inline std::vector<QuadMorphism> hom_space(const DiskQuad& q1, const DiskQuad& q2) {
    const long nV = q2.dimV * q1.dimV;
    const long nVp = q2.dimVp * q1.dimVp;
    const long rows = q2.dimVp * q1.dimV + q2.dimV * q1.dimVp;
    auto idxV = [&](long i, long j) { return i * q1.dimV + j; };
    auto idxVp = [&](long i, long j) { return nV + i * q1.dimVp + j; };

    Mat sys(rows, nV + nVp);
    long r = 0;
    // phiVp * can1 = can2 * phiV
    for (long i = 0; i < q2.dimVp; ++i)
        for (long j = 0; j < q1.dimV; ++j, ++r) {
            for (long k = 0; k < q1.dimVp; ++k) sys(r, idxVp(i, k)) += q1.can(k, j);
            for (long k = 0; k < q2.dimV; ++k) sys(r, idxV(k, j)) -= q2.can(i, k);
        }
    // phiV * var1 = var2 * phiVp
    for (long i = 0; i < q2.dimV; ++i)
        for (long j = 0; j < q1.dimVp; ++j, ++r) {
            for (long k = 0; k < q1.dimV; ++k) sys(r, idxV(i, k)) += q1.var(k, j);
            for (long k = 0; k < q2.dimVp; ++k) sys(r, idxVp(k, j)) -= q2.var(i, k);
        }

    std::vector<QuadMorphism> basis;
    for (const auto& v : kernel_basis(std::move(sys))) {
        QuadMorphism m{Mat(q2.dimV, q1.dimV), Mat(q2.dimVp, q1.dimVp)};
        for (long i = 0; i < q2.dimV; ++i)
            for (long j = 0; j < q1.dimV; ++j) m.phiV(i, j) = v[idxV(i, j)];
        for (long i = 0; i < q2.dimVp; ++i)
            for (long j = 0; j < q1.dimVp; ++j) m.phiVp(i, j) = v[idxVp(i, j)];
        basis.push_back(std::move(m));
    }
    return basis;
}

// Image of a morphism as a subquad of the target, with deterministic
// column-space bases on both levels.
inline DiskQuad image_quad(const DiskQuad& q1, const DiskQuad& q2, const QuadMorphism& m) {
    if (!is_morphism(q1, q2, m)) fail(errc::bad_input, "image_quad of a non-morphism");
    Mat BV = column_space_factor(m.phiV).basis;
    Mat BVp = column_space_factor(m.phiVp).basis;
    // Restrict can2/var2 to the image subspaces; solvability is guaranteed
    // because the image of a morphism is a subobject.
    Mat can_sub = solve_exact(BVp, q2.can * BV);
    Mat var_sub = solve_exact(BV, q2.var * BVp);
    return DiskQuad{BV.cols, BVp.cols, can_sub, var_sub};
}

inline bool pair_isomorphic(const MonodromyPair& a, const MonodromyPair& b) {
    if (a.dim != b.dim) return false;
    return conjugate(a.rho, b.rho);
}

// Isomorphism = an invertible element of the hom space. The search takes
// random integer combinations of the hom basis; any hit is verified
// exactly, so "true" is a certificate. For a space that does contain an
// invertible element the miss probability per draw is bounded by
// Schwartz-Zippel and is negligible over many draws.
inline bool quad_isomorphic(const DiskQuad& a, const DiskQuad& b, int attempts = 64) {
    if (a.dimV != b.dimV || a.dimVp != b.dimVp) return false;
    if (a.dimV == 0 && a.dimVp == 0) return true;
    auto basis = hom_space(a, b);
    if (basis.empty()) return false;
    if ((long)basis.size() != (long)hom_space(b, a).size()) return false;

    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<long> coeff(-1000003, 1000003);
    for (int t = 0; t < attempts; ++t) {
        QuadMorphism m{Mat(b.dimV, a.dimV), Mat(b.dimVp, a.dimVp)};
        for (const auto& h : basis) {
            Rat c(t == 0 ? 1 : coeff(rng));
            m.phiV = m.phiV + h.phiV * c;
            m.phiVp = m.phiVp + h.phiVp * c;
        }
        bool invV = a.dimV == 0 || invertible(m.phiV);
        bool invVp = a.dimVp == 0 || invertible(m.phiVp);
        if (invV && invVp) return true;
    }
    return false;
}

}  // namespace dmod
