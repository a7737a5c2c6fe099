#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dmod;
using namespace dmod::testing;

TEST_CASE("psi and phi of the extensions recover the monodromy") {
    // psi(j_star(V,rho)) = (V,rho) and the three companions
    for (int trial = 0; trial < 25; ++trial) {
        MonodromyPair p = rand_pair();
        CHECK(psi(j_star(p)).rho == p.rho);
        CHECK(psi(j_shriek(p)).rho == p.rho);
        CHECK(phi(j_star(p)).rho == p.rho);
        CHECK(phi(j_shriek(p)).rho == p.rho);
    }
}

TEST_CASE("psi of an explicit quad") {
    Mat can{{Rat(1), Rat(0)}};           // V = Q^2 -> V' = Q^1
    Mat var{{Rat(0)}, {Rat(1)}};         // V' -> V
    DiskQuad q = DiskQuad::make(can, var);
    MonodromyPair pr = psi(q);
    Mat expect{{Rat(1), Rat(0)}, {Rat(1), Rat(1)}};
    CHECK(pr.rho == expect);
    CHECK(psi(DiskQuad{0, 0, Mat(0, 0), Mat(0, 0)}).dim == 0);
    CHECK(phi(DiskQuad{0, 0, Mat(0, 0), Mat(0, 0)}).dim == 0);
}

TEST_CASE("middle extension dimensions") {
    MonodromyPair id2 = MonodromyPair::make(Mat::identity(2));
    CHECK(j_mid(id2).dimVp == 0);

    MonodromyPair uni = MonodromyPair::make(Mat{{Rat(1), Rat(1)}, {Rat(0), Rat(1)}});
    DiskQuad m = j_mid(uni);
    CHECK(m.dimV == 2);
    CHECK(m.dimVp == 1);

    MonodromyPair two = MonodromyPair::make(Mat{{Rat(2)}});
    DiskQuad sh = j_shriek(two);
    CHECK(sh.can == Mat::identity(1));
    CHECK(sh.var == Mat{{Rat(1)}});
}

TEST_CASE("duality on pairs and quads") {
    CHECK(dual_pair(MonodromyPair::make(Mat{{Rat(2)}})).rho == Mat{{Rat(1, 2)}});

    for (int trial = 0; trial < 20; ++trial) {
        MonodromyPair p = rand_pair();
        // D is involutive on pairs up to conjugacy (here even on the nose)
        CHECK(dual_pair(dual_pair(p)).rho == p.rho);
        // D j_star = j_shriek D
        CHECK(quad_isomorphic(dual_quad(j_star(p)), j_shriek(dual_pair(p))));

        DiskQuad q = rand_quad(4);
        CHECK(quad_isomorphic(dual_quad(dual_quad(q)), q));
    }
}

TEST_CASE("hom spaces and the canonical morphism") {
    for (int trial = 0; trial < 20; ++trial) {
        DiskQuad q = rand_quad(4);
        if (q.dimV + q.dimVp == 0) continue;
        auto endo = hom_space(q, q);
        CHECK(endo.size() >= 1);  // contains the identity
        bool has_id = false;
        for (const auto& m : endo)
            (void)m;
        QuadMorphism idm{Mat::identity(q.dimV), Mat::identity(q.dimVp)};
        has_id = is_morphism(q, q, idm);
        CHECK(has_id);
    }

    for (int trial = 0; trial < 20; ++trial) {
        MonodromyPair p = rand_pair();
        QuadMorphism m = canonical_shriek_to_star(p);
        CHECK(is_morphism(j_shriek(p), j_star(p), m));
        // its image is the middle extension
        DiskQuad img = image_quad(j_shriek(p), j_star(p), m);
        DiskQuad mid = j_mid(p);
        CHECK(img.dimV == mid.dimV);
        CHECK(img.dimVp == mid.dimVp);
        CHECK(quad_isomorphic(img, mid));
    }
}

TEST_CASE("hom between coprime rank ones vanishes") {
    MonodromyPair p2 = MonodromyPair::make(Mat{{Rat(2)}});
    MonodromyPair p3 = MonodromyPair::make(Mat{{Rat(3)}});
    CHECK(hom_space(j_mid(p2), j_mid(p3)).empty());
    CHECK_FALSE(quad_isomorphic(j_mid(p2), j_mid(p3)));
}

TEST_CASE("phi of the middle extension is the monodromy modulo invariants") {
    for (int trial = 0; trial < 25; ++trial) {
        MonodromyPair p = rand_pair();
        MonodromyPair reduced = phi(j_mid(p));
        // compare with rho acting on V/ker(rho-id), realized on im(rho-id)
        Mat d = p.rho - Mat::identity(p.dim);
        ColFactor f = column_space_factor(d);
        Mat induced = solve_exact(f.basis, p.rho * f.basis);
        CHECK(reduced.dim == f.basis.cols);
        if (reduced.dim > 0) CHECK(conjugate(reduced.rho, induced));
    }
}

TEST_CASE("invertibility of id+cv matches id+vc") {
    for (int trial = 0; trial < 40; ++trial) {
        long nV = rand_int(0, 4), nVp = rand_int(0, 4);
        Mat can = rand_matrix(nVp, nV, 2);
        Mat var = rand_matrix(nV, nVp, 2);
        bool lhs = invertible(Mat::identity(nVp) + can * var);
        bool rhs = invertible(Mat::identity(nV) + var * can);
        CHECK(lhs == rhs);
    }
}
