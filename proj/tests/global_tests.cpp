#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dmod;
using namespace dmod::testing;

namespace {
ElementaryModule kummer(const Rat& alpha, long unip = 1) {
    return ElementaryModule{1, series_zero(), alpha, unip};
}

ElementaryModule exp_module(std::initializer_list<std::pair<Rat, Rat>> terms,
                            const Rat& residue = Rat(0)) {
    Series f;
    for (const auto& [e, c] : terms) f.c[e] = c;
    return ElementaryModule{1, normalized(std::move(f)), residue, 1};
}

FormalType kummer_type(const Rat& alpha) {
    FormalType ft;
    ft.rank = 1;
    ft.points.push_back(make_point("0", 1, FormalModule{{kummer(alpha)}}));
    ft.points.push_back(make_point("infty", 1, FormalModule{{kummer(-alpha)}}));
    return ft;
}

// regular rank-n type with generic residues at the given rational points,
// residue sum adjusted to be integral (so the type is realizable)
FormalType generic_regular_type(long n, const std::vector<std::string>& labels) {
    FormalType ft;
    ft.rank = n;
    Rat total(0);
    for (size_t i = 0; i < labels.size(); ++i) {
        FormalModule psi;
        for (long j = 0; j < n; ++j) {
            Rat res = i + 1 == labels.size() && j == n - 1
                          ? -total
                          : Rat(rand_int(1, 30), 31) + Rat(rand_int(0, 2));
            total += res;
            psi.comps.push_back(kummer(res));
        }
        ft.points.push_back(make_point(labels[i], 1, psi));
    }
    return ft;
}
}  // namespace

TEST_CASE("Euler characteristic worked examples") {
    FormalType smooth;
    smooth.rank = 1;
    CHECK(euler_char(smooth) == 2);

    CHECK(euler_char(kummer_type(Rat(1, 3))) == 0);

    FormalType genus1;
    genus1.genus = 1;
    genus1.rank = 1;
    CHECK(euler_char(genus1) == 0);
}

TEST_CASE("Euler characteristic is additive over direct sums") {
    for (int trial = 0; trial < 10; ++trial) {
        FormalModule a = rand_module(2), b = rand_module(2);
        FormalType fa, fb, fab;
        fa.rank = rank(a);
        fb.rank = rank(b);
        fab.rank = fa.rank + fb.rank;
        FormalModule sum = a;
        for (auto& c : b.comps) sum.comps.push_back(c);
        fa.points.push_back(make_point("0", 1, a));
        fb.points.push_back(make_point("0", 1, b));
        fab.points.push_back(make_point("0", 1, sum));
        CHECK(euler_char(fab) - fab.rank * 2 ==
              (euler_char(fa) - fa.rank * 2) + (euler_char(fb) - fb.rank * 2));
    }
}

TEST_CASE("rigidity: rank one, hypergeometric, four points") {
    // any rank-1 type built from exponential parts alone is rigid
    FormalType r1;
    r1.rank = 1;
    r1.points.push_back(make_point("0", 1, FormalModule{{exp_module({{Rat(-2), Rat(3)}})}}));
    r1.points.push_back(make_point("infty", 1, FormalModule{{kummer(Rat(1, 2))}}));
    CHECK(rigidity_index(r1) == 2);

    // rank-2 with three generic regular points: the hypergeometric count
    FormalType hyp;
    hyp.rank = 2;
    int which = 0;
    for (const char* label : {"0", "1", "infty"}) {
        Rat a(1 + which, 7), b(5 + which, 11);
        hyp.points.push_back(make_point(label, 1, FormalModule{{kummer(a), kummer(b)}}));
        ++which;
    }
    CHECK(rigidity_index(hyp) == 2);

    FormalType four = hyp;
    four.points.push_back(make_point("2", 1,
                                     FormalModule{{kummer(Rat(3, 13)), kummer(Rat(7, 13))}}));
    CHECK(rigidity_index(four) == 0);
}

TEST_CASE("rigidity index is even on random types") {
    for (int trial = 0; trial < 40; ++trial) {
        FormalType ft;
        ft.rank = rand_int(1, 3);
        long pts = rand_int(1, 3);
        for (long i = 0; i < pts; ++i) {
            FormalModule psi;
            long left = ft.rank;
            while (left > 0) {
                long u = rand_int(1, left);
                long kind = rand_int(0, 2);
                ElementaryModule e = kummer(kind == 0 ? Rat(0) : Rat(rand_int(1, 12), 13), u);
                if (kind == 2) e.f = normalized([&] {
                        Series f;
                        f.c[Rat(-rand_int(2, 3))] = Rat(rand_int(1, 3));
                        return f;
                    }());
                psi.comps.push_back(e);
                left -= u;
            }
            ft.points.push_back(make_point(std::to_string(i), 1, psi));
        }
        long rig = rigidity_index(ft);
        CHECK(rig % 2 == 0);
    }
}

TEST_CASE("Fourier rank worked examples") {
    CHECK(fourier_rank(kummer_type(Rat(1, 3))) == 1);

    // e^{1/z} type: irregular at 0, trivial at infinity
    FormalType exp_type;
    exp_type.rank = 1;
    exp_type.points.push_back(make_point("0", 1, FormalModule{{exp_module({{Rat(-2), Rat(-1)}})}}));
    exp_type.points.push_back(make_point("infty", 1, FormalModule{{kummer(Rat(0))}}));
    CHECK(fourier_rank(exp_type) == 2);

    // Gaussian: smooth on the affine line, slope 2 at infinity
    FormalType gauss;
    gauss.rank = 1;
    gauss.points.push_back(make_point("infty", 1, FormalModule{{exp_module({{Rat(-3), Rat(1)}})}}));
    CHECK(fourier_rank(gauss) == 1);
}

TEST_CASE("Radon rank worked examples") {
    CHECK(radon_rank(kummer_type(Rat(1, 4))) == 1);

    // rank 2 with vanishing-cycle ranks (1,1,2): 4 - 2 = 2
    FormalType ft;
    ft.rank = 2;
    ft.points.push_back(make_point("0", 1, FormalModule{{kummer(Rat(1, 3)), kummer(Rat(0))}}));
    ft.points.push_back(make_point("1", 1, FormalModule{{kummer(Rat(1, 5)), kummer(Rat(0))}}));
    ft.points.push_back(
        make_point("infty", 1, FormalModule{{kummer(Rat(1, 7)), kummer(Rat(2, 7))}}));
    CHECK(radon_rank(ft) == 2);

    FormalType empty;
    empty.rank = 1;
    CHECK_THROWS_AS(radon_rank(empty), domain_error);
}

TEST_CASE("Fourier transform of the Kummer type") {
    FormalType ft = kummer_type(Rat(1, 3));
    TransformedType out = fourier_formal_type(ft);
    REQUIRE(out.exact);
    CHECK(out.rank_out == 1);
    const TransformedPoint* p0 = nullptr;
    const TransformedPoint* pinf = nullptr;
    for (const auto& p : out.points) {
        if (p.label == "0") p0 = &p;
        if (p.label == "infty") pinf = &p;
    }
    REQUIRE(p0);
    REQUIRE(pinf);
    CHECK(is_isomorphic(p0->module, FormalModule{{kummer(Rat(-1, 3))}}));
    CHECK(is_isomorphic(pinf->module, FormalModule{{kummer(Rat(1, 3))}}));
}

TEST_CASE("Fourier transform of a two-point regular type") {
    // rank 1 singular at 1 and 2, generic residues: output has rank 2,
    // one finite singular point (z = 0) and two class labels at infinity
    FormalType ft;
    ft.rank = 1;
    ft.points.push_back(make_point("1", 1, FormalModule{{kummer(Rat(1, 5))}}));
    ft.points.push_back(make_point("2", 1, FormalModule{{kummer(Rat(2, 7))}}));
    ft.points.push_back(make_point("infty", 1, FormalModule{{kummer(-Rat(1, 5) - Rat(2, 7))}}));
    TransformedType out = fourier_formal_type(ft);
    REQUIRE(out.exact);
    CHECK(out.rank_out == 2);
    for (const auto& p : out.points) {
        if (p.label != "infty") continue;
        InfinityDecomposition dec = infinity_decompose(p.module);
        CHECK(dec.classes.count(Rat(1)) == 1);
        CHECK(dec.classes.count(Rat(2)) == 1);
        CHECK(rank(dec.over1) == 0);
    }
}

TEST_CASE("irregular input demotes Fourier to bookkeeping") {
    FormalType ft;
    ft.rank = 1;
    ft.points.push_back(make_point("0", 1, FormalModule{{exp_module({{Rat(-2), Rat(-1)}})}}));
    TransformedType out = fourier_formal_type(ft);
    CHECK_FALSE(out.exact);
    CHECK(out.rank_out == 2);
    bool found_inf = false;
    for (const auto& p : out.points)
        if (p.label == "infty") {
            found_inf = true;
            CHECK(p.book.rank_out == 2);
        }
    CHECK(found_inf);
}

TEST_CASE("Radon transform of formal types") {
    FormalType ft = kummer_type(Rat(1, 5));
    Rat lambda(1, 3);
    TransformedType out = radon_formal_type(ft, lambda);
    REQUIRE(out.exact);
    CHECK(out.rank_out == 1);
    for (const auto& p : out.points) {
        if (p.label == "0")
            CHECK(is_isomorphic(p.module, FormalModule{{kummer(Rat(1, 5) + lambda)}}));
        if (p.label == "infty")
            CHECK(is_isomorphic(p.module, FormalModule{{kummer(-Rat(1, 5) + lambda)}}));
    }

    // double application is the identity
    FormalType back_ft = to_formal_type(radon_formal_type(to_formal_type(out), -lambda));
    REQUIRE(back_ft.points.size() == ft.points.size());
    CHECK(back_ft.rank == ft.rank);
    for (const auto& p : back_ft.points)
        for (const auto& q : ft.points)
            if (p.label == q.label) CHECK(is_isomorphic(p.psi, q.psi));
}

TEST_CASE("rigidity is preserved by the transforms") {
    for (int trial = 0; trial < 6; ++trial) {
        FormalType ft = generic_regular_type(2, {"0", "1", "infty"});
        long rig = rigidity_index(ft);

        for (const Rat& lambda : {Rat(1, 3), Rat(1, 2)}) {
            TransformedType rad = radon_formal_type(ft, lambda);
            CHECK(rigidity_index(to_formal_type(rad)) == rig);
        }

        TransformedType four = fourier_formal_type(ft);
        REQUIRE(four.exact);
        CHECK(rigidity_index(to_formal_type(four)) == rig);
    }
}

TEST_CASE("rank formulas agree with assembled outputs") {
    for (int trial = 0; trial < 8; ++trial) {
        FormalType ft = generic_regular_type(rand_int(1, 2), {"0", "3", "infty"});
        TransformedType four = fourier_formal_type(ft);
        if (four.exact)
            for (const auto& p : four.points) CHECK(rank(p.module) == four.rank_out);
        TransformedType rad = radon_formal_type(ft, Rat(2, 5));
        for (const auto& p : rad.points) CHECK(rank(p.module) == rad.rank_out);
    }
}
