#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dmod;
using namespace dmod::testing;

namespace {
ElementaryModule kummer(const Rat& alpha, long unip = 1) {
    return ElementaryModule{1, series_zero(), alpha, unip};
}

ElementaryModule exp_module(std::initializer_list<std::pair<Rat, Rat>> terms, long ram = 1,
                            const Rat& residue = Rat(0), long unip = 1) {
    Series f;
    f.ram = ram;
    for (const auto& [e, c] : terms) f.c[e] = c;
    return ElementaryModule{ram, normalized(std::move(f)), residue, unip};
}
}  // namespace

TEST_CASE("regular local Fourier: Kummer rule") {
    CHECK(is_isomorphic(fourier_local_regular(FormalModule{{kummer(Rat(1, 2))}}, Rat(0)),
                        FormalModule{{kummer(Rat(3, 2))}}));
    CHECK(is_isomorphic(fourier_local_regular(FormalModule{{kummer(Rat(0))}}, Rat(0)),
                        FormalModule{{kummer(Rat(1))}}));
    // at x = 2 the output acquires the class-(2) twist
    FormalModule out = fourier_local_regular(FormalModule{{kummer(Rat(1, 3))}}, Rat(2));
    REQUIRE(out.comps.size() == 1);
    CHECK(out.comps[0].f.at(Rat(-2)) == Rat(2));
    CHECK(out.comps[0].residue == Rat(1, 3));  // 4/3 reduced mod Z
    CHECK_THROWS_AS(fourier_local_regular(FormalModule{{exp_module({{Rat(-2), Rat(1)}})}}, Rat(0)),
                    domain_error);
}

TEST_CASE("Fourier bookkeeping across the three flavors") {
    FormalModule e{{exp_module({{Rat(-2), Rat(1)}})}};
    TransformBookkeeping b = fourier_bookkeeping(e, FourierFlavor::x_to_inf, Rat(0));
    CHECK(b.rank_out == 2);
    CHECK(b.slopes_out == std::vector<std::pair<Rat, long>>{{Rat(1, 2), 2}});
    CHECK(b.irr_out == 1);

    FormalModule steep{{exp_module({{Rat(-3), Rat(1)}})}};  // slope 2 at infinity
    TransformBookkeeping binf = fourier_bookkeeping(steep, FourierFlavor::inf_to_inf);
    CHECK(binf.rank_out == 1);
    CHECK(binf.slopes_out == std::vector<std::pair<Rat, long>>{{Rat(2), 1}});

    FormalModule reg{{kummer(Rat(1, 3))}};
    TransformBookkeeping breg = fourier_bookkeeping(reg, FourierFlavor::x_to_inf, Rat(0));
    CHECK(breg.rank_out == 1);
    CHECK(breg.slopes_out == std::vector<std::pair<Rat, long>>{{Rat(0), 1}});

    CHECK_THROWS_AS(fourier_bookkeeping(reg, FourierFlavor::inf_to_inf), domain_error);
}

TEST_CASE("Fourier bookkeeping round trip") {
    for (int trial = 0; trial < 15; ++trial) {
        FormalModule m = rand_module();
        Rat x = rand_rat(3, 2);
        TransformBookkeeping fwd = fourier_bookkeeping(m, FourierFlavor::x_to_inf, x);
        // reconstruct a module carrying the untwisted output data to feed the
        // inverse direction: slopes fwd marked at class x
        FormalModule carrier;
        for (const auto& [s, mult] : fwd.slopes_out) {
            // represent slope s with denominator q as a ramified component
            long q = static_cast<long>(rat_den(s));
            long copies = mult / q;
            REQUIRE(mult % q == 0);
            for (long i = 0; i < copies; ++i) {
                if (s == 0)
                    carrier.comps.push_back(kummer(Rat(1, 5)));
                else
                    carrier.comps.push_back(
                        exp_module({{-s - 1, Rat(1)}}, q, Rat(0), 1));
            }
        }
        carrier = detail::untwist_class(carrier, -x);  // twist INTO class x
        TransformBookkeeping back = fourier_bookkeeping(carrier, FourierFlavor::inf_to_x, x);
        CHECK(back.rank_out == rank(m));
        CHECK(back.irr_out == irregularity(m));
        CHECK(back.slopes_out == slope_multiset(m));
    }
}

TEST_CASE("slopes of the (x,infty) image always land below one") {
    for (int trial = 0; trial < 15; ++trial) {
        FormalModule m = rand_module();
        TransformBookkeeping b = fourier_bookkeeping(m, FourierFlavor::x_to_inf, Rat(0));
        for (const auto& [s, mult] : b.slopes_out) {
            CHECK(s >= 0);
            CHECK(s < 1);
            (void)mult;
        }
    }
}

TEST_CASE("infinity decomposition") {
    FormalModule m{{kummer(Rat(1, 3)),
                    exp_module({{Rat(-2), Rat(3)}, {Rat(-3, 2), Rat(1)}}, 2),
                    exp_module({{Rat(-3), Rat(1)}})}};
    InfinityDecomposition dec = infinity_decompose(m);
    CHECK(rank(dec.over1) == 1);  // the slope-2 part
    REQUIRE(dec.classes.count(Rat(0)) == 1);
    REQUIRE(dec.classes.count(Rat(3)) == 1);
    CHECK(rank(dec.classes[Rat(0)]) == 1);
    CHECK(rank(dec.classes[Rat(3)]) == 2);

    long total = rank(dec.over1);
    for (const auto& [cls, part] : dec.classes) {
        total += rank(part);
        (void)cls;
    }
    CHECK(total == rank(m));
}

TEST_CASE("local Katz-Radon on worked examples") {
    CHECK(is_isomorphic(radon_local(FormalModule{{kummer(Rat(1, 5))}}, Rat(1, 3)),
                        FormalModule{{kummer(Rat(1, 5) + Rat(1, 3))}}));

    // slope 1: residue shift lambda(1+1)
    FormalModule e{{exp_module({{Rat(-2), Rat(1)}})}};
    FormalModule out = radon_local(e, Rat(1, 3));
    REQUIRE(out.comps.size() == 1);
    CHECK(out.comps[0].residue == Rat(2, 3));

    // ramified slope 1/2: shift lambda(3/2) = 1/2, killed by the mod-(1/2)
    // reduction, so the module is fixed
    FormalModule half{{exp_module({{Rat(-3, 2), Rat(1)}}, 2)}};
    CHECK(is_isomorphic(radon_local(half, Rat(1, 3)), half));

    CHECK_THROWS_AS(radon_local(e, Rat(1)), domain_error);
}

TEST_CASE("Radon inverse pair and invariants") {
    for (int trial = 0; trial < 20; ++trial) {
        FormalModule m = rand_module();
        Rat lambda = rand_nonint_rat();
        FormalModule once = radon_local(m, lambda);
        CHECK(is_isomorphic(radon_local(once, -lambda), m));
        CHECK(rank(once) == rank(m));
        CHECK(slope_multiset(once) == slope_multiset(m));
        CHECK(irregularity(once) == irregularity(m));
    }
}

TEST_CASE("Radon oracle cross-check") {
    Series f1;
    f1.c[Rat(-2)] = Rat(-1);
    CrosscheckReport r1 = radon_local_crosscheck(normalized(std::move(f1)), Rat(0), Rat(1, 3), 24);
    CHECK(r1.agree);

    Series f2;
    f2.c[Rat(-3)] = Rat(1);
    CrosscheckReport r2 = radon_local_crosscheck(normalized(std::move(f2)), Rat(0), Rat(1, 2), 24);
    CHECK(r2.agree);

    Series f3;
    f3.c[Rat(-2)] = Rat(-1);
    CHECK_THROWS_AS(radon_local_crosscheck(normalized(std::move(f3)), Rat(0), Rat(1), 24),
                    domain_error);
}

TEST_CASE("oracle agrees with the symbolic bookkeeping") {
    ElementaryModule e = exp_module({{Rat(-2), Rat(-1)}});
    OracleReport rep = local_fourier_invariants(e.f, e.residue, 30);
    CHECK(fourier_oracle_agrees(e, rep));
}
