#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dmod;
using namespace dmod::testing;

TEST_CASE("rref, rank, kernel") {
    Mat m{{Rat(1), Rat(2), Rat(3)}, {Rat(2), Rat(4), Rat(6)}, {Rat(0), Rat(1), Rat(1)}};
    CHECK(rank(m) == 2);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    // the kernel vector satisfies m v = 0
    for (long i = 0; i < m.rows; ++i) {
        Rat acc(0);
        for (long j = 0; j < m.cols; ++j) acc += m(i, j) * ker[0][j];
        CHECK(acc == 0);
    }
}

TEST_CASE("inverse round trip") {
    for (int trial = 0; trial < 10; ++trial) {
        Mat m = rand_invertible(rand_int(1, 5));
        CHECK(m * inverse(m) == Mat::identity(m.rows));
    }
}

TEST_CASE("column space factor reconstructs the matrix") {
    for (int trial = 0; trial < 10; ++trial) {
        Mat m = rand_matrix(rand_int(1, 5), rand_int(1, 5), 2);
        ColFactor f = column_space_factor(m);
        CHECK(f.basis * f.coords == m);
        CHECK(f.basis.cols == rank(m));
    }
}

TEST_CASE("invariant factors detect conjugacy") {
    Mat a{{Rat(1), Rat(1)}, {Rat(0), Rat(1)}};
    Mat b{{Rat(1), Rat(5)}, {Rat(0), Rat(1)}};
    Mat c = Mat::identity(2);
    CHECK(conjugate(a, b));
    CHECK_FALSE(conjugate(a, c));

    for (int trial = 0; trial < 8; ++trial) {
        Mat m = rand_matrix(rand_int(1, 4), 0, 0);
        long n = rand_int(1, 4);
        m = rand_matrix(n, n, 2);
        Mat p = rand_invertible(n, 2);
        CHECK(conjugate(m, inverse(p) * m * p));
    }
}

TEST_CASE("nilpotent block sizes from rank sequence") {
    Mat n(3, 3);
    n(0, 1) = 1;
    n(1, 2) = 1;
    CHECK(nilpotent_block_sizes(n) == std::vector<long>{3});

    Mat two(3, 3);
    two(0, 1) = 1;
    CHECK(nilpotent_block_sizes(two) == std::vector<long>{2, 1});
}

TEST_CASE("polynomial gcd and division") {
    QPoly x = QPoly::x();
    QPoly p = (x - QPoly(Rat(1))) * (x - QPoly(Rat(2)));
    QPoly q = (x - QPoly(Rat(1))) * (x - QPoly(Rat(3)));
    CHECK(poly_gcd(p, q) == x - QPoly(Rat(1)));
    auto [quot, rem] = divmod(p, x - QPoly(Rat(1)));
    CHECK(rem.zero());
    CHECK(quot == x - QPoly(Rat(2)));
}
