#include <doctest.h>

#include <random>

#include "ikc/f2.hpp"
#include "ikc/upoly.hpp"

using namespace ikc;

namespace {

// brute force over all 2^n vectors
bool brute_solvable(const F2Matrix& a, const bitvec& b) {
    for (int mask = 0; mask < (1 << a.cols); ++mask) {
        bitvec x(a.cols);
        for (int j = 0; j < a.cols; ++j) x[j] = (mask >> j) & 1;
        if (mul_vec(a, x) == b) return true;
    }
    return false;
}

F2Matrix random_f2(std::mt19937& rng, int r, int c, double p) {
    std::bernoulli_distribution coin(p);
    F2Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (coin(rng)) m.r[i].push_back(j);
    return m;
}

UPoly upoly_det(std::vector<std::vector<UPoly>> a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return UPoly::one();
    if (n == 1) return a[0][0];
    UPoly s;
    for (int j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        std::vector<std::vector<UPoly>> minor;
        for (int i = 1; i < n; ++i) {
            std::vector<UPoly> row;
            for (int k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(row);
        }
        s += a[0][j] * upoly_det(minor);
    }
    return s;
}

UPoly U(int k) { return UPoly::monomial(k); }

}  // namespace

TEST_CASE("solve_f2 examples") {
    auto x = solve_f2(F2Matrix::identity(3), {1, 0, 1});
    REQUIRE(x);
    CHECK(*x == bitvec{1, 0, 1});
    CHECK_FALSE(solve_f2(F2Matrix::from_dense({{1, 1}, {1, 1}}), {1, 0}));
    auto y = solve_f2(F2Matrix::from_dense({{1, 1}, {0, 1}}), {0, 1});
    REQUIRE(y);
    CHECK(*y == bitvec{1, 1});
}

TEST_CASE("solve_f2 agrees with brute force") {
    std::mt19937 rng(11);
    for (int it = 0; it < 300; ++it) {
        int r = 1 + rng() % 8, c = 1 + rng() % 8;
        F2Matrix a = random_f2(rng, r, c, 0.4);
        bitvec b(r);
        for (auto& v : b) v = rng() & 1;
        auto x = solve_f2(a, b);
        CHECK(x.has_value() == brute_solvable(a, b));
        if (x) CHECK(mul_vec(a, *x) == b);
        auto ns = nullspace_f2(a);
        CHECK(static_cast<int>(ns.size()) == c - rank_f2(a));
        for (const auto& v : ns) CHECK(mul_vec(a, v) == bitvec(r, 0));
    }
}

TEST_CASE("inverse_f2") {
    std::mt19937 rng(5);
    for (int it = 0; it < 100; ++it) {
        int n = 1 + rng() % 9;
        F2Matrix a = random_f2(rng, n, n, 0.5);
        auto inv = inverse_f2(a);
        CHECK(inv.has_value() == (rank_f2(a) == n));
        if (inv) CHECK(a * *inv == F2Matrix::identity(n));
    }
}

TEST_CASE("F2Matrix product matches dense") {
    std::mt19937 rng(3);
    for (int it = 0; it < 50; ++it) {
        F2Matrix a = random_f2(rng, 6, 7, 0.4), b = random_f2(rng, 7, 5, 0.4);
        F2Matrix c = a * b;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 5; ++j) {
                int s = 0;
                for (int k = 0; k < 7; ++k) s ^= a.get(i, k) & b.get(k, j);
                CHECK(c.get(i, j) == (s != 0));
            }
    }
}

TEST_CASE("UPoly arithmetic") {
    UPoly p = U(3) + U(1) + U(0);
    UPoly q = U(1) + U(0);
    auto [quo, rem] = (p * q).divmod(q);
    CHECK(quo == p);
    CHECK(rem.is_zero());
    CHECK((U(70) * U(70)).degree() == 140);
    CHECK((q * q) == U(2) + U(0));
    CHECK(U(2).divides(U(5)));
    CHECK_FALSE(U(5).divides(U(2)));
}

TEST_CASE("snf_over_U examples") {
    auto d1 = snf_over_U(UMatrix::from_dense({{U(2)}})).diag;
    CHECK(d1 == std::vector<UPoly>{U(2)});
    auto r2 = snf_over_U(UMatrix::from_dense({{U(1), U(1)}, {UPoly(), U(1)}}));
    CHECK(r2.diag == std::vector<UPoly>{U(1), U(1)});
    auto r3 = snf_over_U(UMatrix(2, 2));
    CHECK(r3.diag == std::vector<UPoly>{UPoly(), UPoly()});
}

TEST_CASE("snf transforms are unimodular and diagonalize") {
    std::mt19937 rng(7);
    for (int it = 0; it < 60; ++it) {
        int r = 1 + rng() % 4, c = 1 + rng() % 4;
        UMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (rng() % 3) {
                    UPoly p;
                    for (int k = 0; k < 4; ++k)
                        if (rng() & 1) p.toggle(k);
                    m.set(i, j, p);
                }
        auto res = snf_over_U(m);
        UMatrix dm = dense_product(dense_product(res.left, m), res.right);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) CHECK(dm.get(i, j) == (i == j ? res.diag[i] : UPoly()));
        CHECK(upoly_det(res.left.dense()) == UPoly::one());
        CHECK(upoly_det(res.right.dense()) == UPoly::one());
        for (std::size_t i = 0; i + 1 < res.diag.size(); ++i) CHECK(res.diag[i].divides(res.diag[i + 1]));
    }
}

TEST_CASE("compose_sparse") {
    CHECK(compose_sparse(UMatrix::from_dense({{U(1)}}), UMatrix::from_dense({{U(2)}})).get(0, 0) == U(3));
    UMatrix g = UMatrix::from_dense({{U(1), U(0)}, {UPoly(), U(4)}});
    CHECK(compose_sparse(UMatrix::identity(2), g) == g);
    auto z = compose_sparse(UMatrix::from_dense({{U(0), U(0)}}), UMatrix::from_dense({{U(0)}, {U(0)}}));
    CHECK(z.get(0, 0).is_zero());
    std::mt19937 rng(9);
    for (int it = 0; it < 30; ++it) {
        UMatrix a(8, 8), b(8, 8);
        for (auto* m : {&a, &b})
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    if (rng() % 2) m->set(i, j, U(rng() % 5) + U(rng() % 3));
        CHECK(compose_sparse(a, b) == dense_product(a, b));
    }
}
