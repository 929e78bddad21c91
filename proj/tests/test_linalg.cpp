#include <gtest/gtest.h>

#include "flagrank/linalg.hpp"
#include "flagrank/rng.hpp"
#include "flagrank/scalars.hpp"
#include "oracles.hpp"

using namespace flagrank;

namespace {

const std::uint64_t kP = kDefaultPrime;

Matrix<std::uint64_t> random_mat(const PrimeField& f, Rng& rng, std::size_t r, std::size_t c) {
    Matrix<std::uint64_t> m(r, c, 0);
    for (auto& x : m.a) x = f.random(rng);
    return m;
}

Matrix<std::uint64_t> matmul(const PrimeField& f, const Matrix<std::uint64_t>& a,
                             const Matrix<std::uint64_t>& b) {
    Matrix<std::uint64_t> c(a.rows, b.cols, 0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k)
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) = f.add(c.at(i, j), f.mul(a.at(i, k), b.at(k, j)));
    return c;
}

oracle::ModMat to_modmat(const PrimeField& f, const Matrix<std::uint64_t>& m) {
    return oracle::ModMat{f.modulus(), m.rows, m.cols, m.a};
}

} // namespace

// ===== rank =====

TEST(Rank, KnownRanksOverPrimeField) {
    PrimeField f(kP);
    Matrix<std::uint64_t> id(4, 4, 0);
    for (int i = 0; i < 4; ++i) id.at(i, i) = 1;
    EXPECT_EQ(rank(f, id), 4u);

    // rank-2 product of random 5x2 and 2x7
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = matmul(f, random_mat(f, rng, 5, 2), random_mat(f, rng, 2, 7));
        EXPECT_EQ(rank(f, m), 2u);
        EXPECT_EQ(rank(f, m), oracle::mod_rank(to_modmat(f, m)));
    }
    Matrix<std::uint64_t> zero(3, 5, 0);
    EXPECT_EQ(rank(f, zero), 0u);
}

TEST(Rank, RationalBareissAgreesWithPrimeField) {
    PrimeField f(kP);
    RationalField q;
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t r = 4 + rng.below(3), c = 4 + rng.below(4);
        Matrix<BigRat> mq(r, c, BigRat(0));
        Matrix<std::uint64_t> mp(r, c, 0);
        for (std::size_t i = 0; i < r * c; ++i) {
            long long num = static_cast<long long>(rng.below(19)) - 9;
            long long den = 1 + static_cast<long long>(rng.below(7));
            mq.a[i] = BigRat(num, den);
            mp.a[i] = f.mul(f.from_int(num), f.inv(f.from_int(den)));
        }
        EXPECT_EQ(rank(q, mq), rank(f, mp));
    }
}

TEST(Rank, BareissHandlesDependentRows) {
    Matrix<BigInt> m(3, 3, BigInt(0));
    // row3 = row1 + row2
    long long vals[2][3] = {{2, 3, 5}, {7, 11, 13}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = vals[i][j];
    for (int j = 0; j < 3; ++j) m.at(2, j) = vals[0][j] + vals[1][j];
    EXPECT_EQ(rank_bareiss(m), 2u);
}

// ===== rref / subspace bases =====

TEST(Rref, CanonicalFormProperties) {
    PrimeField f(kP);
    Rng rng(3);
    auto m = matmul(f, random_mat(f, rng, 6, 4), random_mat(f, rng, 4, 9));
    auto e = rref(f, m);
    EXPECT_EQ(e.m.rows, 4u);
    ASSERT_EQ(e.pivots.size(), 4u);
    for (std::size_t i = 0; i + 1 < e.pivots.size(); ++i) EXPECT_LT(e.pivots[i], e.pivots[i + 1]);
    for (std::size_t i = 0; i < e.m.rows; ++i)
        for (std::size_t k = 0; k < e.pivots.size(); ++k)
            EXPECT_EQ(e.m.at(i, e.pivots[k]), i == k ? 1u : 0u);
    // idempotent: rref of the rref is itself
    auto e2 = rref(f, e.m);
    EXPECT_EQ(e2.m.a, e.m.a);
}

TEST(Subspace, ContainmentAndJoin) {
    PrimeField f(kP);
    Rng rng(4);
    auto rows = random_mat(f, rng, 3, 8);
    auto b = subspace_from_rows(f, rows);
    EXPECT_EQ(b.rank(), 3u);
    // random combinations of the rows lie in the span
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::uint64_t> v(8, 0);
        for (std::size_t i = 0; i < 3; ++i) {
            std::uint64_t c = f.random(rng);
            for (std::size_t j = 0; j < 8; ++j)
                v[j] = f.add(v[j], f.mul(c, rows.at(i, j)));
        }
        EXPECT_TRUE(contains(f, b, v));
    }
    std::vector<std::uint64_t> outside(8, 0);
    outside[7] = 1;
    // a random vector is outside a 3-dim subspace of F^8 whp
    EXPECT_FALSE(contains(f, b, random_mat(f, rng, 1, 8).row(0)));
    auto j = join(f, b, subspace_from_rows(f, random_mat(f, rng, 2, 8)));
    EXPECT_EQ(j.rank(), 5u);
    EXPECT_TRUE(contains(f, j, b));
}

TEST(Subspace, IntersectDimThreeRoutesAgree) {
    PrimeField f(kP);
    Rng rng(5);
    // sanity: two random 4-dim subspaces of F^6 meet in dim 2 whp
    for (int trial = 0; trial < 8; ++trial) {
        auto A = subspace_from_rows(f, random_mat(f, rng, 4, 6));
        auto B = subspace_from_rows(f, random_mat(f, rng, 4, 6));
        std::size_t d = intersect_dim(f, A, B);
        EXPECT_EQ(d, 2u);
        EXPECT_EQ(intersection(f, A, B).rank(), d);
        EXPECT_EQ(oracle::mod_intersection_dim(to_modmat(f, A.basis), to_modmat(f, B.basis)), d);
    }
    // nested subspaces intersect in the smaller one
    auto big = subspace_from_rows(f, random_mat(f, rng, 5, 9));
    Matrix<std::uint64_t> two(2, 9, 0);
    for (std::size_t j = 0; j < 9; ++j) {
        two.at(0, j) = big.basis.at(0, j);
        two.at(1, j) = f.add(big.basis.at(1, j), big.basis.at(2, j));
    }
    auto small = subspace_from_rows(f, two);
    EXPECT_EQ(intersect_dim(f, big, small), 2u);
    auto inter = intersection(f, big, small);
    EXPECT_TRUE(contains(f, small, inter));
    EXPECT_TRUE(contains(f, inter, small));
}

TEST(Subspace, CoordinateIntersection) {
    PrimeField f(kP);
    Rng rng(6);
    auto A = subspace_from_rows(f, random_mat(f, rng, 5, 8));
    std::vector<std::uint64_t> support{0, 1, 2, 3, 4, 5};
    auto direct = intersect_coordinate(f, A, support);
    // cross-check against Zassenhaus with the explicit coordinate basis
    Matrix<std::uint64_t> coord(support.size(), 8, 0);
    for (std::size_t i = 0; i < support.size(); ++i)
        coord.at(i, static_cast<std::size_t>(support[i])) = 1;
    auto viaZ = intersection(f, A, subspace_from_rows(f, coord));
    EXPECT_EQ(direct.rank(), viaZ.rank());
    EXPECT_TRUE(contains(f, direct, viaZ));
    EXPECT_TRUE(contains(f, viaZ, direct));
    // members really vanish off the support
    for (std::size_t i = 0; i < direct.rank(); ++i)
        for (std::size_t j = 6; j < 8; ++j) EXPECT_EQ(direct.basis.at(i, j), 0u);
}

// ===== kernels =====

TEST(Kernel, RankNullity) {
    PrimeField f(kP);
    Rng rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t r = 3 + rng.below(3), c = 5 + rng.below(3);
        auto m = random_mat(f, rng, r, c);
        auto K = kernel(f, m);
        EXPECT_EQ(K.rows, c - rank(f, m));
        // every kernel row maps to zero
        for (std::size_t i = 0; i < K.rows; ++i)
            for (std::size_t row = 0; row < m.rows; ++row) {
                std::uint64_t dot = 0;
                for (std::size_t j = 0; j < c; ++j)
                    dot = f.add(dot, f.mul(m.at(row, j), K.at(i, j)));
                EXPECT_EQ(dot, 0u);
            }
    }
}

// ===== division-free determinants =====

TEST(Det, MatchesPermutationExpansion) {
    PrimeField f(kP);
    Rng rng(8);
    for (std::size_t n = 0; n <= 5; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            auto m = random_mat(f, rng, n, n);
            std::uint64_t want = oracle::leibniz_det<std::uint64_t>(
                n, m.a, 0, 1, [&](std::uint64_t a, std::uint64_t b) { return f.mul(a, b); },
                [&](std::uint64_t a, std::uint64_t b) { return f.add(a, b); },
                [&](std::uint64_t a, std::uint64_t b) { return f.sub(a, b); });
            EXPECT_EQ(det_ring(f, m), want);
        }
    }
    // det of a singular matrix vanishes
    Matrix<std::uint64_t> s(3, 3, 0);
    auto row = random_mat(f, rng, 1, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.at(i, j) = f.mul(f.from_int(i + 1), row.at(0, j));
    EXPECT_EQ(det_ring(f, s), 0u);
}

TEST(Det, WorksOverRationals) {
    RationalField q;
    Matrix<BigRat> m(2, 2, BigRat(0));
    m.at(0, 0) = BigRat(1, 2);
    m.at(0, 1) = BigRat(1, 3);
    m.at(1, 0) = BigRat(1, 5);
    m.at(1, 1) = BigRat(1, 7);
    EXPECT_EQ(det_ring(q, m), BigRat(1, 14) - BigRat(1, 15));
}

// ===== jets =====

TEST(Jet, SquareAndDeterminantExamples) {
    RationalField q;
    // f(x) = x^2 at x=3 -> value 9, derivative 6
    auto [v1, d1] = jet_eval(q, [](const JetRing<RationalField>& jr, const auto& pt) {
        return jr.mul(pt[0], pt[0]);
    }, {BigRat(3)}, 0);
    EXPECT_EQ(v1, BigRat(9));
    EXPECT_EQ(d1, BigRat(6));
    // det [[x,1],[2,x]] = x^2-2 at x=5 -> (23, 10)
    auto [v2, d2] = jet_eval(q, [](const JetRing<RationalField>& jr, const auto& pt) {
        Matrix<Jet<RationalField>> m(2, 2, jr.zero());
        m.at(0, 0) = pt[0];
        m.at(0, 1) = jr.one();
        m.at(1, 0) = jr.constant(BigRat(2));
        m.at(1, 1) = pt[0];
        return det_ring(jr, m);
    }, {BigRat(5)}, 0);
    EXPECT_EQ(v2, BigRat(23));
    EXPECT_EQ(d2, BigRat(10));
}

TEST(Jet, DetPartialIsCofactor) {
    PrimeField f(kP);
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        auto base = random_mat(f, rng, 4, 4);
        std::size_t vi = rng.below(4), vj = rng.below(4);
        JetRing<PrimeField> jr(f, 1);
        Matrix<Jet<PrimeField>> jm(4, 4, jr.zero());
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                jm.at(i, j) = (i == vi && j == vj) ? jr.variable(base.at(i, j), 0)
                                                  : jr.constant(base.at(i, j));
        auto d = det_ring(jr, jm);
        // oracle: cofactor via permutation expansion of the (vi,vj) minor
        std::vector<std::uint64_t> minor;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != vi && j != vj) minor.push_back(base.at(i, j));
        std::uint64_t mdet = oracle::leibniz_det<std::uint64_t>(
            3, minor, 0, 1, [&](std::uint64_t a, std::uint64_t b) { return f.mul(a, b); },
            [&](std::uint64_t a, std::uint64_t b) { return f.add(a, b); },
            [&](std::uint64_t a, std::uint64_t b) { return f.sub(a, b); });
        std::uint64_t cofactor = ((vi + vj) % 2 == 0) ? mdet : f.neg(mdet);
        EXPECT_EQ(d.g[0], cofactor);
    }
}

// ===== flat limits =====

namespace {

PolyRing<RationalField> QT{RationalField{}};

std::vector<BigRat> poly(std::initializer_list<long long> coefs) {
    std::vector<BigRat> p;
    for (long long c : coefs) p.emplace_back(c);
    PolyRing<RationalField> pr{RationalField{}};
    pr.trim(p);
    return p;
}

} // namespace

TEST(FlatLimit, HandWorkedFamilies) {
    RationalField q;
    {
        // rows (1,0) and (t,1): independent leads already
        Matrix<std::vector<BigRat>> m(2, 2, QT.zero());
        m.at(0, 0) = poly({1});
        m.at(1, 0) = poly({0, 1});
        m.at(1, 1) = poly({1});
        auto fl = flat_limit(QT, m);
        EXPECT_EQ(fl.basis.rank(), 2u);
    }
    {
        // rows (1,t) and (1,2t): limit is all of F^2
        Matrix<std::vector<BigRat>> m(2, 2, QT.zero());
        m.at(0, 0) = poly({1});
        m.at(0, 1) = poly({0, 1});
        m.at(1, 0) = poly({1});
        m.at(1, 1) = poly({0, 2});
        auto fl = flat_limit(QT, m);
        ASSERT_EQ(fl.basis.rank(), 2u);
        EXPECT_EQ(fl.basis.basis.at(0, 0), BigRat(1));
        EXPECT_EQ(fl.basis.basis.at(0, 1), BigRat(0));
        EXPECT_EQ(fl.basis.basis.at(1, 0), BigRat(0));
        EXPECT_EQ(fl.basis.basis.at(1, 1), BigRat(1));
    }
    {
        // single row (t^2, t^3): strip to (1, t), limit (1, 0)
        Matrix<std::vector<BigRat>> m(1, 2, QT.zero());
        m.at(0, 0) = poly({0, 0, 1});
        m.at(0, 1) = poly({0, 0, 0, 1});
        auto fl = flat_limit(QT, m);
        ASSERT_EQ(fl.basis.rank(), 1u);
        EXPECT_EQ(fl.basis.basis.at(0, 0), BigRat(1));
        EXPECT_EQ(fl.basis.basis.at(0, 1), BigRat(0));
    }
    {
        // secant line of a quadric degenerating to a tangent direction:
        // rows e1 and e1 + t(e3 - e4... here coords (1,0,0,0,0,0) and
        // (1,0,t,-t,0,t^2): limit = <e1, e3-e4>
        Matrix<std::vector<BigRat>> m(2, 6, QT.zero());
        m.at(0, 0) = poly({1});
        m.at(1, 0) = poly({1});
        m.at(1, 2) = poly({0, 1});
        m.at(1, 3) = poly({0, -1});
        m.at(1, 5) = poly({0, 0, 1});
        auto fl = flat_limit(QT, m);
        ASSERT_EQ(fl.basis.rank(), 2u);
        std::vector<BigRat> want(6, BigRat(0));
        want[2] = 1;
        want[3] = -1;
        EXPECT_TRUE(contains(q, fl.basis, want));
        std::vector<BigRat> e1(6, BigRat(0));
        e1[0] = 1;
        EXPECT_TRUE(contains(q, fl.basis, e1));
    }
}

TEST(FlatLimit, UnimodularTOperationsPreserveTheLimit) {
    // applying row operations invertible over the local ring at t=0 to a
    // constant matrix must not change the limit
    PrimeField f(kP);
    PolyRing<PrimeField> pr(f);
    Rng rng(10);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t rows = 4, cols = 7;
        auto c0 = random_mat(f, rng, rows, cols);
        Matrix<std::vector<std::uint64_t>> m(rows, cols, pr.zero());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = pr.constant(c0.at(i, j));
        // random elementary operations row_i += t^a * c * row_j
        for (int op = 0; op < 12; ++op) {
            std::size_t i = rng.below(rows), j = rng.below(rows);
            if (i == j) continue;
            std::uint64_t c = f.random(rng);
            std::size_t a = 1 + rng.below(3);
            for (std::size_t col = 0; col < cols; ++col)
                m.at(i, col) = pr.add(m.at(i, col), pr.mul(pr.monomial(c, a), m.at(j, col)));
        }
        auto fl = flat_limit(pr, m, rng.next());
        auto want = subspace_from_rows(f, c0);
        ASSERT_EQ(fl.basis.rank(), want.rank());
        EXPECT_TRUE(contains(f, want, fl.basis));
        EXPECT_TRUE(contains(f, fl.basis, want));
    }
}

TEST(FlatLimit, DependentRowsOverFunctionFieldAreDropped) {
    PrimeField f(kP);
    PolyRing<PrimeField> pr(f);
    // second row = (1+t) * first row
    Matrix<std::vector<std::uint64_t>> m(2, 3, pr.zero());
    m.at(0, 0) = pr.constant(2);
    m.at(0, 2) = pr.monomial(3, 1);
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<std::uint64_t> onePlusT{1, 1};
        m.at(1, j) = pr.mul(onePlusT, m.at(0, j));
    }
    auto fl = flat_limit(pr, m);
    EXPECT_EQ(fl.basis.rank(), 1u);
    EXPECT_EQ(fl.generic_rank, 1u);
}
