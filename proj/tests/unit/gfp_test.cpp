/*
   Copyright 2026 The divop Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <random>

#include "divop/gfp.hpp"

using namespace divop::gfp;

TEST(PrimeField, RejectsComposites) {
    EXPECT_THROW(PrimeField(1), std::invalid_argument);
    EXPECT_THROW(PrimeField(4), std::invalid_argument);
    EXPECT_THROW(PrimeField(9), std::invalid_argument);
    EXPECT_NO_THROW(PrimeField(13));
}

TEST(PrimeField, ReducesNegatives) {
    const PrimeField F(7);
    EXPECT_EQ(F(-1).value(), 6u);
    EXPECT_EQ(F(-15).value(), 6u);
    EXPECT_EQ(F(21).value(), 0u);
}

TEST(Scalar, InverseOfThreeModSeven) {
    const PrimeField F(7);
    EXPECT_EQ(F(3).inverse(), F(5));
    EXPECT_EQ(F(3) * F(5), F.one());
}

TEST(Scalar, ZeroHasNoInverse) {
    const PrimeField F(5);
    EXPECT_THROW(F(0).inverse(), std::domain_error);
    EXPECT_THROW(F(1) / F(0), std::domain_error);
}

TEST(Scalar, MixingFieldsThrows) {
    const PrimeField F(5), G(7);
    EXPECT_THROW(F(1) + G(1), FieldMismatch);
    EXPECT_THROW((void)(F(1) == G(1)), FieldMismatch);
}

TEST(Scalar, BalancedRepresentative) {
    const PrimeField F(5);
    EXPECT_EQ(F(4).balanced(), -1);
    EXPECT_EQ(F(2).balanced(), 2);
    EXPECT_EQ(F(3).balanced(), -2);
    EXPECT_EQ(PrimeField(2)(1).balanced(), 1);
}

TEST(Scalar, FermatLittleTheorem) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        const PrimeField F(p);
        for (std::uint32_t x = 1; x < p; ++x) EXPECT_EQ(F(x).pow(p - 1), F.one()) << p << " " << x;
    }
}

TEST(Binomial, LucasExamples) {
    const PrimeField F(3);
    EXPECT_EQ(binom_mod_p(5, 2, F), F(1));  // C(5,2) = 10
    EXPECT_EQ(binom_residue(4, 2, 2), 0u);
    EXPECT_EQ(binom_residue(7, 3, 2), 1u);
    EXPECT_EQ(binom_residue(3, 5, 7), 0u);
}

TEST(Binomial, TopIndexIsAlternating) {
    // C(p^m - 1, i) = (-1)^i
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        const PrimeField F(p);
        std::uint64_t n = 1;
        for (int m = 1; m <= 3; ++m) {
            n *= p;
            for (std::uint64_t i = 0; i < n; ++i)
                EXPECT_EQ(binom_mod_p(n - 1, i, F), F(i % 2 ? -1 : 1)) << p << " " << m << " " << i;
        }
    }
}

TEST(Binomial, SmallCases) {
    EXPECT_EQ(binom_residue(24, 2, 5), 1u);
    EXPECT_EQ(binom_residue(7, 3, 7), 0u);
}

// Pascal's rule mod p is exact, so it serves as the reference for all n, k < p^3.
TEST(Binomial, MatchesPascalTriangle) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        const std::size_t n_max = static_cast<std::size_t>(p) * p * p;
        std::vector<std::vector<std::uint32_t>> pascal(n_max, std::vector<std::uint32_t>(n_max, 0));
        for (std::size_t n = 0; n < n_max; ++n) {
            pascal[n][0] = 1;
            for (std::size_t k = 1; k <= n; ++k) pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % p;
        }
        for (std::size_t n = 0; n < n_max; ++n)
            for (std::size_t k = 0; k < n_max; ++k) ASSERT_EQ(binom_residue(n, k, p), pascal[n][k]) << n << " " << k;
    }
}

TEST(FpMatrix, SetAndGet) {
    const PrimeField F(5);
    FpMatrix M(F, 2, 3);
    M.set(1, 2, F(-1));
    EXPECT_EQ(M.at(1, 2), F(4));
    EXPECT_EQ(M.at(0, 0), F(0));
    EXPECT_THROW(M.at(2, 0), std::out_of_range);
}

TEST(NullSpace, ZeroMatrixKernelIsEverything) {
    const PrimeField F(5);
    const FpMatrix Z(F, 2, 2);
    const auto kernel = null_space(Z);
    ASSERT_EQ(kernel.size(), 2u);
    EXPECT_EQ(kernel[0], (FpVector{F(1), F(0)}));
    EXPECT_EQ(kernel[1], (FpVector{F(0), F(1)}));
    EXPECT_EQ(rank(Z), 0u);
}

TEST(NullSpace, IdentityHasTrivialKernel) {
    const PrimeField F(3);
    EXPECT_TRUE(null_space(FpMatrix::identity(F, 4)).empty());
    EXPECT_EQ(rank(FpMatrix::identity(F, 4)), 4u);
}

TEST(NullSpace, RankDependsOnCharacteristic) {
    // [[1,1],[1,-1]] is singular exactly when p = 2.
    for (std::uint32_t p : {2u, 3u}) {
        const PrimeField F(p);
        FpMatrix M(F, 2, 2);
        M.set(0, 0, F(1));
        M.set(0, 1, F(1));
        M.set(1, 0, F(1));
        M.set(1, 1, F(-1));
        EXPECT_EQ(rank(M), p == 2 ? 1u : 2u);
    }
}

TEST(RowEchelon, ReducedAndDeterministic) {
    const PrimeField F(7);
    RowEchelon E(F, 3);
    EXPECT_TRUE(E.insert(std::vector<residue>{2, 4, 6}));
    EXPECT_FALSE(E.insert(std::vector<residue>{1, 2, 3}));
    EXPECT_TRUE(E.insert(std::vector<residue>{0, 1, 1}));
    ASSERT_EQ(E.rank(), 2u);
    EXPECT_EQ(E.basis()[0], (std::vector<residue>{1, 0, 1}));
    EXPECT_EQ(E.basis()[1], (std::vector<residue>{0, 1, 1}));
    EXPECT_TRUE(E.contains(std::vector<residue>{3, 1, 4}));
    EXPECT_FALSE(E.contains(std::vector<residue>{0, 0, 1}));

    std::vector<residue> c;
    ASSERT_TRUE(E.coordinates(std::vector<residue>{3, 1, 4}, c));
    EXPECT_EQ(c, (std::vector<residue>{3, 1}));
}

// Property: for random matrices, every null-space vector is annihilated and
// rank + nullity = columns.
TEST(NullSpace, RandomRankNullity) {
    std::mt19937_64 rng(20260101);
    for (std::uint32_t p : {2u, 3u, 5u, 11u}) {
        const PrimeField F(p);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t rows = 1 + rng() % 7, cols = 1 + rng() % 7;
            FpMatrix M(F, rows, cols);
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) M.set(r, c, F(static_cast<std::int64_t>(rng() % p)));
            const auto kernel = null_space(M);
            EXPECT_EQ(kernel.size() + rank(M), cols);
            for (const auto& v : kernel)
                for (std::size_t r = 0; r < rows; ++r) {
                    Scalar acc = F.zero();
                    for (std::size_t c = 0; c < cols; ++c) acc += M.at(r, c) * v[c];
                    EXPECT_TRUE(acc.is_zero());
                }
        }
    }
}

TEST(NullSpaceFilter, AgreesWithDirectSolve) {
    std::mt19937_64 rng(7);
    const PrimeField F(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t cols = 2 + rng() % 6;
        NullSpaceFilter filter(F, cols);
        RowEchelon rows(F, cols);
        for (int r = 0; r < 4; ++r) {
            std::vector<residue> row(cols);
            for (auto& x : row) x = static_cast<residue>(rng() % 5);
            filter.constrain(row);
            rows.insert(row);
        }
        EXPECT_EQ(filter.reduced_basis(), rows.null_space());
    }
}
