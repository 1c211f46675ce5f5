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

#include "divop/divpow.hpp"

using namespace divop;

namespace {

AlgebraElement u(const Shape& sh, std::uint64_t r, std::int64_t c = 1) { return AlgebraElement::monomial(sh, {r}, c); }

}  // namespace

TEST(Shape, DimensionIsProductOfExtents) {
    const Shape sh(PrimeField(3), {1, 2});
    EXPECT_EQ(sh.m(), 2u);
    EXPECT_EQ(sh.extent(0), 3u);
    EXPECT_EQ(sh.extent(1), 9u);
    EXPECT_EQ(sh.dimension(), 27u);
    for (std::size_t x = 0; x < sh.dimension(); ++x) EXPECT_EQ(sh.encode(sh.decode(x)), x);
    EXPECT_FALSE(sh.contains({3, 0}));
}

TEST(Shape, RejectsBadHeights) {
    EXPECT_THROW(Shape(PrimeField(2), {}), std::invalid_argument);
    EXPECT_THROW(Shape(PrimeField(2), {0}), std::invalid_argument);
    EXPECT_THROW(Shape(PrimeField(2), {30}), std::invalid_argument);
}

TEST(Tau, TopIndex) {
    EXPECT_EQ(tau(Shape(PrimeField(2), {1})), (MultiIndex{1}));
    EXPECT_EQ(tau(Shape(PrimeField(3), {2})), (MultiIndex{8}));
    EXPECT_EQ(tau(Shape(PrimeField(5), {1, 1})), (MultiIndex{4, 4}));
}

TEST(Multiply, SquareOfUVanishesInCharTwo) {
    const Shape sh = Shape::line(PrimeField(2), 2);
    EXPECT_TRUE((u(sh, 1) * u(sh, 1)).is_zero());
}

TEST(Multiply, BinomialCoefficient) {
    const Shape sh = Shape::line(PrimeField(7), 1);
    EXPECT_EQ(u(sh, 2) * u(sh, 3), u(sh, 5, 3));
}

TEST(Multiply, OneIsNeutral) {
    const Shape sh = Shape::line(PrimeField(5), 1);
    for (std::uint64_t r = 0; r < 5; ++r) EXPECT_EQ(u(sh, r) * AlgebraElement::one(sh), u(sh, r));
}

TEST(Multiply, ShapeMismatchThrows) {
    const Shape a = Shape::line(PrimeField(5), 1), b = Shape::line(PrimeField(5), 2);
    EXPECT_THROW(u(a, 1) * u(b, 1), std::invalid_argument);
    EXPECT_THROW(u(a, 1) + u(Shape::line(PrimeField(7), 1), 1), gfp::FieldMismatch);
}

TEST(Partial, LowersTheIndex) {
    const Shape sh = Shape::line(PrimeField(3), 2);
    EXPECT_EQ(partial(1, u(sh, 4)), u(sh, 3));
    EXPECT_TRUE(partial(1, u(sh, 0)).is_zero());
    EXPECT_EQ(iterated_partial(1, 8, u(sh, 8)), AlgebraElement::one(sh));
    EXPECT_THROW(partial(2, u(sh, 1)), std::out_of_range);
}

TEST(Partial, IteratedExtractsTopCoefficient) {
    const Shape sh = Shape::line(PrimeField(5), 1);
    const AlgebraElement f = u(sh, 0, 2) + u(sh, 3) + u(sh, 4, 3);
    EXPECT_EQ(iterated_partial(1, 0, f), f);
    EXPECT_EQ(iterated_partial(1, 4, f), AlgebraElement::one(sh).scaled(Scalar(sh.field(), 3)));
    EXPECT_TRUE(iterated_partial(1, 5, f).is_zero());
}

TEST(Partial, ActsOnOneVariable) {
    const Shape sh(PrimeField(3), {1, 1});
    const auto f = AlgebraElement::monomial(sh, {2, 1});
    EXPECT_EQ(partial(1, f), AlgebraElement::monomial(sh, {1, 1}));
    EXPECT_EQ(partial(2, f), AlgebraElement::monomial(sh, {2, 0}));
}

TEST(Render, RoundTrip) {
    const Shape sh(PrimeField(5), {1, 1});
    const auto f = AlgebraElement::monomial(sh, {2, 1}, 3) + AlgebraElement::monomial(sh, {4, 0}, -1);
    EXPECT_EQ(render(f), "3·u1^(2)·u2^(1) + 4·u1^(4)");
    EXPECT_EQ(parse_element(sh, render(f)), f);
    EXPECT_EQ(parse_element(sh, "3*u1^(2)*u2^(1) + 4*u1^(4)"), f);
    EXPECT_EQ(render(AlgebraElement(sh)), "0");
}

TEST(Render, ParseErrors) {
    const Shape sh = Shape::line(PrimeField(5), 1);
    EXPECT_EQ(parse_element(sh, "2·u^(3)"), u(sh, 3, 2));
    EXPECT_THROW(parse_element(sh, "u^(5)"), std::invalid_argument);
    EXPECT_THROW(parse_element(sh, "u^(1)·u^(2)"), std::invalid_argument);
    EXPECT_THROW(parse_element(sh, "2 +"), std::invalid_argument);
}

// Exhaustive over the basis of every algebra with dimension <= 27.
class SmallAlgebras : public ::testing::TestWithParam<std::pair<std::uint32_t, std::vector<unsigned>>> {};

TEST_P(SmallAlgebras, CommutativeAssociativeLeibniz) {
    const Shape sh(PrimeField(GetParam().first), GetParam().second);
    const std::size_t n = sh.dimension();
    std::vector<AlgebraElement> basis;
    for (std::size_t x = 0; x < n; ++x) basis.push_back(AlgebraElement::monomial(sh, sh.decode(x)));
    for (const auto& f : basis)
        for (const auto& g : basis) {
            const AlgebraElement fg = f * g;
            ASSERT_EQ(fg, g * f);
            for (std::size_t i = 1; i <= sh.m(); ++i)
                ASSERT_EQ(partial(i, fg), partial(i, f) * g + f * partial(i, g));
            for (const auto& h : basis) ASSERT_EQ(fg * h, f * (g * h));
        }
}

TEST_P(SmallAlgebras, OverflowingProductsHaveZeroBinomial) {
    const Shape sh(PrimeField(GetParam().first), GetParam().second);
    const std::uint32_t p = sh.field().p();
    for (std::size_t i = 0; i < sh.m(); ++i)
        for (std::uint64_t r = 0; r < sh.extent(i); ++r)
            for (std::uint64_t s = 0; s < sh.extent(i); ++s)
                if (r + s >= sh.extent(i)) ASSERT_EQ(gfp::binom_residue(r + s, r, p), 0u);
}

TEST_P(SmallAlgebras, IteratedPartialsCompose) {
    const Shape sh(PrimeField(GetParam().first), GetParam().second);
    for (std::size_t x = 0; x < sh.dimension(); ++x) {
        const auto f = AlgebraElement::monomial(sh, sh.decode(x));
        for (std::uint64_t s = 0; s < sh.extent(0); ++s)
            for (std::uint64_t t = 0; t + s <= sh.extent(0); ++t)
                ASSERT_EQ(iterated_partial(1, s, iterated_partial(1, t, f)), iterated_partial(1, s + t, f));
    }
}

INSTANTIATE_TEST_SUITE_P(DimensionAtMost27, SmallAlgebras,
                         ::testing::Values(std::make_pair(2u, std::vector<unsigned>{1}),
                                           std::make_pair(2u, std::vector<unsigned>{4}),
                                           std::make_pair(2u, std::vector<unsigned>{1, 2}),
                                           std::make_pair(2u, std::vector<unsigned>{1, 1, 1}),
                                           std::make_pair(3u, std::vector<unsigned>{3}),
                                           std::make_pair(3u, std::vector<unsigned>{1, 2}),
                                           std::make_pair(5u, std::vector<unsigned>{1}),
                                           std::make_pair(5u, std::vector<unsigned>{1, 1}),
                                           std::make_pair(7u, std::vector<unsigned>{1})));
