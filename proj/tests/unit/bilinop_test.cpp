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

#include "divop/bilinop.hpp"
#include "divop/invariance.hpp"

using namespace divop;

namespace {

AlgebraElement u(const Shape& sh, std::uint64_t r, std::int64_t c = 1) { return AlgebraElement::monomial(sh, {r}, c); }

// All named operators at small orders over F_p.
std::vector<BilinearOperator> zoo(std::uint32_t p) {
    std::vector<BilinearOperator> ops{named::product(p, 2, 3), named::poisson(p, 1, 2), named::contact(p),
                                      named::p00(p, 1, 1),      named::order2(p, 1, 0),  named::t1(p),
                                      named::bj(p, 1),          named::bj_dual1(p, 1),   named::bj_dual2(p, 1),
                                      named::int_tensor_id(p, 1, 2 % p), named::int_tensor_d(p, 1),
                                      named::int_tensor_int(p, 1), named::long_L(p, 1, 1),
                                      named::transvectant(p, 2, 1, p - 1)};
    if (p > 2) ops.push_back(named::gz(p, 1));
    if (p > 3) ops.push_back(named::grozman(p));
    return ops;
}

}  // namespace

TEST(Apply, ProductIsMultiplication) {
    const Shape sh = Shape::line(PrimeField(5), 1);
    const PrimeField& F = sh.field();
    const auto D = named::product(5, 2, 4);
    const WeightedDensity f(F(2), u(sh, 1) + u(sh, 2)), g(F(4), u(sh, 2, 3));
    const auto r = apply(D, f, g);
    EXPECT_EQ(r.weight, F(1));
    EXPECT_EQ(r.f, f.f * g.f);
    EXPECT_THROW(apply(D, g, f), std::invalid_argument);
}

TEST(Apply, BjTwoOneIsContactBracketModTwo) {
    const Shape sh = Shape::line(PrimeField(2), 3);
    const PrimeField& F = sh.field();
    const auto D = named::bj(2, 1);
    EXPECT_EQ(D.coeffs(), (std::map<Index2, gfp::residue>{{{0, 1}, 1}, {{1, 0}, 1}}));
    for (std::uint64_t r = 0; r < 8; ++r)
        for (std::uint64_t t = 0; t < 8; ++t) {
            const auto f = u(sh, r), g = u(sh, t);
            EXPECT_EQ(apply(D, WeightedDensity(F(1), f), WeightedDensity(F(1), g)).f,
                      f * partial(1, g) + partial(1, f) * g);
        }
}

TEST(Named, GzFiveOne) {
    const auto D = named::gz(5, 1);
    EXPECT_EQ(D.coeffs(), (std::map<Index2, gfp::residue>{{{0, 3}, 1}, {{1, 2}, 4}, {{2, 1}, 1}, {{3, 0}, 4}}));
    EXPECT_EQ(render(D), "f^(0)g^(3) - f^(1)g^(2) + f^(2)g^(1) - f^(3)g^(0)");
    const auto lambda = equal_up_to_scalar(D, named::grozman(5), 1);
    ASSERT_TRUE(lambda.has_value());
    EXPECT_EQ(*lambda, PrimeField(5)(3));
}

TEST(Named, GzCarriesMiddleTermOnlyForTwo) {
    EXPECT_EQ(named::gz(2, 2).coefficient(1, 1), PrimeField(2)(1));
    EXPECT_EQ(named::gz(2, 3).coefficient(3, 3), PrimeField(2)(1));
    EXPECT_EQ(named::gz(3, 2).coeffs().size(), 8u);
    EXPECT_EQ(named::gz(2, 1).order(), 0u);
}

TEST(Named, LongOperatorMiddleTerm) {
    EXPECT_EQ(named::long_L(2, 1, 1).coeffs().size(), 2u);
    EXPECT_EQ(named::long_L(3, 1, 1).coeffs().size(), 3u);
    EXPECT_EQ(named::long_L(5, 1, 2).a(), PrimeField(5)(-1));
}

TEST(Named, TransvectantOrderTwo) {
    for (std::uint32_t p : {3u, 5u, 7u}) {
        const PrimeField F(p);
        for (std::int64_t a = 0; a < p; ++a)
            for (std::int64_t b = 0; b < p; ++b) {
                const auto J = named::transvectant(p, 2, a, b);
                for (std::uint64_t i = 0; i <= 2; ++i) {
                    const Scalar want = F(i % 2 ? -1 : 1) * gfp::binom_mod_p(2 * a + 1, 2 - i, F) *
                                        gfp::binom_mod_p(2 * b + 1, i, F);
                    EXPECT_EQ(J.coefficient(i, 2 - i), want) << p << " " << a << " " << b << " " << i;
                }
            }
    }
}

TEST(Named, BadParametersThrow) {
    EXPECT_THROW(named::bj(4, 1), std::invalid_argument);
    EXPECT_THROW(named::bj(3, 0), std::invalid_argument);
    EXPECT_THROW(named::grozman(3), std::invalid_argument);
}

TEST(Swap, Examples) {
    const auto prod = named::product(5, 1, 2);
    EXPECT_EQ(swap_arguments(prod), named::product(5, 2, 1));
    for (std::uint32_t p : {3u, 5u, 7u}) {
        const auto lambda = equal_up_to_scalar(swap_arguments(named::bj(p, 1)), named::bj(p, 1), 2);
        ASSERT_TRUE(lambda.has_value());
        EXPECT_EQ(*lambda, PrimeField(p)(-1));
    }
    const auto r = swap_arguments(named::int_tensor_d(3, 1));
    EXPECT_EQ(r.a(), PrimeField(3)(0));
    EXPECT_EQ(r.b(), PrimeField(3)(1));
    EXPECT_EQ(r.coefficient(1, 2), PrimeField(3)(1));
}

TEST(Dual, Examples) {
    const auto I = named::int_tensor_int(5, 1);
    EXPECT_EQ(dual1(I).canonical(1), I);
    EXPECT_EQ(dual2(I).canonical(1), I);
    EXPECT_EQ(dual1(named::product(7, 2, 3)), named::product(7, 1 - 5, 3));
    for (std::uint32_t p : {2u, 3u, 5u})
        for (unsigned m = 1; m <= 2; ++m) {
            EXPECT_TRUE(equal_up_to_scalar(dual1(named::bj(p, m)), named::bj_dual1(p, m), m).has_value());
            EXPECT_TRUE(equal_up_to_scalar(dual2(named::bj(p, m)), named::bj_dual2(p, m), m).has_value());
        }
    EXPECT_EQ(dual1(I).name(), "(∫⊗∫)^{*1}");
    EXPECT_EQ(dual2(named::bj(3, 1)).name(), "Bj_{3,1}^{*2}");
}

TEST(Dual, GzSelfDualButNotAfterComposition) {
    for (std::uint32_t p : {3u, 5u, 7u}) {
        const auto G = named::gz(p, 1);
        EXPECT_TRUE(equal_up_to_scalar(dual1(G), G, 1).has_value()) << p;
        const auto dd = precompose_d(G, Slot::both);
        EXPECT_FALSE(equal_up_to_scalar(dual1(dd), dd, 2).has_value()) << p;
    }
}

TEST(PrecomposeD, ShiftsOrdersAndWeights) {
    const auto B = precompose_d(named::bj(3, 1), Slot::both);
    EXPECT_EQ(B.order(), 4u);
    EXPECT_EQ(B.a(), PrimeField(3)(0));
    EXPECT_EQ(B.b(), PrimeField(3)(0));
    EXPECT_EQ(B.c(), named::bj(3, 1).c());
    EXPECT_EQ(B.coefficient(1, 3), PrimeField(3)(1));
    EXPECT_EQ(B.name(), "Bj_{3,1}∘(d⊗d)");
    EXPECT_TRUE(precompose_d(BilinearOperator::homogeneous(PrimeField(3), PrimeField(3)(1), PrimeField(3)(1), 2),
                             Slot::first)
                    .is_zero());
    EXPECT_THROW(precompose_d(named::product(3, 2, 1), Slot::first), std::invalid_argument);
    EXPECT_EQ(precompose_d(named::int_tensor_id(3, 1, 1), Slot::second).coefficient(2, 1), PrimeField(3)(1));
}

TEST(EqualUpToScalar, Basics) {
    const auto D = named::t1(5);
    EXPECT_EQ(*equal_up_to_scalar(D, D, 1), PrimeField(5)(1));
    EXPECT_EQ(*equal_up_to_scalar(D.scaled(PrimeField(5)(3)), D, 1), PrimeField(5)(3));
    EXPECT_FALSE(equal_up_to_scalar(D, named::product(5, 0, 0), 1).has_value());
    // f^(3) g vanishes on O(1;1) for p = 3.
    const auto zero = BilinearOperator::homogeneous(PrimeField(3), PrimeField(3)(0), PrimeField(3)(0), 3);
    auto high = zero;
    high.set(3, 0, PrimeField(3)(1));
    EXPECT_EQ(*equal_up_to_scalar(high, zero, 1), PrimeField(3)(1));
    EXPECT_FALSE(equal_up_to_scalar(high, zero, 2).has_value());
}

TEST(Json, RoundTrip) {
    for (const auto& D : zoo(5)) {
        const auto back = operator_from_json(to_json(D));
        EXPECT_EQ(back, D);
        EXPECT_EQ(back.name(), D.name());
    }
    EXPECT_THROW(operator_from_json(nlohmann::json{{"p", 4}}), std::invalid_argument);
    EXPECT_THROW(operator_from_json(nlohmann::json::array()), std::invalid_argument);
}

// swap and the duals are involutions (up to sign) and intertwine as expected.
TEST(Involutions, SwapAndDuals) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u})
        for (const auto& D : zoo(p)) {
            EXPECT_EQ(swap_arguments(swap_arguments(D)), D) << D.name();
            EXPECT_EQ(swap_arguments(dual1(D)), dual2(swap_arguments(D))) << D.name();
            const auto back1 = equal_up_to_scalar(dual1(dual1(D)), D, 3);
            const auto back2 = equal_up_to_scalar(dual2(dual2(D)), D, 3);
            ASSERT_TRUE(back1 && back2) << D.name();
            EXPECT_TRUE(*back1 == PrimeField(p)(1) || *back1 == PrimeField(p)(-1)) << D.name();
            EXPECT_TRUE(*back2 == PrimeField(p)(1) || *back2 == PrimeField(p)(-1)) << D.name();
        }
}

// Defining pairing identities of the duals, exhaustive on the basis for p^N <= 27.
class DualPairing : public ::testing::TestWithParam<std::pair<std::uint32_t, unsigned>> {};

TEST_P(DualPairing, IntegrationByParts) {
    const auto [p, N] = GetParam();
    const Shape sh = Shape::line(PrimeField(p), N);
    const std::uint64_t n = sh.extent(0);
    for (const auto& D : zoo(p)) {
        const auto E1 = dual1(D), E2 = dual2(D);
        const Scalar h_weight = D.field().one() - D.c();
        std::vector<WeightedDensity> fs, gs, hs;
        for (std::uint64_t r = 0; r < n; ++r) {
            fs.emplace_back(D.a(), u(sh, r));
            gs.emplace_back(D.b(), u(sh, r));
            hs.emplace_back(h_weight, u(sh, r));
        }
        for (std::uint64_t r = 0; r < n; ++r)
            for (std::uint64_t t = 0; t < n; ++t) {
                const auto Dfg = apply(D, fs[r], gs[t]);
                for (std::uint64_t s = 0; s < n; ++s) {
                    const Scalar lhs = pairing(Dfg, hs[s]);
                    ASSERT_EQ(lhs, pairing(fs[r], apply(E1, hs[s], gs[t]))) << D.name() << " " << r << " " << t << " " << s;
                    ASSERT_EQ(lhs, pairing(apply(E2, fs[r], hs[s]), gs[t])) << D.name() << " " << r << " " << t << " " << s;
                }
            }
    }
}

INSTANTIATE_TEST_SUITE_P(ExtentAtMost27, DualPairing,
                         ::testing::Values(std::make_pair(2u, 2u), std::make_pair(2u, 4u), std::make_pair(3u, 1u),
                                           std::make_pair(3u, 3u), std::make_pair(5u, 1u), std::make_pair(5u, 2u),
                                           std::make_pair(7u, 1u)));
