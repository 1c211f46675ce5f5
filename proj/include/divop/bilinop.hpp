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

/**
 * @file bilinop.hpp
 * @brief Constant-coefficient bilinear differential operators
 *        F_a x F_b -> F_c, (f, g) -> sum alpha_{ij} f^(i) g^(j).
 *
 * The coefficient table keeps its full support; truncation to i, j < p^N
 * happens only in canonical() and when the operator is evaluated.
 */

#ifndef DIVOP_BILINOP_HPP
#define DIVOP_BILINOP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "divop/density.hpp"

namespace divop {

using Index2 = std::pair<std::uint64_t, std::uint64_t>;

class BilinearOperator {
  public:
    BilinearOperator(const PrimeField& field, const Scalar& a, const Scalar& b, const Scalar& c,
                     std::string name = {});
    /// Empty operator of order k with target weight a + b + k.
    static BilinearOperator homogeneous(const PrimeField& field, const Scalar& a, const Scalar& b,
                                        std::uint64_t k, std::string name = {});

    const PrimeField& field() const noexcept { return field_; }
    std::uint32_t p() const noexcept { return field_.p(); }
    const Scalar& a() const noexcept { return a_; }
    const Scalar& b() const noexcept { return b_; }
    const Scalar& c() const noexcept { return c_; }
    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Nonzero coefficients, ordered lexicographically in (i, j).
    const std::map<Index2, residue>& coeffs() const noexcept { return coeffs_; }
    Scalar coefficient(std::uint64_t i, std::uint64_t j) const;
    void set(std::uint64_t i, std::uint64_t j, const Scalar& value);
    void add(std::uint64_t i, std::uint64_t j, std::int64_t value);

    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Largest i + j in the support; 0 for the zero operator.
    std::uint64_t order() const noexcept;
    /// All terms of one total order k and c = a + b + k.
    bool is_homogeneous() const;

    /// Drops the terms with i >= p^N or j >= p^N, which vanish on O(1;N).
    BilinearOperator canonical(unsigned N) const;
    BilinearOperator scaled(const Scalar& s) const;
    /// Sum of two operators with the same weights.
    BilinearOperator operator+(const BilinearOperator& o) const;

    bool same_weights(const BilinearOperator& o) const;
    /// Same weights and same coefficient table (names are ignored).
    bool operator==(const BilinearOperator& o) const;

  private:
    PrimeField field_;
    Scalar a_, b_, c_;
    std::map<Index2, residue> coeffs_;
    std::string name_;
};

WeightedDensity apply(const BilinearOperator& D, const WeightedDensity& phi, const WeightedDensity& psi);

/// D(g, f): transposed table, weights swapped.
BilinearOperator swap_arguments(const BilinearOperator& D);

/// Adjoint in the first slot: F_{1-c} x F_b -> F_{1-a}. The integration by
/// parts identity behind it holds for every N, so no N is needed.
BilinearOperator dual1(const BilinearOperator& D);
/// Adjoint in the second slot: F_a x F_{1-c} -> F_{1-b}.
BilinearOperator dual2(const BilinearOperator& D);

enum class Slot { first, second, both };

/// D composed with d in the chosen slot(s). The slot must have weight 1, the
/// weight of d(F_0); afterwards it consumes F_0.
BilinearOperator precompose_d(const BilinearOperator& D, Slot slot);

/// lambda with D1 = lambda D2 as maps on O(1;N) x O(1;N), if any.
std::optional<Scalar> equal_up_to_scalar(const BilinearOperator& D1, const BilinearOperator& D2,
                                         unsigned N);

/// "f^(0)g^(4) - f^(4)g^(0)" with signs in (-p/2, p/2].
std::string render(const BilinearOperator& D);

nlohmann::json to_json(const BilinearOperator& D);
/// Throws std::invalid_argument on malformed input.
BilinearOperator operator_from_json(const nlohmann::json& j);

/// Named families.
namespace named {

/// f g^(k) - f^(k) g, k = p^m - 1, at (1,1).
BilinearOperator bj(std::uint32_t p, unsigned m);
/// Its dual F_1 x F_0 -> F_0 (second slot).
BilinearOperator bj_dual2(std::uint32_t p, unsigned m);
/// Its dual F_0 x F_1 -> F_0, normalized with leading term f^(k) g.
BilinearOperator bj_dual1(std::uint32_t p, unsigned m);
/// Alternating determinant of order k = p^m - 2 at (1,1); for p = 2 it also
/// carries the middle term f^(k/2) g^(k/2). m >= 1; k = 0 is allowed for p = 2.
BilinearOperator gz(std::uint32_t p, unsigned m);
/// Order p^N - 1 operator at (1-a, a); the middle term only exists for p > 2.
BilinearOperator long_L(std::uint32_t p, unsigned N, std::int64_t a);
/// sum (-1)^i C(2a+k-1, k-i) C(2b+k-1, i) f^(i) g^(k-i); weights lifted to [0, p).
BilinearOperator transvectant(std::uint32_t p, std::uint64_t k, std::int64_t a, std::int64_t b);
/// f^(p^N - 1) g at (1, b).
BilinearOperator int_tensor_id(std::uint32_t p, unsigned N, std::int64_t b);
/// f^(p^N - 1) g' at (1, 0).
BilinearOperator int_tensor_d(std::uint32_t p, unsigned N);
/// f^(p^N - 1) g^(p^N - 1) at (1, 1).
BilinearOperator int_tensor_int(std::uint32_t p, unsigned N);
/// The product f g.
BilinearOperator product(std::uint32_t p, std::int64_t a, std::int64_t b);
/// a f g' - b f' g.
BilinearOperator poisson(std::uint32_t p, std::int64_t a, std::int64_t b);
/// f g' - f' g at (-1,-1).
BilinearOperator contact(std::uint32_t p);
/// alpha f' g + beta f g' at (0,0).
BilinearOperator p00(std::uint32_t p, std::int64_t alpha, std::int64_t beta);
/// a f g'' + f' g' + b f'' g.
BilinearOperator order2(std::uint32_t p, std::int64_t a, std::int64_t b);
/// f' g' - b f'' g at (0, b).
BilinearOperator pb_df_g(std::uint32_t p, std::int64_t b);
/// a f g'' - f' g' at (a, 0).
BilinearOperator pb_f_dg(std::uint32_t p, std::int64_t a);
/// a f g'' + (2a+1) f' g' + (a+1) f'' g at (a, -1-a).
BilinearOperator pb_derived(std::uint32_t p, std::int64_t a);
/// f' g'' - f'' g' at (0,0).
BilinearOperator t1(std::uint32_t p);
/// 2(f g''' - f''' g) + 3(f' g'' - f'' g') at (-2/3, -2/3); needs p > 3.
BilinearOperator grozman(std::uint32_t p);

}  // namespace named

}  // namespace divop

#endif  // DIVOP_BILINOP_HPP
