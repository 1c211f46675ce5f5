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
 * @file divpow.hpp
 * @brief The divided-power algebra O(m;N) over F_p.
 *
 * Basis monomials u^(r) = u_1^(r_1) ... u_m^(r_m) with 0 <= r_i < p^{N_i}.
 * Multiplication follows u^(r) u^(s) = prod_i C(r_i + s_i, r_i) u^(r+s);
 * monomials leaving the box are dropped (their binomial is 0 mod p anyway).
 */

#ifndef DIVOP_DIVPOW_HPP
#define DIVOP_DIVPOW_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "divop/gfp.hpp"

namespace divop {

using gfp::PrimeField;
using gfp::residue;
using gfp::Scalar;

using MultiIndex = std::vector<std::uint64_t>;

/// Number of variables, heights N_i and the ground field.
class Shape {
  public:
    Shape(const PrimeField& field, std::vector<unsigned> heights);
    /// One-variable shape O(1;N).
    static Shape line(const PrimeField& field, unsigned height) { return Shape(field, {height}); }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t m() const noexcept { return heights_.size(); }
    const std::vector<unsigned>& heights() const noexcept { return heights_; }
    /// p^{N_i}.
    std::uint64_t extent(std::size_t i) const { return extents_.at(i); }
    std::size_t dimension() const noexcept { return dimension_; }

    /// Mixed-radix position of a multi-index; the first variable varies slowest.
    std::size_t encode(const MultiIndex& r) const;
    MultiIndex decode(std::size_t index) const;
    bool contains(const MultiIndex& r) const noexcept;

    bool operator==(const Shape& o) const noexcept {
        return field_ == o.field_ && heights_ == o.heights_;
    }

  private:
    PrimeField field_;
    std::vector<unsigned> heights_;
    std::vector<std::uint64_t> extents_;
    std::vector<std::size_t> strides_;
    std::size_t dimension_ = 1;
};

/// The top multi-index (p^{N_1}-1, ..., p^{N_m}-1).
MultiIndex tau(const Shape& shape);

/// A dense element of O(m;N).
class AlgebraElement {
  public:
    explicit AlgebraElement(const Shape& shape);

    static AlgebraElement monomial(const Shape& shape, const MultiIndex& r, std::int64_t coeff = 1);
    static AlgebraElement one(const Shape& shape) {
        return monomial(shape, MultiIndex(shape.m(), 0));
    }

    const Shape& shape() const noexcept { return shape_; }
    const std::vector<residue>& coeffs() const noexcept { return coeffs_; }
    std::vector<residue>& coeffs() noexcept { return coeffs_; }

    Scalar coeff(const MultiIndex& r) const;
    void set(const MultiIndex& r, const Scalar& value);
    bool is_zero() const noexcept;

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement scaled(const Scalar& s) const;

    bool operator==(const AlgebraElement& o) const;
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

  private:
    void check_shape(const AlgebraElement& o) const;

    Shape shape_;
    std::vector<residue> coeffs_;
};

AlgebraElement multiply(const AlgebraElement& f, const AlgebraElement& g);

/// Distinguished derivative d/du_i, variables numbered from 1.
AlgebraElement partial(std::size_t i, const AlgebraElement& f);

/// The order-fold composition of partial(i, .).
AlgebraElement iterated_partial(std::size_t i, std::uint64_t order, const AlgebraElement& f);

/// Renders as "3·u1^(2)·u2^(1) + u1^(4)"; the zero element renders as "0".
std::string render(const AlgebraElement& f);

/// Inverse of render. Accepts "·" or "*" between factors and "-" between terms.
/// Throws std::invalid_argument on malformed input.
AlgebraElement parse_element(const Shape& shape, const std::string& text);

}  // namespace divop

#endif  // DIVOP_DIVPOW_HPP
