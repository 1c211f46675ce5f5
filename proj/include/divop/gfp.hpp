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
 * @file gfp.hpp
 * @brief Exact arithmetic in the prime field F_p and dense linear algebra
 *        (row echelon forms, null spaces, ranks) over it.
 *
 * Scalars carry their modulus. Combining scalars of different fields throws
 * FieldMismatch; there is no implicit coercion between fields.
 *
 * The kernels work on raw residues (std::uint32_t in [0, p)) so that the
 * large invariance systems do not pay for a modulus per entry.
 */

#ifndef DIVOP_GFP_HPP
#define DIVOP_GFP_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace divop::gfp {

using residue = std::uint32_t;

/// Raised when two values over different prime fields are combined.
class FieldMismatch : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class Scalar;

/// The prime field F_p. Construction checks primality.
class PrimeField {
  public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const noexcept { return p_; }

    Scalar operator()(std::int64_t value) const;
    Scalar zero() const;
    Scalar one() const;

    residue reduce(std::int64_t value) const noexcept {
        std::int64_t r = value % static_cast<std::int64_t>(p_);
        return static_cast<residue>(r < 0 ? r + p_ : r);
    }
    residue add(residue x, residue y) const noexcept {
        residue s = x + y;
        return s >= p_ ? s - p_ : s;
    }
    residue sub(residue x, residue y) const noexcept { return x >= y ? x - y : x + p_ - y; }
    residue neg(residue x) const noexcept { return x == 0 ? 0 : p_ - x; }
    residue mul(residue x, residue y) const noexcept {
        return static_cast<residue>(static_cast<std::uint64_t>(x) * y % p_);
    }
    residue pow(residue x, std::uint64_t e) const noexcept;
    /// Multiplicative inverse; throws std::domain_error on zero.
    residue inv(residue x) const;

    bool operator==(const PrimeField& other) const noexcept { return p_ == other.p_; }

  private:
    std::uint32_t p_;
};

bool is_prime(std::uint64_t n) noexcept;

/// An element of F_p.
class Scalar {
  public:
    Scalar(const PrimeField& field, std::int64_t value)
        : value_(field.reduce(value)), p_(field.p()) {}

    residue value() const noexcept { return value_; }
    PrimeField field() const { return PrimeField(p_); }
    std::uint32_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return value_ == 0; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar inverse() const;
    Scalar pow(std::uint64_t e) const;

    /// Exact equality; comparing scalars of different fields is a FieldMismatch.
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Integer representative in (-p/2, p/2], used for readable signs.
    std::int64_t balanced() const noexcept;

  private:
    Scalar(residue v, std::uint32_t p, int) : value_(v), p_(p) {}
    void check_same(const Scalar& o) const;

    residue value_;
    std::uint32_t p_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// C(n, k) mod p by Lucas' theorem (digit-wise in base p). Zero when k > n.
Scalar binom_mod_p(std::uint64_t n, std::uint64_t k, const PrimeField& field);
residue binom_residue(std::uint64_t n, std::uint64_t k, std::uint32_t p) noexcept;

/// Dense matrix over F_p.
class FpMatrix {
  public:
    FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols);

    const PrimeField& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Scalar at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Scalar& value);

    std::span<const residue> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    /// Appends a row of raw residues (must be reduced and of length cols()).
    void append_row(std::span<const residue> entries);

    static FpMatrix identity(const PrimeField& field, std::size_t n);

  private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<residue> data_;
};

using FpVector = std::vector<Scalar>;

/**
 * Incremental reduced row echelon form.
 *
 * Rows are inserted one at a time; the stored rows are kept fully reduced
 * (leading 1, zeros above and below every pivot). Pivot order is the column
 * order, so results are reproducible bit for bit.
 */
class RowEchelon {
  public:
    RowEchelon(const PrimeField& field, std::size_t cols);

    /// Reduces `row` against the basis and stores the remainder if nonzero.
    /// Returns true when the rank grew.
    bool insert(std::span<const residue> row);
    /// True when `row` lies in the current row space.
    bool contains(std::span<const residue> row) const;

    std::size_t rank() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<std::vector<residue>>& basis() const noexcept { return rows_; }
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

    /// Reduced-echelon basis of {x : r . x = 0 for every inserted row r}.
    std::vector<std::vector<residue>> null_space() const;

    /// Coordinates of `row` in the stored basis, written to `out`.
    /// Returns false when `row` lies outside the span.
    bool coordinates(std::span<const residue> row, std::vector<residue>& out) const;

  private:
    void reduce(std::vector<residue>& row) const;

    PrimeField field_;
    std::size_t cols_;
    std::vector<std::vector<residue>> rows_;
    std::vector<std::size_t> pivots_;  // sorted ascending, parallel to rows_
};

/**
 * Maintains a basis of the solution space of a growing homogeneous system.
 *
 * Starts from the whole space F_p^cols and intersects with r . x = 0 for
 * every constraint row. Cheap when the solution space is small, which is the
 * regime of tall invariance systems.
 */
class NullSpaceFilter {
  public:
    NullSpaceFilter(const PrimeField& field, std::size_t cols);

    void constrain(std::span<const residue> row);
    std::size_t dimension() const noexcept { return basis_.size(); }
    bool empty() const noexcept { return basis_.empty(); }

    /// Basis in reduced row echelon form.
    std::vector<std::vector<residue>> reduced_basis() const;

  private:
    PrimeField field_;
    std::size_t cols_;
    std::vector<std::vector<residue>> basis_;
};

/// Reduced row echelon form of the span of `vectors` (zero vectors dropped).
std::vector<std::vector<residue>> rref(const PrimeField& field,
                                       std::vector<std::vector<residue>> vectors,
                                       std::size_t cols);

std::vector<FpVector> null_space(const FpMatrix& m);
std::size_t rank(const FpMatrix& m);

FpVector to_scalars(const PrimeField& field, std::span<const residue> raw);
std::vector<residue> to_residues(const FpVector& v);

}  // namespace divop::gfp

#endif  // DIVOP_GFP_HPP
