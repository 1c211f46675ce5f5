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

#include "divop/gfp.hpp"

#include <algorithm>

namespace divop::gfp {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p))
        throw std::invalid_argument("PrimeField: " + std::to_string(p) + " is not prime");
}

Scalar PrimeField::operator()(std::int64_t value) const { return Scalar(*this, value); }
Scalar PrimeField::zero() const { return Scalar(*this, 0); }
Scalar PrimeField::one() const { return Scalar(*this, 1); }

residue PrimeField::pow(residue x, std::uint64_t e) const noexcept {
    residue result = 1 % p_;
    residue base = x;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

residue PrimeField::inv(residue x) const {
    if (x % p_ == 0) throw std::domain_error("PrimeField::inv: zero has no inverse");
    return pow(x, p_ - 2);
}

void Scalar::check_same(const Scalar& o) const {
    if (p_ != o.p_)
        throw FieldMismatch("scalars over F_" + std::to_string(p_) + " and F_" +
                            std::to_string(o.p_) + " combined");
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    residue s = value_ + o.value_;
    return {s >= p_ ? s - p_ : s, p_, 0};
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same(o);
    return {value_ >= o.value_ ? value_ - o.value_ : value_ + p_ - o.value_, p_, 0};
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    return {static_cast<residue>(static_cast<std::uint64_t>(value_) * o.value_ % p_), p_, 0};
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const { return {value_ == 0 ? 0 : p_ - value_, p_, 0}; }

Scalar Scalar::inverse() const { return {PrimeField(p_).inv(value_), p_, 0}; }

Scalar Scalar::pow(std::uint64_t e) const { return {PrimeField(p_).pow(value_, e), p_, 0}; }

bool Scalar::operator==(const Scalar& o) const {
    check_same(o);
    return value_ == o.value_;
}

std::int64_t Scalar::balanced() const noexcept {
    std::int64_t v = value_;
    return 2 * v > static_cast<std::int64_t>(p_) ? v - p_ : v;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.value(); }

residue binom_residue(std::uint64_t n, std::uint64_t k, std::uint32_t p) noexcept {
    if (k > n) return 0;
    std::uint64_t result = 1;
    while (k > 0 || n > 0) {
        std::uint64_t nd = n % p;
        std::uint64_t kd = k % p;
        if (kd > nd) return 0;
        // C(nd, kd) for digits < p, by the multiplicative formula mod p.
        std::uint64_t num = 1;
        std::uint64_t den = 1;
        for (std::uint64_t i = 0; i < kd; ++i) {
            num = num * ((nd - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        // den is a product of integers in [1, p-1], hence invertible.
        std::uint64_t inv = 1;
        std::uint64_t base = den;
        for (std::uint64_t e = p - 2; e > 0; e >>= 1) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
        }
        result = result * (num * inv % p) % p;
        n /= p;
        k /= p;
    }
    return static_cast<residue>(result);
}

Scalar binom_mod_p(std::uint64_t n, std::uint64_t k, const PrimeField& field) {
    return field(binom_residue(n, k, field.p()));
}

FpMatrix::FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Scalar FpMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("FpMatrix::at");
    return field_(data_[r * cols_ + c]);
}

void FpMatrix::set(std::size_t r, std::size_t c, const Scalar& value) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("FpMatrix::set");
    if (value.modulus() != field_.p()) throw FieldMismatch("FpMatrix::set: foreign scalar");
    data_[r * cols_ + c] = value.value();
}

void FpMatrix::append_row(std::span<const residue> entries) {
    if (entries.size() != cols_) throw std::invalid_argument("FpMatrix::append_row: width");
    data_.insert(data_.end(), entries.begin(), entries.end());
    ++rows_;
}

FpMatrix FpMatrix::identity(const PrimeField& field, std::size_t n) {
    FpMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

RowEchelon::RowEchelon(const PrimeField& field, std::size_t cols) : field_(field), cols_(cols) {}

void RowEchelon::reduce(std::vector<residue>& row) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const residue f = row[pivots_[k]];
        if (f == 0) continue;
        const residue nf = field_.neg(f);
        const auto& b = rows_[k];
        for (std::size_t c = pivots_[k]; c < cols_; ++c)
            if (b[c] != 0) row[c] = field_.add(row[c], field_.mul(nf, b[c]));
    }
}

bool RowEchelon::insert(std::span<const residue> in) {
    if (in.size() != cols_) throw std::invalid_argument("RowEchelon::insert: width");
    std::vector<residue> row(in.begin(), in.end());
    reduce(row);
    auto it = std::find_if(row.begin(), row.end(), [](residue x) { return x != 0; });
    if (it == row.end()) return false;
    const std::size_t pc = static_cast<std::size_t>(it - row.begin());
    const residue inv = field_.inv(row[pc]);
    for (std::size_t c = pc; c < cols_; ++c) row[c] = field_.mul(row[c], inv);
    for (auto& b : rows_) {
        const residue f = b[pc];
        if (f == 0) continue;
        const residue nf = field_.neg(f);
        for (std::size_t c = pc; c < cols_; ++c)
            if (row[c] != 0) b[c] = field_.add(b[c], field_.mul(nf, row[c]));
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pc);
    const auto offset = pos - pivots_.begin();
    pivots_.insert(pos, pc);
    rows_.insert(rows_.begin() + offset, std::move(row));
    return true;
}

bool RowEchelon::contains(std::span<const residue> in) const {
    std::vector<residue> row(in.begin(), in.end());
    reduce(row);
    return std::all_of(row.begin(), row.end(), [](residue x) { return x == 0; });
}

bool RowEchelon::coordinates(std::span<const residue> in, std::vector<residue>& out) const {
    out.assign(rows_.size(), 0);
    for (std::size_t k = 0; k < rows_.size(); ++k) out[k] = in[pivots_[k]];
    // The basis is reduced, so the coordinates are read off at the pivots.
    std::vector<residue> check(cols_, 0);
    for (std::size_t k = 0; k < rows_.size(); ++k)
        if (out[k] != 0)
            for (std::size_t c = 0; c < cols_; ++c)
                check[c] = field_.add(check[c], field_.mul(out[k], rows_[k][c]));
    return std::equal(check.begin(), check.end(), in.begin());
}

std::vector<std::vector<residue>> RowEchelon::null_space() const {
    std::vector<std::vector<residue>> basis;
    std::size_t k = 0;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (k < pivots_.size() && pivots_[k] == f) {
            ++k;
            continue;
        }
        std::vector<residue> v(cols_, 0);
        v[f] = 1;
        for (std::size_t j = 0; j < rows_.size(); ++j) v[pivots_[j]] = field_.neg(rows_[j][f]);
        basis.push_back(std::move(v));
    }
    return rref(field_, std::move(basis), cols_);
}

NullSpaceFilter::NullSpaceFilter(const PrimeField& field, std::size_t cols)
    : field_(field), cols_(cols) {
    for (std::size_t i = 0; i < cols; ++i) {
        std::vector<residue> e(cols, 0);
        e[i] = 1;
        basis_.push_back(std::move(e));
    }
}

void NullSpaceFilter::constrain(std::span<const residue> row) {
    if (basis_.empty()) return;
    std::vector<residue> dots(basis_.size(), 0);
    bool any = false;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        std::uint64_t acc = 0;
        const auto& b = basis_[j];
        for (std::size_t c = 0; c < cols_; ++c)
            if (row[c] != 0 && b[c] != 0) acc += static_cast<std::uint64_t>(row[c]) * b[c];
        dots[j] = static_cast<residue>(acc % field_.p());
        any = any || dots[j] != 0;
    }
    if (!any) return;
    const std::size_t pj = static_cast<std::size_t>(
        std::find_if(dots.begin(), dots.end(), [](residue x) { return x != 0; }) - dots.begin());
    const residue inv = field_.inv(dots[pj]);
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        if (j == pj || dots[j] == 0) continue;
        const residue f = field_.neg(field_.mul(dots[j], inv));
        for (std::size_t c = 0; c < cols_; ++c)
            if (basis_[pj][c] != 0) basis_[j][c] = field_.add(basis_[j][c], field_.mul(f, basis_[pj][c]));
    }
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(pj));
}

std::vector<std::vector<residue>> NullSpaceFilter::reduced_basis() const {
    return rref(field_, basis_, cols_);
}

std::vector<std::vector<residue>> rref(const PrimeField& field,
                                       std::vector<std::vector<residue>> vectors,
                                       std::size_t cols) {
    RowEchelon ech(field, cols);
    for (const auto& v : vectors) ech.insert(v);
    return ech.basis();
}

std::vector<FpVector> null_space(const FpMatrix& m) {
    RowEchelon ech(m.field(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        ech.insert(m.row(r));
        if (ech.rank() == m.cols()) break;
    }
    std::vector<FpVector> out;
    for (const auto& v : ech.null_space()) out.push_back(to_scalars(m.field(), v));
    return out;
}

std::size_t rank(const FpMatrix& m) {
    RowEchelon ech(m.field(), m.cols());
    for (std::size_t r = 0; r < m.rows() && ech.rank() < m.cols(); ++r) ech.insert(m.row(r));
    return ech.rank();
}

FpVector to_scalars(const PrimeField& field, std::span<const residue> raw) {
    FpVector v;
    v.reserve(raw.size());
    for (residue x : raw) v.push_back(field(x));
    return v;
}

std::vector<residue> to_residues(const FpVector& v) {
    std::vector<residue> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(s.value());
    return out;
}

}  // namespace divop::gfp
