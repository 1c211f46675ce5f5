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

#include "divop/divpow.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace divop {

Shape::Shape(const PrimeField& field, std::vector<unsigned> heights)
    : field_(field), heights_(std::move(heights)) {
    if (heights_.empty()) throw std::invalid_argument("Shape: at least one variable required");
    for (unsigned h : heights_) {
        if (h == 0) throw std::invalid_argument("Shape: heights must be positive");
        std::uint64_t e = 1;
        for (unsigned k = 0; k < h; ++k) {
            e *= field_.p();
            if (e > (1u << 24)) throw std::invalid_argument("Shape: algebra too large");
        }
        extents_.push_back(e);
        dimension_ *= e;
        if (dimension_ > (1u << 24)) throw std::invalid_argument("Shape: algebra too large");
    }
    strides_.assign(heights_.size(), 1);
    for (std::size_t i = heights_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * extents_[i];
}

std::size_t Shape::encode(const MultiIndex& r) const {
    if (!contains(r)) throw std::out_of_range("Shape::encode: multi-index outside the box");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < r.size(); ++i) idx += r[i] * strides_[i];
    return idx;
}

MultiIndex Shape::decode(std::size_t index) const {
    if (index >= dimension_) throw std::out_of_range("Shape::decode");
    MultiIndex r(m());
    for (std::size_t i = 0; i < m(); ++i) {
        r[i] = index / strides_[i];
        index %= strides_[i];
    }
    return r;
}

bool Shape::contains(const MultiIndex& r) const noexcept {
    if (r.size() != m()) return false;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] >= extents_[i]) return false;
    return true;
}

MultiIndex tau(const Shape& shape) {
    MultiIndex t(shape.m());
    for (std::size_t i = 0; i < shape.m(); ++i) t[i] = shape.extent(i) - 1;
    return t;
}

AlgebraElement::AlgebraElement(const Shape& shape) : shape_(shape), coeffs_(shape.dimension(), 0) {}

AlgebraElement AlgebraElement::monomial(const Shape& shape, const MultiIndex& r, std::int64_t coeff) {
    AlgebraElement e(shape);
    e.coeffs_[shape.encode(r)] = shape.field().reduce(coeff);
    return e;
}

Scalar AlgebraElement::coeff(const MultiIndex& r) const {
    return shape_.field()(coeffs_[shape_.encode(r)]);
}

void AlgebraElement::set(const MultiIndex& r, const Scalar& value) {
    if (value.modulus() != shape_.field().p())
        throw gfp::FieldMismatch("AlgebraElement::set: foreign scalar");
    coeffs_[shape_.encode(r)] = value.value();
}

bool AlgebraElement::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](residue x) { return x == 0; });
}

void AlgebraElement::check_shape(const AlgebraElement& o) const {
    if (shape_.field().p() != o.shape_.field().p())
        throw gfp::FieldMismatch("AlgebraElement: elements over different fields");
    if (!(shape_ == o.shape_)) throw std::invalid_argument("AlgebraElement: shape mismatch");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    check_shape(o);
    AlgebraElement r(shape_);
    const auto& F = shape_.field();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = F.add(coeffs_[i], o.coeffs_[i]);
    return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    check_shape(o);
    AlgebraElement r(shape_);
    const auto& F = shape_.field();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = F.sub(coeffs_[i], o.coeffs_[i]);
    return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const { return multiply(*this, o); }

AlgebraElement AlgebraElement::scaled(const Scalar& s) const {
    if (s.modulus() != shape_.field().p()) throw gfp::FieldMismatch("AlgebraElement::scaled");
    AlgebraElement r(shape_);
    const auto& F = shape_.field();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = F.mul(coeffs_[i], s.value());
    return r;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    check_shape(o);
    return coeffs_ == o.coeffs_;
}

AlgebraElement multiply(const AlgebraElement& f, const AlgebraElement& g) {
    if (f.shape().field().p() != g.shape().field().p())
        throw gfp::FieldMismatch("multiply: elements over different fields");
    if (!(f.shape() == g.shape())) throw std::invalid_argument("multiply: shape mismatch");
    const Shape& S = f.shape();
    const auto& F = S.field();
    const std::uint32_t p = F.p();
    AlgebraElement out(S);
    std::vector<MultiIndex> idx(S.dimension());
    for (std::size_t x = 0; x < S.dimension(); ++x) idx[x] = S.decode(x);
    MultiIndex sum(S.m());
    for (std::size_t x = 0; x < S.dimension(); ++x) {
        const residue fx = f.coeffs()[x];
        if (fx == 0) continue;
        for (std::size_t y = 0; y < S.dimension(); ++y) {
            const residue gy = g.coeffs()[y];
            if (gy == 0) continue;
            residue c = F.mul(fx, gy);
            bool inside = true;
            for (std::size_t i = 0; i < S.m() && c != 0; ++i) {
                sum[i] = idx[x][i] + idx[y][i];
                c = F.mul(c, gfp::binom_residue(sum[i], idx[x][i], p));
                if (sum[i] >= S.extent(i)) inside = false;
            }
            if (c == 0) continue;
            // A nonzero structure constant never leaves the box (base-p carry).
            assert(inside);
            if (!inside) continue;
            const std::size_t z = S.encode(sum);
            out.coeffs()[z] = F.add(out.coeffs()[z], c);
        }
    }
    return out;
}

AlgebraElement partial(std::size_t i, const AlgebraElement& f) { return iterated_partial(i, 1, f); }

AlgebraElement iterated_partial(std::size_t i, std::uint64_t order, const AlgebraElement& f) {
    const Shape& S = f.shape();
    if (i < 1 || i > S.m()) throw std::out_of_range("partial: variable index out of range");
    AlgebraElement out(S);
    if (order == 0) return f;
    if (order >= S.extent(i - 1)) return out;
    for (std::size_t x = 0; x < S.dimension(); ++x) {
        if (f.coeffs()[x] == 0) continue;
        MultiIndex r = S.decode(x);
        if (r[i - 1] < order) continue;
        r[i - 1] -= order;
        out.coeffs()[S.encode(r)] = f.coeffs()[x];
    }
    return out;
}

std::string render(const AlgebraElement& f) {
    const Shape& S = f.shape();
    std::ostringstream os;
    bool first = true;
    for (std::size_t x = 0; x < S.dimension(); ++x) {
        const residue c = f.coeffs()[x];
        if (c == 0) continue;
        const MultiIndex r = S.decode(x);
        const bool constant = std::all_of(r.begin(), r.end(), [](std::uint64_t v) { return v == 0; });
        if (!first) os << " + ";
        first = false;
        bool need_dot = false;
        if (c != 1 || constant) {
            os << c;
            need_dot = true;
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i] == 0) continue;
            if (need_dot) os << "·";
            os << 'u' << (i + 1) << "^(" << r[i] << ')';
            need_dot = true;
        }
    }
    return first ? "0" : os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(const std::string& token) {
        skip_space();
        if (s.compare(pos, token.size(), token) == 0) {
            pos += token.size();
            return true;
        }
        return false;
    }
    bool at_digit() {
        skip_space();
        return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
    }
    std::uint64_t number() {
        if (!at_digit()) fail("expected a number");
        std::uint64_t v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
            if (v > (1ull << 40)) fail("number too large");
            ++pos;
        }
        return v;
    }
    bool done() {
        skip_space();
        return pos == s.size();
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("parse_element: " + what + " at offset " + std::to_string(pos) +
                                    " in \"" + s + "\"");
    }
};

}  // namespace

AlgebraElement parse_element(const Shape& shape, const std::string& text) {
    const auto& F = shape.field();
    AlgebraElement out(shape);
    Cursor cur{text};
    if (cur.done()) cur.fail("empty input");
    bool negative = cur.eat("-");
    while (true) {
        std::int64_t coeff = 1;
        MultiIndex r(shape.m(), 0);
        std::vector<bool> seen(shape.m(), false);
        bool have_factor = false;
        if (cur.at_digit()) {
            coeff = static_cast<std::int64_t>(cur.number());
            have_factor = true;
        }
        while (true) {
            const bool separated = cur.eat("·") || cur.eat("*");
            if (!cur.eat("u")) {
                if (separated) cur.fail("expected a variable");
                break;
            }
            std::size_t var = 1;
            if (cur.at_digit()) var = static_cast<std::size_t>(cur.number());
            if (var < 1 || var > shape.m()) cur.fail("variable index out of range");
            if (seen[var - 1]) cur.fail("repeated variable");
            seen[var - 1] = true;
            if (!cur.eat("^(")) cur.fail("expected ^(");
            r[var - 1] = cur.number();
            if (!cur.eat(")")) cur.fail("expected )");
            have_factor = true;
        }
        if (!have_factor) cur.fail("expected a term");
        if (!shape.contains(r)) cur.fail("monomial outside the box");
        const std::size_t z = shape.encode(r);
        const residue c = F.reduce(negative ? -coeff : coeff);
        out.coeffs()[z] = F.add(out.coeffs()[z], c);
        if (cur.done()) break;
        if (cur.eat("+"))
            negative = false;
        else if (cur.eat("-"))
            negative = true;
        else
            cur.fail("expected + or -");
    }
    return out;
}

}  // namespace divop
