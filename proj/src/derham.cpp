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

#include "divop/derham.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace divop {

namespace {

unsigned popcount(FormMask S) { return static_cast<unsigned>(std::popcount(S)); }

std::vector<FormMask> subsets_of_size(std::size_t m, unsigned q) {
    std::vector<FormMask> out;
    for (FormMask S = 0; S < (FormMask{1} << m); ++S)
        if (popcount(S) == q) out.push_back(S);
    return out;
}

// Sign of du_S ^ du_T against du_{S u T} in increasing order.
int wedge_sign(FormMask S, FormMask T) {
    unsigned inversions = 0;
    for (FormMask rest = T; rest; rest &= rest - 1) {
        const FormMask t = rest & (~rest + 1);
        inversions += popcount(S & ~(t | (t - 1)));
    }
    return inversions % 2 ? -1 : 1;
}

std::string mask_name(FormMask S) {
    std::string out;
    for (unsigned i = 0; S >> i; ++i) {
        if (!((S >> i) & 1)) continue;
        if (!out.empty()) out += "^";
        out += "du" + std::to_string(i + 1);
    }
    return out;
}

// Basis forms u^(r) du_S, grouped by r + 1_S, which d preserves.
struct Basis {
    std::vector<std::pair<std::size_t, FormMask>> elems;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> blocks;
};

std::uint64_t weight_key(const Shape& sh, const MultiIndex& r, FormMask S) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < sh.m(); ++i) key = key * (sh.extent(i) + 1) + r[i] + ((S >> i) & 1);
    return key;
}

Basis basis_of(const Shape& sh, unsigned q) {
    Basis B;
    if (q > sh.m()) return B;
    for (FormMask S : subsets_of_size(sh.m(), q))
        for (std::size_t x = 0; x < sh.dimension(); ++x) {
            B.blocks[weight_key(sh, sh.decode(x), S)].push_back(B.elems.size());
            B.elems.emplace_back(x, S);
        }
    return B;
}

DifferentialForm basis_form(const Shape& sh, unsigned q, std::size_t x, FormMask S) {
    DifferentialForm w(sh, q);
    w.set_component(S, AlgebraElement::monomial(sh, sh.decode(x)));
    return w;
}

// Coordinates of w restricted to the listed basis elements.
std::vector<residue> coordinates(const DifferentialForm& w, const Basis& B, const std::vector<std::size_t>& block) {
    std::vector<residue> v(block.size(), 0);
    for (std::size_t c = 0; c < block.size(); ++c) {
        const auto& [x, S] = B.elems[block[c]];
        v[c] = w.component(S).coeffs()[x];
    }
    return v;
}

DifferentialForm from_coordinates(const Shape& sh, unsigned q, const Basis& B, const std::vector<std::size_t>& block,
                                  const std::vector<residue>& v) {
    DifferentialForm w(sh, q);
    for (std::size_t c = 0; c < block.size(); ++c) {
        if (!v[c]) continue;
        const auto& [x, S] = B.elems[block[c]];
        AlgebraElement f = w.component(S);
        f.coeffs()[x] = v[c];
        w.set_component(S, std::move(f));
    }
    return w;
}

// Images under d of the degree-q basis elements of one block, in the
// coordinates of the matching degree-(q+1) block.
std::vector<std::vector<residue>> block_images(const Shape& sh, unsigned q, const Basis& from,
                                               const std::vector<std::size_t>& from_block, const Basis& to,
                                               const std::vector<std::size_t>& to_block) {
    std::vector<std::vector<residue>> rows;
    for (std::size_t e : from_block) {
        const auto& [x, S] = from.elems[e];
        rows.push_back(coordinates(exterior_d(basis_form(sh, q, x, S)), to, to_block));
    }
    return rows;
}

}  // namespace

DifferentialForm::DifferentialForm(const Shape& shape, unsigned degree)
    : shape_(shape), degree_(degree), zero_(shape) {
    if (shape.m() > 16) throw std::invalid_argument("DifferentialForm: at most 16 variables");
    if (degree > shape.m())
        throw std::invalid_argument("DifferentialForm: degree " + std::to_string(degree) + " exceeds m = " +
                                    std::to_string(shape.m()));
}

DifferentialForm DifferentialForm::function(const AlgebraElement& f) {
    DifferentialForm w(f.shape(), 0);
    w.set_component(0, f);
    return w;
}

DifferentialForm DifferentialForm::monomial(const Shape& shape, const MultiIndex& r,
                                            const std::vector<unsigned>& vars, std::int64_t coeff) {
    DifferentialForm w(shape, static_cast<unsigned>(vars.size()));
    FormMask S = 0;
    int sign = 1;
    for (unsigned v : vars) {
        if (v == 0 || v > shape.m()) throw std::invalid_argument("DifferentialForm: variable out of range");
        const FormMask bit = FormMask{1} << (v - 1);
        if (S & bit) return w;
        sign *= wedge_sign(S, bit);
        S |= bit;
    }
    w.set_component(S, AlgebraElement::monomial(shape, r, sign * coeff));
    return w;
}

DifferentialForm DifferentialForm::volume(const Shape& shape, const MultiIndex& r, std::int64_t coeff) {
    std::vector<unsigned> vars;
    for (unsigned i = 1; i <= shape.m(); ++i) vars.push_back(i);
    return monomial(shape, r, vars, coeff);
}

std::vector<FormMask> DifferentialForm::subsets() const { return subsets_of_size(shape_.m(), degree_); }

const AlgebraElement& DifferentialForm::component(FormMask S) const {
    const auto it = parts_.find(S);
    return it == parts_.end() ? zero_ : it->second;
}

void DifferentialForm::set_component(FormMask S, AlgebraElement f) {
    if (popcount(S) != degree_ || (S >> shape_.m()))
        throw std::invalid_argument("DifferentialForm: subset does not match the degree");
    if (!(f.shape() == shape_)) throw std::invalid_argument("DifferentialForm: shape mismatch");
    if (f.is_zero())
        parts_.erase(S);
    else
        parts_.insert_or_assign(S, std::move(f));
}

bool DifferentialForm::is_zero() const noexcept { return parts_.empty(); }

void DifferentialForm::check(const DifferentialForm& o) const {
    if (!(shape_ == o.shape_) || degree_ != o.degree_)
        throw std::invalid_argument("DifferentialForm: shape or degree mismatch");
}

DifferentialForm DifferentialForm::operator+(const DifferentialForm& o) const {
    check(o);
    DifferentialForm out = *this;
    for (const auto& [S, f] : o.parts_) out.set_component(S, out.component(S) + f);
    return out;
}

DifferentialForm DifferentialForm::operator-(const DifferentialForm& o) const {
    check(o);
    DifferentialForm out = *this;
    for (const auto& [S, f] : o.parts_) out.set_component(S, out.component(S) - f);
    return out;
}

DifferentialForm DifferentialForm::scaled(const Scalar& s) const {
    DifferentialForm out(shape_, degree_);
    for (const auto& [S, f] : parts_) out.set_component(S, f.scaled(s));
    return out;
}

bool DifferentialForm::operator==(const DifferentialForm& o) const {
    check(o);
    return parts_ == o.parts_;
}

DifferentialForm exterior_d(const DifferentialForm& w) {
    const Shape& sh = w.shape();
    const unsigned q = w.degree();
    if (q >= sh.m()) return DifferentialForm(sh, std::min<unsigned>(q + 1, static_cast<unsigned>(sh.m())));
    DifferentialForm out(sh, q + 1);
    const PrimeField& F = sh.field();
    for (FormMask S : w.subsets()) {
        const AlgebraElement& f = w.component(S);
        if (f.is_zero()) continue;
        for (std::size_t i = 0; i < sh.m(); ++i) {
            const FormMask bit = FormMask{1} << i;
            if (S & bit) continue;
            AlgebraElement df = partial(i + 1, f);
            if (df.is_zero()) continue;
            if (wedge_sign(bit, S) < 0) df = df.scaled(Scalar(F, -1));
            out.set_component(S | bit, out.component(S | bit) + df);
        }
    }
    return out;
}

DifferentialForm cup_product(const DifferentialForm& x, const DifferentialForm& y) {
    const Shape& sh = x.shape();
    if (!(sh == y.shape())) throw std::invalid_argument("cup_product: shape mismatch");
    if (x.degree() + y.degree() > sh.m()) throw std::invalid_argument("cup_product: degree exceeds m");
    DifferentialForm out(sh, x.degree() + y.degree());
    for (FormMask S : x.subsets()) {
        const AlgebraElement& f = x.component(S);
        if (f.is_zero()) continue;
        for (FormMask T : y.subsets()) {
            if (S & T) continue;
            const AlgebraElement& g = y.component(T);
            if (g.is_zero()) continue;
            AlgebraElement fg = multiply(f, g);
            if (wedge_sign(S, T) < 0) fg = fg.scaled(Scalar(sh.field(), -1));
            out.set_component(S | T, out.component(S | T) + fg);
        }
    }
    return out;
}

Scalar berezin_integral(const DifferentialForm& w) {
    const Shape& sh = w.shape();
    if (w.degree() != sh.m())
        throw std::invalid_argument("berezin_integral: expected a form of degree " + std::to_string(sh.m()) +
                                    ", got " + std::to_string(w.degree()));
    const FormMask top = static_cast<FormMask>((FormMask{1} << sh.m()) - 1);
    return w.component(top).coeff(tau(sh));
}

std::uint64_t berezin_order(const Shape& shape) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < shape.m(); ++i) total += shape.extent(i);
    return total - shape.m();
}

DifferentialForm standard_representative(const Shape& shape, FormMask S) {
    MultiIndex r(shape.m(), 0);
    const MultiIndex top = tau(shape);
    for (std::size_t i = 0; i < shape.m(); ++i)
        if ((S >> i) & 1) r[i] = top[i];
    DifferentialForm w(shape, popcount(S));
    w.set_component(S, AlgebraElement::monomial(shape, r));
    return w;
}

Cohomology cohomology(const Shape& shape, unsigned q) {
    if (q > shape.m())
        throw std::invalid_argument("cohomology: degree " + std::to_string(q) + " exceeds m = " +
                                    std::to_string(shape.m()));
    const PrimeField& F = shape.field();
    const Basis below = q > 0 ? basis_of(shape, q - 1) : Basis{};
    const Basis here = basis_of(shape, q);
    const Basis above = basis_of(shape, q + 1);
    const std::vector<std::size_t> none;
    auto block_in = [&](const Basis& B, std::uint64_t key) -> const std::vector<std::size_t>& {
        const auto it = B.blocks.find(key);
        return it == B.blocks.end() ? none : it->second;
    };

    Cohomology H;
    H.q = q;
    H.forms = here.elems.size();
    std::unordered_map<std::uint64_t, gfp::RowEchelon> exact_by_block;
    std::vector<DifferentialForm> echelon_reps;

    std::vector<std::uint64_t> keys;
    for (const auto& [key, _] : here.blocks) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t key : keys) {
        const auto& block = here.blocks.at(key);
        const auto& up = block_in(above, key);
        const auto& down = block_in(below, key);

        // Z^q on this block: null space of d written as columns of the block.
        std::vector<std::vector<residue>> closed;
        if (up.empty()) {
            for (std::size_t c = 0; c < block.size(); ++c) {
                std::vector<residue> e(block.size(), 0);
                e[c] = 1;
                closed.push_back(std::move(e));
            }
        } else {
            const auto images = block_images(shape, q, here, block, above, up);
            gfp::RowEchelon d_rows(F, block.size());
            std::vector<residue> row(block.size());
            for (std::size_t r = 0; r < up.size(); ++r) {
                for (std::size_t c = 0; c < block.size(); ++c) row[c] = images[c][r];
                d_rows.insert(row);
            }
            closed = d_rows.null_space();
        }
        H.closed += closed.size();

        gfp::RowEchelon exact(F, block.size());
        if (!down.empty())
            for (auto& row : block_images(shape, q - 1, below, down, here, block)) exact.insert(row);
        H.exact += exact.rank();

        // Complement of B^q in Z^q, greedily.
        gfp::RowEchelon span = exact;
        for (const auto& z : closed)
            if (span.insert(z)) echelon_reps.push_back(from_coordinates(shape, q, here, block, z));
        exact_by_block.emplace(key, std::move(exact));
    }
    H.dimension = H.closed - H.exact;

    // The standard monomials sit in distinct blocks, so independence modulo
    // B^q is checked block by block.
    std::vector<DifferentialForm> standard;
    bool ok = true;
    for (FormMask S : subsets_of_size(shape.m(), q)) {
        DifferentialForm w = standard_representative(shape, S);
        if (!exterior_d(w).is_zero()) ok = false;
        MultiIndex r(shape.m(), 0);
        for (std::size_t i = 0; i < shape.m(); ++i)
            if ((S >> i) & 1) r[i] = shape.extent(i) - 1;
        const std::uint64_t key = weight_key(shape, r, S);
        const auto it = exact_by_block.find(key);
        if (it == exact_by_block.end() || it->second.contains(coordinates(w, here, here.blocks.at(key)))) ok = false;
        standard.push_back(std::move(w));
    }
    H.standard_basis = ok && standard.size() == H.dimension;
    H.representatives = ok ? standard : echelon_reps;
    return H;
}

std::size_t reduced_h0(const Shape& shape) { return cohomology(shape, 0).closed - 1; }

std::string render(const DifferentialForm& w) {
    std::string out;
    for (FormMask S : w.subsets()) {
        const AlgebraElement& f = w.component(S);
        if (f.is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string body = render(f);
        const bool compound = body.find(" + ") != std::string::npos || body.find(" - ") != std::string::npos;
        if (S == 0) {
            out += compound ? "(" + body + ")" : body;
        } else if (body == "1") {
            out += mask_name(S);
        } else {
            out += (compound ? "(" + body + ")" : body) + " " + mask_name(S);
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace divop
