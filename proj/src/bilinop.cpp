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

#include "divop/bilinop.hpp"

#include <sstream>
#include <stdexcept>

namespace divop {

namespace {

std::uint64_t ipow(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

std::int64_t sign(std::uint64_t i) { return (i % 2 == 0) ? 1 : -1; }

/// Binomial of an integer top, negative tops by upper negation.
residue signed_binom(std::int64_t top, std::uint64_t bottom, std::uint32_t p) {
    if (top >= 0) return gfp::binom_residue(static_cast<std::uint64_t>(top), bottom, p);
    const std::uint64_t x = static_cast<std::uint64_t>(-top);
    const residue v = gfp::binom_residue(x + bottom - 1, bottom, p);
    return (bottom % 2 == 0 || v == 0) ? v : p - v;
}

void check_field(const Scalar& s, const PrimeField& F, const char* who) {
    if (s.modulus() != F.p()) throw gfp::FieldMismatch(std::string(who) + ": weight over another field");
}

bool needs_parens(const std::string& name) {
    return name.find("⊗") != std::string::npos || name.find("∘") != std::string::npos ||
           name.find(' ') != std::string::npos;
}

std::string dual_name(const std::string& name, int slot) {
    if (name.empty()) return {};
    const std::string tag = "^{*" + std::to_string(slot) + "}";
    return needs_parens(name) ? "(" + name + ")" + tag : name + tag;
}

}  // namespace

BilinearOperator::BilinearOperator(const PrimeField& field, const Scalar& a, const Scalar& b,
                                   const Scalar& c, std::string name)
    : field_(field), a_(a), b_(b), c_(c), name_(std::move(name)) {
    check_field(a, field, "BilinearOperator");
    check_field(b, field, "BilinearOperator");
    check_field(c, field, "BilinearOperator");
}

BilinearOperator BilinearOperator::homogeneous(const PrimeField& field, const Scalar& a, const Scalar& b,
                                               std::uint64_t k, std::string name) {
    return BilinearOperator(field, a, b, a + b + field(static_cast<std::int64_t>(k % field.p())),
                            std::move(name));
}

Scalar BilinearOperator::coefficient(std::uint64_t i, std::uint64_t j) const {
    auto it = coeffs_.find({i, j});
    return field_(it == coeffs_.end() ? 0 : it->second);
}

void BilinearOperator::set(std::uint64_t i, std::uint64_t j, const Scalar& value) {
    check_field(value, field_, "BilinearOperator::set");
    if (value.is_zero())
        coeffs_.erase({i, j});
    else
        coeffs_[{i, j}] = value.value();
}

void BilinearOperator::add(std::uint64_t i, std::uint64_t j, std::int64_t value) {
    set(i, j, coefficient(i, j) + field_(value));
}

std::uint64_t BilinearOperator::order() const noexcept {
    std::uint64_t k = 0;
    for (const auto& [ij, v] : coeffs_) k = std::max(k, ij.first + ij.second);
    return k;
}

bool BilinearOperator::is_homogeneous() const {
    const std::uint64_t k = order();
    for (const auto& [ij, v] : coeffs_)
        if (ij.first + ij.second != k) return false;
    return c_ == a_ + b_ + field_(static_cast<std::int64_t>(k % field_.p()));
}

BilinearOperator BilinearOperator::canonical(unsigned N) const {
    const std::uint64_t n = ipow(field_.p(), N);
    BilinearOperator out(field_, a_, b_, c_, name_);
    for (const auto& [ij, v] : coeffs_)
        if (ij.first < n && ij.second < n) out.coeffs_[ij] = v;
    return out;
}

BilinearOperator BilinearOperator::scaled(const Scalar& s) const {
    check_field(s, field_, "BilinearOperator::scaled");
    BilinearOperator out(field_, a_, b_, c_);
    if (s.is_zero()) return out;
    for (const auto& [ij, v] : coeffs_) out.coeffs_[ij] = field_.mul(v, s.value());
    return out;
}

BilinearOperator BilinearOperator::operator+(const BilinearOperator& o) const {
    if (!same_weights(o)) throw std::invalid_argument("BilinearOperator: adding operators of different weights");
    BilinearOperator out = *this;
    out.name_.clear();
    for (const auto& [ij, v] : o.coeffs_) out.add(ij.first, ij.second, v);
    return out;
}

bool BilinearOperator::same_weights(const BilinearOperator& o) const {
    if (field_.p() != o.field_.p()) throw gfp::FieldMismatch("BilinearOperator: different fields");
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
}

bool BilinearOperator::operator==(const BilinearOperator& o) const {
    return same_weights(o) && coeffs_ == o.coeffs_;
}

WeightedDensity apply(const BilinearOperator& D, const WeightedDensity& phi, const WeightedDensity& psi) {
    if (phi.weight != D.a() || psi.weight != D.b())
        throw std::invalid_argument("apply: density weights do not match the operator");
    AlgebraElement out(phi.shape());
    for (const auto& [ij, v] : D.coeffs()) {
        const AlgebraElement term = iterated_partial(1, ij.first, phi.f) * iterated_partial(1, ij.second, psi.f);
        out = out + term.scaled(D.field()(v));
    }
    return WeightedDensity(D.c(), std::move(out));
}

BilinearOperator swap_arguments(const BilinearOperator& D) {
    BilinearOperator out(D.field(), D.b(), D.a(), D.c());
    for (const auto& [ij, v] : D.coeffs()) out.set(ij.second, ij.first, D.field()(v));
    return out;
}

BilinearOperator dual1(const BilinearOperator& D) {
    const auto& F = D.field();
    BilinearOperator out(F, F.one() - D.c(), D.b(), F.one() - D.a(), dual_name(D.name(), 1));
    for (const auto& [ij, v] : D.coeffs()) {
        const auto [i, j] = ij;
        for (std::uint64_t s = 0; s <= i; ++s) {
            const residue bin = gfp::binom_residue(i, s, F.p());
            if (bin == 0) continue;
            out.add(i - s, j + s, sign(i) * static_cast<std::int64_t>(F.mul(bin, v)));
        }
    }
    return out;
}

BilinearOperator dual2(const BilinearOperator& D) {
    const auto& F = D.field();
    BilinearOperator out(F, D.a(), F.one() - D.c(), F.one() - D.b(), dual_name(D.name(), 2));
    for (const auto& [ij, v] : D.coeffs()) {
        const auto [i, j] = ij;
        for (std::uint64_t s = 0; s <= j; ++s) {
            const residue bin = gfp::binom_residue(j, s, F.p());
            if (bin == 0) continue;
            out.add(i + s, j - s, sign(j) * static_cast<std::int64_t>(F.mul(bin, v)));
        }
    }
    return out;
}

BilinearOperator precompose_d(const BilinearOperator& D, Slot slot) {
    const auto& F = D.field();
    const bool first = slot != Slot::second;
    const bool second = slot != Slot::first;
    if ((first && D.a() != F.one()) || (second && D.b() != F.one()))
        throw std::invalid_argument("precompose_d: the composed slot must have weight 1");
    BilinearOperator out(F, first ? F.zero() : D.a(), second ? F.zero() : D.b(), D.c());
    for (const auto& [ij, v] : D.coeffs())
        out.set(ij.first + (first ? 1 : 0), ij.second + (second ? 1 : 0), F(v));
    if (!D.name().empty()) {
        const char* tail = slot == Slot::both ? "∘(d⊗d)" : (slot == Slot::first ? "∘(d⊗id)" : "∘(id⊗d)");
        out.set_name(D.name() + tail);
    }
    return out;
}

std::optional<Scalar> equal_up_to_scalar(const BilinearOperator& D1, const BilinearOperator& D2, unsigned N) {
    if (!D1.same_weights(D2)) return std::nullopt;
    const BilinearOperator x = D1.canonical(N);
    const BilinearOperator y = D2.canonical(N);
    const auto& F = D1.field();
    if (y.is_zero()) return x.is_zero() ? std::optional<Scalar>(F.one()) : std::nullopt;
    const auto& [ij, v] = *y.coeffs().begin();
    const Scalar lambda = x.coefficient(ij.first, ij.second) / F(v);
    if (y.scaled(lambda).coeffs() != x.coeffs()) return std::nullopt;
    return lambda;
}

std::string render(const BilinearOperator& D) {
    if (D.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [ij, v] : D.coeffs()) {
        std::int64_t c = D.field()(v).balanced();
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (c < 0) c = -c;
        if (c != 1) os << c << "·";
        os << "f^(" << ij.first << ")g^(" << ij.second << ")";
    }
    return os.str();
}

nlohmann::json to_json(const BilinearOperator& D) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [ij, v] : D.coeffs()) coeffs.push_back({ij.first, ij.second, v});
    nlohmann::json j = {{"p", D.p()}, {"a", D.a().value()}, {"b", D.b().value()},
                        {"c", D.c().value()}, {"coeffs", coeffs}};
    if (!D.name().empty()) j["name"] = D.name();
    return j;
}

BilinearOperator operator_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw std::invalid_argument("operator JSON must be an object");
        const auto p = j.at("p").get<std::int64_t>();
        if (p < 2 || p > (1ll << 31)) throw std::invalid_argument("operator JSON: bad p");
        const PrimeField F(static_cast<std::uint32_t>(p));
        const Scalar a = F(j.at("a").get<std::int64_t>());
        const Scalar b = F(j.at("b").get<std::int64_t>());
        const auto& cs = j.at("coeffs");
        if (!cs.is_array()) throw std::invalid_argument("operator JSON: coeffs must be an array");
        std::uint64_t k = 0;
        for (const auto& e : cs) {
            if (!e.is_array() || e.size() != 3) throw std::invalid_argument("operator JSON: coeff entries are [i, j, v]");
            k = std::max(k, e.at(0).get<std::uint64_t>() + e.at(1).get<std::uint64_t>());
        }
        const Scalar c = j.contains("c") ? F(j.at("c").get<std::int64_t>())
                                         : a + b + F(static_cast<std::int64_t>(k % F.p()));
        BilinearOperator D(F, a, b, c, j.value("name", std::string{}));
        for (const auto& e : cs)
            D.add(e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>(), e.at(2).get<std::int64_t>());
        return D;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("operator JSON: ") + e.what());
    }
}

namespace named {

namespace {

std::string sub(const std::string& head, std::int64_t x, std::int64_t y) {
    return head + "_{" + std::to_string(x) + "," + std::to_string(y) + "}";
}

BilinearOperator hom(std::uint32_t p, std::int64_t a, std::int64_t b, std::uint64_t k, std::string name) {
    const PrimeField F(p);
    return BilinearOperator::homogeneous(F, F(a), F(b), k, std::move(name));
}

std::uint64_t exponent_order(std::uint32_t p, unsigned m, std::uint64_t minus, const char* who) {
    if (m < 1) throw std::invalid_argument(std::string(who) + ": m must be at least 1");
    const std::uint64_t q = ipow(p, m);
    if (q < minus) throw std::invalid_argument(std::string(who) + ": order would be negative");
    return q - minus;
}

/// The symmetric interior sum shared by the duals of Bj and by L.
void add_interior(BilinearOperator& D, std::uint64_t k, std::uint64_t from) {
    for (std::uint64_t i = from; 2 * i + 1 <= k; ++i) {
        D.add(i, k - i, sign(i));
        D.add(k - i, i, sign(i));
    }
    if (D.p() > 2 && k % 2 == 0) D.add(k / 2, k / 2, sign(k / 2));
}

}  // namespace

BilinearOperator bj(std::uint32_t p, unsigned m) {
    const std::uint64_t k = exponent_order(p, m, 1, "bj");
    BilinearOperator D = hom(p, 1, 1, k, sub("Bj", p, m));
    D.add(0, k, 1);
    D.add(k, 0, -1);
    return D;
}

BilinearOperator bj_dual2(std::uint32_t p, unsigned m) {
    const std::uint64_t k = exponent_order(p, m, 1, "bj_dual2");
    BilinearOperator D = hom(p, 1, 0, k, sub("Bj", p, m) + "^{*2}");
    D.add(0, k, 1);
    add_interior(D, k, 1);
    return D;
}

BilinearOperator bj_dual1(std::uint32_t p, unsigned m) {
    const std::uint64_t k = exponent_order(p, m, 1, "bj_dual1");
    BilinearOperator D = hom(p, 0, 1, k, sub("Bj", p, m) + "^{*1}");
    D.add(k, 0, 1);
    add_interior(D, k, 1);
    return D;
}

BilinearOperator gz(std::uint32_t p, unsigned m) {
    const std::uint64_t k = exponent_order(p, m, 2, "gz");
    BilinearOperator D = hom(p, 1, 1, k, sub("Gz", p, m));
    for (std::uint64_t i = 0; 2 * i + 1 <= k; ++i) {
        D.add(i, k - i, sign(i));
        D.add(k - i, i, -sign(i));
    }
    if (p == 2) D.add(k / 2, k / 2, 1);
    return D;
}

BilinearOperator long_L(std::uint32_t p, unsigned N, std::int64_t a) {
    const std::uint64_t k = exponent_order(p, N, 1, "long_L");
    BilinearOperator D = hom(p, 1 - a, a, k, sub("L", p, N));
    add_interior(D, k, 0);
    return D;
}

BilinearOperator transvectant(std::uint32_t p, std::uint64_t k, std::int64_t a, std::int64_t b) {
    const PrimeField F(p);
    const auto la = static_cast<std::int64_t>(F.reduce(a));
    const auto lb = static_cast<std::int64_t>(F.reduce(b));
    BilinearOperator D = hom(p, a, b, k, "J^" + std::to_string(k) + "_{" + std::to_string(la) + "," +
                                             std::to_string(lb) + "}");
    const auto kk = static_cast<std::int64_t>(k);
    for (std::uint64_t i = 0; i <= k; ++i) {
        const residue x = F.mul(signed_binom(2 * la + kk - 1, k - i, p), signed_binom(2 * lb + kk - 1, i, p));
        D.add(i, k - i, sign(i) * static_cast<std::int64_t>(x));
    }
    return D;
}

BilinearOperator int_tensor_id(std::uint32_t p, unsigned N, std::int64_t b) {
    const std::uint64_t top = exponent_order(p, N, 1, "int_tensor_id");
    BilinearOperator D = hom(p, 1, b, top, "∫⊗id");
    D.add(top, 0, 1);
    return D;
}

BilinearOperator int_tensor_d(std::uint32_t p, unsigned N) {
    const std::uint64_t top = exponent_order(p, N, 1, "int_tensor_d");
    BilinearOperator D = hom(p, 1, 0, top + 1, "∫⊗d");
    D.add(top, 1, 1);
    return D;
}

BilinearOperator int_tensor_int(std::uint32_t p, unsigned N) {
    const std::uint64_t top = exponent_order(p, N, 1, "int_tensor_int");
    BilinearOperator D = hom(p, 1, 1, 2 * top, "∫⊗∫");
    D.add(top, top, 1);
    return D;
}

BilinearOperator product(std::uint32_t p, std::int64_t a, std::int64_t b) {
    BilinearOperator D = hom(p, a, b, 0, "product");
    D.add(0, 0, 1);
    return D;
}

BilinearOperator poisson(std::uint32_t p, std::int64_t a, std::int64_t b) {
    BilinearOperator D = hom(p, a, b, 1, "{f,g}_{P.B.}");
    D.add(0, 1, a);
    D.add(1, 0, -b);
    return D;
}

BilinearOperator contact(std::uint32_t p) {
    BilinearOperator D = hom(p, -1, -1, 1, "contact");
    D.add(0, 1, 1);
    D.add(1, 0, -1);
    return D;
}

BilinearOperator p00(std::uint32_t p, std::int64_t alpha, std::int64_t beta) {
    BilinearOperator D = hom(p, 0, 0, 1, "P00");
    D.add(1, 0, alpha);
    D.add(0, 1, beta);
    return D;
}

BilinearOperator order2(std::uint32_t p, std::int64_t a, std::int64_t b) {
    BilinearOperator D = hom(p, a, b, 2, "a·fg''+f'g'+b·f''g");
    D.add(0, 2, a);
    D.add(1, 1, 1);
    D.add(2, 0, b);
    return D;
}

BilinearOperator pb_df_g(std::uint32_t p, std::int64_t b) {
    BilinearOperator D = hom(p, 0, b, 2, "{df,g}_{P.B.}");
    D.add(1, 1, 1);
    D.add(2, 0, -b);
    return D;
}

BilinearOperator pb_f_dg(std::uint32_t p, std::int64_t a) {
    BilinearOperator D = hom(p, a, 0, 2, "{f,dg}_{P.B.}");
    D.add(0, 2, a);
    D.add(1, 1, -1);
    return D;
}

BilinearOperator pb_derived(std::uint32_t p, std::int64_t a) {
    BilinearOperator D = hom(p, a, -1 - a, 2, "({f,g}_{P.B.})'");
    D.add(0, 2, a);
    D.add(1, 1, 2 * a + 1);
    D.add(2, 0, a + 1);
    return D;
}

BilinearOperator t1(std::uint32_t p) {
    BilinearOperator D = hom(p, 0, 0, 3, "T1");
    D.add(1, 2, 1);
    D.add(2, 1, -1);
    return D;
}

BilinearOperator grozman(std::uint32_t p) {
    if (p <= 3) throw std::invalid_argument("grozman: needs p > 3");
    const PrimeField F(p);
    const Scalar w = F(-2) / F(3);
    BilinearOperator D = BilinearOperator::homogeneous(F, w, w, 3, "Gz");
    D.add(0, 3, 2);
    D.add(3, 0, -2);
    D.add(1, 2, 3);
    D.add(2, 1, -3);
    return D;
}

}  // namespace named

}  // namespace divop
