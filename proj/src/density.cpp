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

#include "divop/density.hpp"

#include <stdexcept>

namespace divop {

namespace {

void require_line(const Shape& s, const char* who) {
    if (s.m() != 1) throw std::invalid_argument(std::string(who) + ": one-variable shape required");
}

}  // namespace

VectorField::VectorField(AlgebraElement coeff) : g(std::move(coeff)) {
    require_line(g.shape(), "VectorField");
}

VectorField VectorField::basis(const Shape& shape, std::uint64_t s) {
    return VectorField(AlgebraElement::monomial(shape, {s}));
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
    return VectorField(X.g * partial(1, Y.g) - Y.g * partial(1, X.g));
}

WeightedDensity::WeightedDensity(const Scalar& a, AlgebraElement coeff) : weight(a), f(std::move(coeff)) {
    require_line(f.shape(), "WeightedDensity");
    if (a.modulus() != f.shape().field().p())
        throw gfp::FieldMismatch("WeightedDensity: weight and coefficients over different fields");
}

WeightedDensity WeightedDensity::monomial(const Shape& shape, const Scalar& a, std::uint64_t r,
                                          std::int64_t coeff) {
    return WeightedDensity(a, AlgebraElement::monomial(shape, {r}, coeff));
}

WeightedDensity lie_derivative(const VectorField& X, const WeightedDensity& phi) {
    if (X.g.shape().field().p() != phi.shape().field().p())
        throw gfp::FieldMismatch("lie_derivative: field mismatch");
    if (!(X.g.shape() == phi.shape())) throw std::invalid_argument("lie_derivative: shape mismatch");
    AlgebraElement out = X.g * partial(1, phi.f) + (phi.f * partial(1, X.g)).scaled(phi.weight);
    return WeightedDensity(phi.weight, std::move(out));
}

Scalar integral(const WeightedDensity& phi) {
    if (phi.weight.value() != 1 % phi.weight.modulus())
        throw std::invalid_argument("integral: density of weight 1 required");
    return phi.f.coeff(tau(phi.shape()));
}

WeightedDensity exterior_d(const WeightedDensity& phi) {
    if (!phi.weight.is_zero()) throw std::invalid_argument("exterior_d: function (weight 0) required");
    return WeightedDensity(phi.shape().field().one(), partial(1, phi.f));
}

Scalar pairing(const WeightedDensity& phi, const WeightedDensity& psi) {
    const Scalar w = phi.weight + psi.weight;
    if (w.value() != 1 % w.modulus()) throw std::invalid_argument("pairing: weights must add to 1");
    return integral(WeightedDensity(w, phi.f * psi.f));
}

std::string render(const WeightedDensity& phi) {
    const std::string f = render(phi.f);
    const bool sum = f.find(" + ") != std::string::npos;
    return (sum ? "(" + f + ")" : f) + " (du)^" + std::to_string(phi.weight.value());
}

}  // namespace divop
