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
 * @file density.hpp
 * @brief Weighted densities f(u)(du)^a on the line O(1;N) and the action of
 *        vector fields g(u)d/du on them.
 *
 * L_{g d}(f (du)^a) = (g f' + a g' f)(du)^a. Weights are elements of F_p.
 */

#ifndef DIVOP_DENSITY_HPP
#define DIVOP_DENSITY_HPP

#include <cstdint>
#include <string>

#include "divop/divpow.hpp"

namespace divop {

/// X = g(u) d/du on O(1;N).
struct VectorField {
    AlgebraElement g;

    explicit VectorField(AlgebraElement coeff);
    /// The basis field u^(s) d/du.
    static VectorField basis(const Shape& shape, std::uint64_t s);
};

/// [g d, h d] = (g h' - h g') d.
VectorField bracket(const VectorField& X, const VectorField& Y);

/// f(u)(du)^a.
struct WeightedDensity {
    Scalar weight;
    AlgebraElement f;

    WeightedDensity(const Scalar& a, AlgebraElement coeff);
    static WeightedDensity monomial(const Shape& shape, const Scalar& a, std::uint64_t r,
                                    std::int64_t coeff = 1);

    const Shape& shape() const noexcept { return f.shape(); }
    bool operator==(const WeightedDensity& o) const { return weight == o.weight && f == o.f; }
};

WeightedDensity lie_derivative(const VectorField& X, const WeightedDensity& phi);

/// Coefficient of u^(p^N - 1); the density must have weight 1.
Scalar integral(const WeightedDensity& phi);

/// f -> f' (du), from weight 0 to weight 1.
WeightedDensity exterior_d(const WeightedDensity& phi);

/// Integral of the product of two densities whose weights add to 1.
Scalar pairing(const WeightedDensity& phi, const WeightedDensity& psi);

/// "f (du)^a"
std::string render(const WeightedDensity& phi);

}  // namespace divop

#endif  // DIVOP_DENSITY_HPP
