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
 * @file derham.hpp
 * @brief The de Rham complex of O(m;N), its cohomology and the integral on
 *        top-degree forms.
 *
 * A q-form is sum_S f_S du_S over q-subsets S of {1..m}, stored by bitmask
 * (bit i-1 for du_i) with the wedge factors in increasing order.
 */

#ifndef DIVOP_DERHAM_HPP
#define DIVOP_DERHAM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "divop/divpow.hpp"

namespace divop {

using FormMask = std::uint32_t;

class DifferentialForm {
  public:
    DifferentialForm(const Shape& shape, unsigned degree);

    /// A function viewed as a 0-form.
    static DifferentialForm function(const AlgebraElement& f);
    /// coeff u^(r) du_{vars[0]} ^ du_{vars[1]} ^ ...; variables numbered from
    /// 1, in any order (the sign of the sorting permutation is applied).
    static DifferentialForm monomial(const Shape& shape, const MultiIndex& r, const std::vector<unsigned>& vars,
                                     std::int64_t coeff = 1);
    /// u^(r) du_1 ^ ... ^ du_m.
    static DifferentialForm volume(const Shape& shape, const MultiIndex& r, std::int64_t coeff = 1);

    const Shape& shape() const noexcept { return shape_; }
    unsigned degree() const noexcept { return degree_; }

    /// The q-subsets in increasing bitmask order.
    std::vector<FormMask> subsets() const;
    const AlgebraElement& component(FormMask S) const;
    void set_component(FormMask S, AlgebraElement f);

    bool is_zero() const noexcept;
    DifferentialForm operator+(const DifferentialForm& o) const;
    DifferentialForm operator-(const DifferentialForm& o) const;
    DifferentialForm scaled(const Scalar& s) const;
    bool operator==(const DifferentialForm& o) const;
    bool operator!=(const DifferentialForm& o) const { return !(*this == o); }

  private:
    void check(const DifferentialForm& o) const;

    Shape shape_;
    unsigned degree_;
    AlgebraElement zero_;
    std::map<FormMask, AlgebraElement> parts_;  // nonzero components only
};

/// d(f du_S) = sum_i d_i f du_i ^ du_S.
DifferentialForm exterior_d(const DifferentialForm& w);

/// Wedge product; the degrees must add up to at most m.
DifferentialForm cup_product(const DifferentialForm& x, const DifferentialForm& y);

/// Coefficient of u^(tau) du_1 ^ ... ^ du_m; the form must have top degree.
Scalar berezin_integral(const DifferentialForm& w);

/// Order of the integral as a differential operator: sum p^{N_i} - m.
std::uint64_t berezin_order(const Shape& shape);

/// u_S^(tau_S) du_S for the q-subset S.
DifferentialForm standard_representative(const Shape& shape, FormMask S);

struct Cohomology {
    unsigned q = 0;
    std::size_t forms = 0;   ///< dim Omega^q
    std::size_t closed = 0;  ///< dim Z^q
    std::size_t exact = 0;   ///< dim B^q
    std::size_t dimension = 0;  ///< dim H^q = closed - exact
    /// The standard monomials are closed, independent modulo B^q and as many as dim H^q.
    bool standard_basis = false;
    /// Standard monomials when standard_basis holds, echelon representatives otherwise.
    std::vector<DifferentialForm> representatives;
};

Cohomology cohomology(const Shape& shape, unsigned q);

/// dim Z^0 - 1: closed functions modulo constants.
std::size_t reduced_h0(const Shape& shape);

/// "u1^(1)·u2^(1) du1^du2 + ..."; the zero form renders as "0".
std::string render(const DifferentialForm& w);

}  // namespace divop

#endif  // DIVOP_DERHAM_HPP
