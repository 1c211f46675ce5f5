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
 * @file invariance.hpp
 * @brief Invariance conditions for bilinear operators under vect(1;N),
 *        their solution spaces, and classification over all weights.
 *
 * An operator D: F_a x F_b -> F_c is invariant when
 *
 *     L_X D(f, g) = D(L_X f, g) + D(f, L_X g)
 *
 * for every basis field X = u^(s) d and all basis monomials f, g. Each triple
 * (s, r, t) contributes one linear condition on the coefficients alpha_{ij}
 * per output monomial; the brute-force matrix stacks all of them.
 */

#ifndef DIVOP_INVARIANCE_HPP
#define DIVOP_INVARIANCE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "divop/bilinop.hpp"

namespace divop {

enum class Mode {
    homogeneous,  ///< i + j = k, target weight a + b + k
    general,      ///< i + j <= k, target weight a + b + k
};

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct InvarianceProblem {
    std::uint32_t p = 2;
    unsigned N = 1;
    std::uint64_t k = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    Mode mode = Mode::homogeneous;

    /// p^N
    std::uint64_t extent() const;
    /// Target weight a + b + k reduced mod p.
    residue target_weight() const;
};

/// Unknowns alpha_{ij} in lexicographic order. Only i, j < p^N are kept:
/// derivatives of order >= p^N vanish on O(1;N).
std::vector<Index2> unknowns(const InvarianceProblem& problem);

/**
 * Binomial and action tables for one O(1;N).
 *
 * binom(x, y) = C(x, y) mod p for x < 2 p^N; action(w, s, q) is the
 * coefficient of u^(q+s-1) in L_{u^(s) d} u^(q) on F_w (zero when that
 * monomial leaves the box).
 */
class DefectKernel {
  public:
    DefectKernel(std::uint32_t p, unsigned N);

    std::uint32_t p() const noexcept { return p_; }
    std::uint64_t extent() const noexcept { return n_; }

    residue binom(std::int64_t top, std::int64_t bottom) const noexcept {
        if (bottom < 0 || top < 0 || bottom > top) return 0;
        return binom_[static_cast<std::size_t>(top) * width_ + static_cast<std::size_t>(bottom)];
    }
    residue action(residue w, std::uint64_t s, std::uint64_t q) const noexcept {
        if (q >= n_ || s >= n_) return 0;
        const std::size_t at = s * n_ + q;
        return static_cast<residue>((act0_[at] + static_cast<std::uint64_t>(w) * act1_[at]) % p_);
    }

  private:
    std::uint32_t p_;
    std::uint64_t n_;
    std::size_t width_;
    std::vector<residue> binom_;
    std::vector<residue> act0_, act1_;
};

/// A nonzero entry of L_X D(f,g) - D(L_X f, g) - D(f, L_X g).
struct Defect {
    std::uint64_t s = 0;       ///< X = u^(s) d
    std::uint64_t r = 0;       ///< f = u^(r)
    std::uint64_t t = 0;       ///< g = u^(t)
    std::uint64_t output = 0;  ///< monomial u^(output) of the defect
    residue value = 0;
};

/// Streams the nonzero rows of the brute-force system, ordered by s, then
/// by order group, then by (r, t).
/// The callback returns false to stop early.
void for_each_defect_row(const InvarianceProblem& problem,
                         const std::function<bool(std::span<const residue>)>& row);

/// The brute-force system as a matrix (nonzero rows only). Columns follow unknowns().
gfp::FpMatrix invariance_defect_matrix(const InvarianceProblem& problem);

/// Closed-form homogeneous system; columns alpha_{i,k-i}, i = 0..k. Intended
/// for p^N > k + 1, where its null space equals the brute-force one.
gfp::FpMatrix inveq_system(const PrimeField& field, std::uint64_t k, std::int64_t a, std::int64_t b);

/// Reduced-echelon basis of the invariant operators, from the brute-force
/// system. In homogeneous mode with p^N > k + 1 the result is asserted equal
/// to the null space of inveq_system (std::logic_error otherwise).
std::vector<BilinearOperator> solve_invariant_space(const InvarianceProblem& problem);

/// First defect of D on O(1;N), or nothing when D is invariant. `fields`
/// restricts the test to the given basis fields u^(s) d.
std::optional<Defect> find_defect(const BilinearOperator& D, unsigned N,
                                  const std::vector<std::uint64_t>& fields = {});
bool is_invariant(const BilinearOperator& D, unsigned N);

/// Where a cell lives and which operators may name it.
struct IdentifyContext {
    std::uint32_t p = 2;
    unsigned N = 1;
    std::uint64_t k = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
};

/// Named operators of order k (canonicalized at N), in the order used for naming.
std::vector<BilinearOperator> operator_library(std::uint32_t p, unsigned N, std::uint64_t k);

struct Term {
    std::string name;
    Scalar coefficient;
};

/// D as a combination of library operators: a single scaled match when one
/// exists, otherwise a decomposition over a greedy spanning set. Empty when D
/// is outside the span of the library.
std::vector<Term> identify(const BilinearOperator& D, const IdentifyContext& context);

struct Identification {
    std::vector<std::string> spanning;   ///< library names spanning the cell
    std::vector<std::string> relations;  ///< further library members in terms of the spanning ones
    bool complete = true;                ///< false when the library does not span the cell

    /// "A; B; C = A - B" with "unidentified" appended when incomplete.
    std::string joined() const;
};

Identification identify_cell(const std::vector<BilinearOperator>& basis, const IdentifyContext& context);

struct ClassificationCell {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::vector<BilinearOperator> basis;
    Identification identification;

    std::size_t dimension() const noexcept { return basis.size(); }
};

struct ClassificationTable {
    std::uint32_t p = 2;
    unsigned N = 1;
    std::uint64_t k = 0;
    Mode mode = Mode::homogeneous;
    std::vector<ClassificationCell> cells;  ///< row-major in (a, b)

    bool empty() const noexcept;
};

ClassificationTable classify(std::uint32_t p, unsigned N, std::uint64_t k, Mode mode = Mode::homogeneous);

/// Every N with p^N <= k + 1, then the first N with p^N > k + 1.
std::vector<unsigned> minimal_to_threshold(std::uint32_t p, std::uint64_t k);

struct ScanConfig {
    std::vector<std::uint32_t> primes;
    std::uint64_t k_min = 1;
    std::uint64_t k_max = 0;
    std::vector<unsigned> heights;  ///< explicit N list; empty means minimal-to-threshold
    Mode mode = Mode::homogeneous;
    std::string checkpoint;         ///< empty disables checkpointing
};

struct ScanStats {
    std::size_t units = 0;       ///< (p, k, N) units visited
    std::size_t computed = 0;    ///< units computed in this run
    std::size_t resumed = 0;     ///< units replayed from the checkpoint
};

/// Classifies every (p, k, N) unit in order p, k, N and hands each table to
/// `sink`. Completed units are recorded in the checkpoint file and replayed
/// from it on the next run.
ScanStats scan(const ScanConfig& config, const std::function<void(const ClassificationTable&)>& sink);

/// CSV header "p,N,k,a,b,dim,names".
std::string csv_header();
/// One CSV line per cell; empty cells only when `include_empty`.
std::string csv_rows(const ClassificationTable& table, bool include_empty);
std::string markdown(const ClassificationTable& table);
nlohmann::json to_json(const ClassificationTable& table);
ClassificationTable table_from_json(const nlohmann::json& j);

}  // namespace divop

#endif  // DIVOP_INVARIANCE_HPP
