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

#include "divop/invariance.hpp"

#include <algorithm>
#include <stdexcept>

namespace divop {

std::string to_string(Mode mode) { return mode == Mode::homogeneous ? "homogeneous" : "general"; }

Mode mode_from_string(const std::string& s) {
    if (s == "homogeneous") return Mode::homogeneous;
    if (s == "general") return Mode::general;
    throw std::invalid_argument("unknown mode \"" + s + "\" (expected homogeneous or general)");
}

namespace {

std::uint64_t checked_extent(std::uint32_t p, unsigned N) {
    if (N == 0) throw std::invalid_argument("N must be positive");
    std::uint64_t n = 1;
    for (unsigned i = 0; i < N; ++i) {
        n *= p;
        if (n > (1u << 16)) throw std::invalid_argument("p^N too large for the invariance engine");
    }
    return n;
}

/// Coefficient columns of the order-d group: the values of i with i, d - i < n.
std::vector<std::uint64_t> group_columns(std::uint64_t d, std::uint64_t n) {
    std::vector<std::uint64_t> is;
    for (std::uint64_t i = 0; i <= d; ++i)
        if (i < n && d - i < n) is.push_back(i);
    return is;
}

/**
 * Calls emit(s, r, t, output, entries) for each triple whose condition on the
 * order-d group is nonzero; entries[c] multiplies alpha_{is[c], d - is[c]}.
 * Stops when emit returns false; returns false in that case.
 */
template <class Emit>
bool group_rows(const DefectKernel& K, residue a, residue b, residue c, std::uint64_t d,
                const std::vector<std::uint64_t>& is, std::uint64_t s_only, bool one_s, Emit&& emit) {
    const auto n = static_cast<std::int64_t>(K.extent());
    const std::uint32_t p = K.p();
    const auto dd = static_cast<std::int64_t>(d);
    std::vector<residue> row(is.size());
    const std::int64_t s_lo = one_s ? static_cast<std::int64_t>(s_only) : 0;
    const std::int64_t s_hi = one_s ? s_lo + 1 : n;
    for (std::int64_t s = s_lo; s < s_hi; ++s) {
        for (std::int64_t r = 0; r < n; ++r) {
            const residue la = K.action(a, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(r));
            // output = r + t + s - 1 - d must lie in [0, n)
            const std::int64_t t_lo = std::max<std::int64_t>(0, dd + 1 - s - r);
            const std::int64_t t_hi = std::min<std::int64_t>(n, n + dd + 1 - s - r);
            for (std::int64_t t = t_lo; t < t_hi; ++t) {
                const std::int64_t m = r + t - dd;
                const std::int64_t out = m + s - 1;
                const residue lc = m >= 0 ? K.action(c, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(m)) : 0;
                const residue lb = K.action(b, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(t));
                bool any = false;
                for (std::size_t col = 0; col < is.size(); ++col) {
                    const auto i = static_cast<std::int64_t>(is[col]);
                    std::uint64_t v = 0;
                    if (lc != 0) v += static_cast<std::uint64_t>(lc) * K.binom(m, r - i);
                    std::uint64_t neg = 0;
                    if (la != 0) neg += static_cast<std::uint64_t>(la) * K.binom(out, r + s - 1 - i);
                    if (lb != 0) neg += static_cast<std::uint64_t>(lb) * K.binom(out, r - i);
                    const residue e = static_cast<residue>((v + (p - neg % p)) % p);
                    row[col] = e;
                    any = any || e != 0;
                }
                if (any && !emit(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(r),
                                 static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(out), row))
                    return false;
            }
        }
    }
    return true;
}

std::vector<std::uint64_t> orders_of(const InvarianceProblem& pr) {
    std::vector<std::uint64_t> ds;
    if (pr.mode == Mode::homogeneous)
        ds.push_back(pr.k);
    else
        for (std::uint64_t d = 0; d <= pr.k; ++d) ds.push_back(d);
    return ds;
}

}  // namespace

std::uint64_t InvarianceProblem::extent() const { return checked_extent(p, N); }

residue InvarianceProblem::target_weight() const {
    const PrimeField F(p);
    return (F(a) + F(b) + F(static_cast<std::int64_t>(k % p))).value();
}

std::vector<Index2> unknowns(const InvarianceProblem& problem) {
    const std::uint64_t n = problem.extent();
    std::vector<Index2> cols;
    for (std::uint64_t d : orders_of(problem))
        for (std::uint64_t i : group_columns(d, n)) cols.emplace_back(i, d - i);
    std::sort(cols.begin(), cols.end());
    return cols;
}

DefectKernel::DefectKernel(std::uint32_t p, unsigned N) : p_(p), n_(checked_extent(p, N)), width_(2 * n_) {
    if (!gfp::is_prime(p)) throw std::invalid_argument("DefectKernel: p must be prime");
    binom_.assign(width_ * width_, 0);
    for (std::size_t x = 0; x < width_; ++x) {
        binom_[x * width_] = 1 % p;
        for (std::size_t y = 1; y <= x; ++y) {
            const residue s = binom_[(x - 1) * width_ + y - 1] + binom_[(x - 1) * width_ + y];
            binom_[x * width_ + y] = s >= p ? s - p : s;
        }
    }
    act0_.assign(n_ * n_, 0);
    act1_.assign(n_ * n_, 0);
    for (std::uint64_t s = 0; s < n_; ++s) {
        for (std::uint64_t q = 0; q < n_; ++q) {
            if (q + s < 1 || q + s - 1 >= n_) continue;
            const std::size_t at = s * n_ + q;
            if (q >= 1) act0_[at] = binom(static_cast<std::int64_t>(q + s - 1), static_cast<std::int64_t>(s));
            if (s >= 1) act1_[at] = binom(static_cast<std::int64_t>(q + s - 1), static_cast<std::int64_t>(q));
        }
    }
}

void for_each_defect_row(const InvarianceProblem& problem,
                         const std::function<bool(std::span<const residue>)>& row) {
    const DefectKernel K(problem.p, problem.N);
    const PrimeField F(problem.p);
    const residue a = F.reduce(problem.a), b = F.reduce(problem.b), c = problem.target_weight();
    const std::vector<Index2> cols = unknowns(problem);
    const std::uint64_t n = K.extent();
    std::vector<std::uint64_t> ds = orders_of(problem);
    std::vector<std::vector<std::uint64_t>> groups;
    std::vector<std::vector<std::size_t>> where;
    for (std::uint64_t d : ds) {
        groups.push_back(group_columns(d, n));
        std::vector<std::size_t> pos;
        for (std::uint64_t i : groups.back())
            pos.push_back(static_cast<std::size_t>(
                std::lower_bound(cols.begin(), cols.end(), Index2{i, d - i}) - cols.begin()));
        where.push_back(std::move(pos));
    }
    std::vector<residue> full(cols.size(), 0);
    for (std::uint64_t s = 0; s < n; ++s) {
        for (std::size_t g = 0; g < ds.size(); ++g) {
            if (groups[g].empty()) continue;
            const bool go = group_rows(K, a, b, c, ds[g], groups[g], s, true,
                                       [&](std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t,
                                           const std::vector<residue>& entries) {
                                           std::fill(full.begin(), full.end(), 0);
                                           for (std::size_t x = 0; x < entries.size(); ++x)
                                               full[where[g][x]] = entries[x];
                                           return row(full);
                                       });
            if (!go) return;
        }
    }
}

gfp::FpMatrix invariance_defect_matrix(const InvarianceProblem& problem) {
    const PrimeField F(problem.p);
    gfp::FpMatrix M(F, 0, unknowns(problem).size());
    for_each_defect_row(problem, [&](std::span<const residue> r) {
        M.append_row(r);
        return true;
    });
    return M;
}

gfp::FpMatrix inveq_system(const PrimeField& field, std::uint64_t k, std::int64_t a, std::int64_t b) {
    const std::uint32_t p = field.p();
    const residue ra = field.reduce(a), rb = field.reduce(b);
    gfp::FpMatrix M(field, 0, k + 1);
    std::vector<residue> row(k + 1);
    for (std::uint64_t i = 1; i <= k; ++i) {
        for (std::uint64_t r = 2; r <= k + 1; ++r) {
            std::fill(row.begin(), row.end(), 0);
            row[i] = field.add(field.mul(ra, gfp::binom_residue(i, r - 1, p)), gfp::binom_residue(i, r, p));
            if (i + 1 >= r) {
                const std::uint64_t i2 = i + 1 - r;
                const std::uint64_t top = k - i + r - 1;
                const residue v = field.add(field.mul(rb, gfp::binom_residue(top, r - 1, p)),
                                            gfp::binom_residue(top, r, p));
                row[i2] = field.add(row[i2], v);
            }
            if (std::any_of(row.begin(), row.end(), [](residue x) { return x != 0; })) M.append_row(row);
        }
    }
    return M;
}

std::vector<BilinearOperator> solve_invariant_space(const InvarianceProblem& problem) {
    const DefectKernel K(problem.p, problem.N);
    const PrimeField F(problem.p);
    const residue a = F.reduce(problem.a), b = F.reduce(problem.b), c = problem.target_weight();
    const std::uint64_t n = K.extent();
    const std::vector<Index2> cols = unknowns(problem);

    std::vector<std::vector<residue>> solutions;
    for (std::uint64_t d : orders_of(problem)) {
        const std::vector<std::uint64_t> is = group_columns(d, n);
        if (is.empty()) continue;
        gfp::NullSpaceFilter filter(F, is.size());
        group_rows(K, a, b, c, d, is, 0, false,
                   [&](std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, const std::vector<residue>& r) {
                       filter.constrain(r);
                       return !filter.empty();
                   });
        for (const auto& v : filter.reduced_basis()) {
            std::vector<residue> full(cols.size(), 0);
            for (std::size_t x = 0; x < is.size(); ++x) {
                const auto at = std::lower_bound(cols.begin(), cols.end(), Index2{is[x], d - is[x]});
                full[static_cast<std::size_t>(at - cols.begin())] = v[x];
            }
            solutions.push_back(std::move(full));
        }
    }
    solutions = gfp::rref(F, std::move(solutions), cols.size());

    if (problem.mode == Mode::homogeneous && n > problem.k + 1) {
        gfp::RowEchelon closed(F, problem.k + 1);
        const gfp::FpMatrix M = inveq_system(F, problem.k, problem.a, problem.b);
        for (std::size_t r = 0; r < M.rows(); ++r) closed.insert(M.row(r));
        if (closed.null_space() != solutions)
            throw std::logic_error("solve_invariant_space: brute-force and closed-form systems disagree");
    }

    std::vector<BilinearOperator> out;
    for (const auto& v : solutions) {
        BilinearOperator D(F, F(a), F(b), F(c));
        for (std::size_t x = 0; x < cols.size(); ++x)
            if (v[x] != 0) D.set(cols[x].first, cols[x].second, F(v[x]));
        out.push_back(std::move(D));
    }
    return out;
}

std::optional<Defect> find_defect(const BilinearOperator& D, unsigned N, const std::vector<std::uint64_t>& fields) {
    const DefectKernel K(D.p(), N);
    const std::uint32_t p = K.p();
    const auto n = static_cast<std::int64_t>(K.extent());
    const BilinearOperator C = D.canonical(N);
    const residue a = D.a().value(), b = D.b().value(), c = D.c().value();

    std::map<std::uint64_t, std::vector<std::pair<std::int64_t, residue>>> groups;
    for (const auto& [ij, v] : C.coeffs())
        groups[ij.first + ij.second].emplace_back(static_cast<std::int64_t>(ij.first), v);

    std::vector<std::uint64_t> ss = fields;
    if (ss.empty())
        for (std::int64_t s = 0; s < n; ++s) ss.push_back(static_cast<std::uint64_t>(s));

    // table[m * n + x] = sum_i alpha_{i, d-i} C(m, x - i): the coefficient of
    // u^(m) in D(u^(x), u^(m + d - x)).
    const auto nn = static_cast<std::size_t>(n);
    std::vector<residue> table(nn * nn);
    for (const auto& [d, terms] : groups) {
        std::fill(table.begin(), table.end(), 0);
        for (std::int64_t m = 0; m < n; ++m)
            for (std::int64_t x = 0; x < n; ++x) {
                std::uint64_t acc = 0;
                for (const auto& [i, v] : terms) acc += static_cast<std::uint64_t>(v) * K.binom(m, x - i);
                table[static_cast<std::size_t>(m) * nn + static_cast<std::size_t>(x)] = static_cast<residue>(acc % p);
            }
        const auto dd = static_cast<std::int64_t>(d);
        for (std::uint64_t su : ss) {
            if (su >= K.extent()) continue;
            const auto s = static_cast<std::int64_t>(su);
            for (std::int64_t r = 0; r < n; ++r) {
                const residue la = K.action(a, su, static_cast<std::uint64_t>(r));
                const std::int64_t shifted = r + s - 1;
                const std::int64_t t_lo = std::max<std::int64_t>(0, dd + 1 - s - r);
                const std::int64_t t_hi = std::min<std::int64_t>(n, n + dd + 1 - s - r);
                for (std::int64_t t = t_lo; t < t_hi; ++t) {
                    const std::int64_t m = r + t - dd;
                    const std::int64_t out = m + s - 1;
                    const auto orow = static_cast<std::size_t>(out) * nn;
                    std::uint64_t v = 0;
                    if (m >= 0) {
                        const residue lc = K.action(c, su, static_cast<std::uint64_t>(m));
                        if (lc != 0) v += static_cast<std::uint64_t>(lc) * table[static_cast<std::size_t>(m) * nn + static_cast<std::size_t>(r)];
                    }
                    std::uint64_t neg = 0;
                    if (la != 0 && shifted >= 0 && shifted < n)
                        neg += static_cast<std::uint64_t>(la) * table[orow + static_cast<std::size_t>(shifted)];
                    const residue lb = K.action(b, su, static_cast<std::uint64_t>(t));
                    if (lb != 0) neg += static_cast<std::uint64_t>(lb) * table[orow + static_cast<std::size_t>(r)];
                    const auto e = static_cast<residue>((v + (p - neg % p)) % p);
                    if (e != 0)
                        return Defect{su, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(t),
                                      static_cast<std::uint64_t>(out), e};
                }
            }
        }
    }
    return std::nullopt;
}

bool is_invariant(const BilinearOperator& D, unsigned N) { return !find_defect(D, N).has_value(); }

// ---------------------------------------------------------------------------
// Identification

namespace {

std::uint64_t power(std::uint32_t p, unsigned m) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) q *= p;
    return q;
}

std::string swapped_name(const std::string& name) {
    if (name == "∫⊗id") return "id⊗∫";
    return "r(" + name + ")";
}

bool gz_allowed(std::uint32_t p, unsigned m, unsigned N) { return m <= N || (p == 2 && m <= N + 1); }

class LibraryBuilder {
  public:
    LibraryBuilder(std::uint32_t p, unsigned N, std::uint64_t k) : p_(p), N_(N), k_(k) {}

    void add(BilinearOperator D) { group_.push_back(std::move(D)); }
    void add(BilinearOperator D, std::string name) {
        D.set_name(std::move(name));
        group_.push_back(std::move(D));
    }

    /// Emits the pending group, followed by the swaps of its members.
    void close_group() {
        const std::size_t count = group_.size();
        for (std::size_t x = 0; x < count; ++x) {
            BilinearOperator s = swap_arguments(group_[x]);
            s.set_name(swapped_name(group_[x].name()));
            group_.push_back(std::move(s));
        }
        for (auto& D : group_) push(std::move(D));
        group_.clear();
    }

    std::vector<BilinearOperator> take() { return std::move(out_); }

  private:
    void push(BilinearOperator D) {
        BilinearOperator C = D.canonical(N_);
        if (C.is_zero() || C.order() != k_ || !C.is_homogeneous()) return;
        for (const auto& E : out_)
            if (E == C) return;
        out_.push_back(std::move(C));
    }

    std::uint32_t p_;
    unsigned N_;
    std::uint64_t k_;
    std::vector<BilinearOperator> group_;
    std::vector<BilinearOperator> out_;
};

}  // namespace

std::vector<BilinearOperator> operator_library(std::uint32_t p, unsigned N, std::uint64_t k) {
    using namespace named;
    const std::uint64_t n = checked_extent(p, N);
    const auto P = static_cast<std::int64_t>(p);
    LibraryBuilder lib(p, N, k);

    if (k == 0) {
        for (std::int64_t a = 0; a < P; ++a)
            for (std::int64_t b = 0; b < P; ++b) lib.add(product(p, a, b));
        lib.close_group();
    }

    if (k == n - 1)
        for (std::int64_t b = 0; b < P; ++b) lib.add(int_tensor_id(p, N, b));
    if (k == n) lib.add(int_tensor_d(p, N));
    if (k == 2 * n - 2) lib.add(int_tensor_int(p, N));
    lib.close_group();

    for (unsigned m = 1; power(p, m) <= k + 1; ++m) {
        if (power(p, m) - 1 != k || m > N) continue;
        lib.add(bj(p, m));
        lib.add(bj_dual1(p, m));
        lib.add(bj_dual2(p, m));
    }
    lib.close_group();

    for (unsigned m = 1; power(p, m) <= k + 2; ++m)
        if (power(p, m) - 2 == k && gz_allowed(p, m, N)) lib.add(gz(p, m));
    lib.close_group();

    if (k == 1) {
        lib.add(contact(p));
        for (std::int64_t a = 0; a < P; ++a)
            for (std::int64_t b = 0; b < P; ++b) lib.add(poisson(p, a, b));
        const bool everywhere = p == 2 && N == 1;
        for (std::int64_t a = 0; a < P; ++a)
            for (std::int64_t b = 0; b < P; ++b) {
                if (!everywhere && (a != 0 || b != 0)) continue;
                BilinearOperator x = BilinearOperator::homogeneous(PrimeField(p), PrimeField(p)(a), PrimeField(p)(b), 1);
                BilinearOperator y = x;
                x.add(1, 0, 1);
                y.add(0, 1, 1);
                lib.add(x, "f'g");
                lib.add(y, "fg'");
            }
    }
    if (k == 2) {
        if (p == 2) {
            for (std::int64_t a = 0; a < P; ++a)
                for (std::int64_t b = 0; b < P; ++b) lib.add(order2(p, a, b));
            if (N == 1)
                for (std::int64_t a = 0; a < P; ++a)
                    for (std::int64_t b = 0; b < P; ++b) {
                        BilinearOperator x = BilinearOperator::homogeneous(PrimeField(p), PrimeField(p)(a), PrimeField(p)(b), 2);
                        x.add(1, 1, 1);
                        lib.add(x, "f'g'");
                    }
        } else {
            for (std::int64_t b = 0; b < P; ++b) lib.add(pb_df_g(p, b));
            for (std::int64_t a = 0; a < P; ++a) lib.add(pb_f_dg(p, a));
            for (std::int64_t a = 0; a < P; ++a) lib.add(pb_derived(p, a));
        }
    }
    if (k == 3) {
        lib.add(t1(p));
        lib.add(dual1(t1(p)));
        lib.add(dual2(t1(p)));
        if (p > 3) lib.add(grozman(p));
    }
    lib.close_group();

    if (p > 2 && k <= 3) {
        for (std::int64_t a = 0; a < P; ++a)
            for (std::int64_t b = 0; b < P; ++b) lib.add(transvectant(p, k, a, b));
        lib.close_group();
    }

    if (k >= 2) {
        std::vector<BilinearOperator> inner;
        for (unsigned m = 1; power(p, m) <= k; ++m) {
            if (power(p, m) - 1 == k - 2 && m <= N) inner.push_back(bj(p, m));
            if (power(p, m) - 2 == k - 2 && gz_allowed(p, m, N)) inner.push_back(gz(p, m));
        }
        for (const auto& X : inner) {
            const BilinearOperator dd = precompose_d(X, Slot::both);
            lib.add(dd);
            lib.add(dual1(dd));
            lib.add(dual2(dd));
        }
        lib.close_group();
    }

    if (k == n - 1) {
        for (std::int64_t a = 0; a < P; ++a) lib.add(long_L(p, N, a));
        for (std::int64_t b = 0; b < P; ++b) {
            lib.add(dual1(int_tensor_id(p, N, b)));
            lib.add(dual2(int_tensor_id(p, N, b)));
        }
    }
    if (k == n) {
        lib.add(dual1(int_tensor_d(p, N)));
        lib.add(dual2(int_tensor_d(p, N)));
    }
    lib.close_group();

    return lib.take();
}

namespace {

std::vector<residue> as_vector(const BilinearOperator& D, const std::vector<Index2>& cols) {
    std::vector<residue> v(cols.size(), 0);
    for (const auto& [ij, x] : D.coeffs()) {
        const auto at = std::lower_bound(cols.begin(), cols.end(), ij);
        if (at == cols.end() || *at != ij) throw std::logic_error("identify: coefficient outside the unknowns");
        v[static_cast<std::size_t>(at - cols.begin())] = x;
    }
    return v;
}

/// Coefficients c with target = sum c_i chosen_i; chosen must be independent
/// and target in their span.
std::vector<residue> combination(const PrimeField& F, const std::vector<std::vector<residue>>& chosen,
                                 const std::vector<residue>& target) {
    const std::size_t w = target.size(), d = chosen.size();
    gfp::RowEchelon E(F, w + d);
    for (std::size_t x = 0; x < d; ++x) {
        std::vector<residue> row(chosen[x]);
        row.resize(w + d, 0);
        row[w + x] = 1;
        E.insert(row);
    }
    std::vector<residue> c(d, 0);
    for (std::size_t r = 0; r < E.rank(); ++r) {
        const std::size_t piv = E.pivots()[r];
        if (piv >= w || target[piv] == 0) continue;
        for (std::size_t x = 0; x < d; ++x) c[x] = F.add(c[x], F.mul(target[piv], E.basis()[r][w + x]));
    }
    return c;
}

std::string format_combination(const PrimeField& F, const std::vector<std::string>& names,
                               const std::vector<residue>& coeffs) {
    std::vector<std::pair<std::int64_t, std::string>> pos, neg;
    for (std::size_t x = 0; x < names.size(); ++x) {
        if (coeffs[x] == 0) continue;
        const std::int64_t c = F(coeffs[x]).balanced();
        (c > 0 ? pos : neg).emplace_back(c > 0 ? c : -c, names[x]);
    }
    std::string s;
    auto term = [](std::int64_t c, const std::string& name) {
        return c == 1 ? name : std::to_string(c) + "·" + name;
    };
    for (const auto& [c, name] : pos) s += (s.empty() ? "" : " + ") + term(c, name);
    for (const auto& [c, name] : neg) s += (s.empty() ? "-" : " - ") + term(c, name);
    return s.empty() ? "0" : s;
}

std::vector<Index2> cell_columns(const IdentifyContext& ctx) {
    InvarianceProblem pr;
    pr.p = ctx.p;
    pr.N = ctx.N;
    pr.k = ctx.k;
    return unknowns(pr);
}

std::vector<BilinearOperator> library_at(const IdentifyContext& ctx) {
    const PrimeField F(ctx.p);
    std::vector<BilinearOperator> out;
    for (auto& D : operator_library(ctx.p, ctx.N, ctx.k))
        if (D.a() == F(ctx.a) && D.b() == F(ctx.b)) out.push_back(std::move(D));
    return out;
}

}  // namespace

std::vector<Term> identify(const BilinearOperator& D, const IdentifyContext& ctx) {
    const PrimeField F(ctx.p);
    const BilinearOperator C = D.canonical(ctx.N);
    if (C.is_zero()) return {};
    const std::vector<BilinearOperator> lib = library_at(ctx);
    for (const auto& X : lib) {
        if (!X.same_weights(C)) continue;
        const auto lambda = equal_up_to_scalar(C, X, ctx.N);
        if (lambda && !lambda->is_zero()) return {Term{X.name(), *lambda}};
    }
    if (!C.is_homogeneous() || C.order() != ctx.k) return {};
    const std::vector<Index2> cols = cell_columns(ctx);
    gfp::RowEchelon span(F, cols.size());
    std::vector<std::vector<residue>> chosen;
    std::vector<std::string> names;
    for (const auto& X : lib) {
        if (!X.same_weights(C)) continue;
        auto v = as_vector(X, cols);
        if (span.insert(v)) {
            chosen.push_back(std::move(v));
            names.push_back(X.name());
        }
    }
    const auto target = as_vector(C, cols);
    if (!span.contains(target)) return {};
    const auto coeffs = combination(F, chosen, target);
    std::vector<Term> out;
    for (std::size_t x = 0; x < names.size(); ++x)
        if (coeffs[x] != 0) out.push_back(Term{names[x], F(coeffs[x])});
    return out;
}

std::string Identification::joined() const {
    std::string s;
    for (const auto& x : spanning) s += (s.empty() ? "" : "; ") + x;
    for (const auto& x : relations) s += (s.empty() ? "" : "; ") + x;
    if (!complete) s += (s.empty() ? "" : "; ") + std::string("unidentified");
    return s;
}

Identification identify_cell(const std::vector<BilinearOperator>& basis, const IdentifyContext& ctx) {
    Identification id;
    if (basis.empty()) return id;
    const PrimeField F(ctx.p);
    const std::vector<Index2> cols = cell_columns(ctx);
    gfp::RowEchelon cell(F, cols.size());
    for (const auto& B : basis) cell.insert(as_vector(B.canonical(ctx.N), cols));

    gfp::RowEchelon span(F, cols.size());
    std::vector<std::vector<residue>> chosen;
    std::vector<std::pair<std::string, std::vector<residue>>> rest;
    for (const auto& X : library_at(ctx)) {
        auto v = as_vector(X, cols);
        if (!cell.contains(v)) continue;
        if (span.rank() < cell.rank() && span.insert(v)) {
            chosen.push_back(std::move(v));
            id.spanning.push_back(X.name());
        } else {
            rest.emplace_back(X.name(), std::move(v));
        }
    }
    id.complete = span.rank() == cell.rank();
    if (cell.rank() > 1)
        for (const auto& [name, v] : rest)
            id.relations.push_back(name + " = " + format_combination(F, id.spanning, combination(F, chosen, v)));
    return id;
}

bool ClassificationTable::empty() const noexcept {
    return std::all_of(cells.begin(), cells.end(), [](const ClassificationCell& c) { return c.basis.empty(); });
}

ClassificationTable classify(std::uint32_t p, unsigned N, std::uint64_t k, Mode mode) {
    if (!gfp::is_prime(p)) throw std::invalid_argument("classify: p must be prime");
    ClassificationTable table;
    table.p = p;
    table.N = N;
    table.k = k;
    table.mode = mode;
    const auto P = static_cast<std::int64_t>(p);
    for (std::int64_t a = 0; a < P; ++a) {
        for (std::int64_t b = 0; b < P; ++b) {
            InvarianceProblem pr{p, N, k, a, b, mode};
            ClassificationCell cell;
            cell.a = a;
            cell.b = b;
            cell.basis = solve_invariant_space(pr);
            if (mode == Mode::homogeneous) {
                cell.identification = identify_cell(cell.basis, {p, N, k, a, b});
            } else {
                // Each general-mode basis vector is homogeneous of some order d <= k.
                for (const auto& B : cell.basis) {
                    const std::vector<Term> terms = identify(B, {p, N, B.order(), a, b});
                    if (terms.empty()) {
                        cell.identification.complete = false;
                        continue;
                    }
                    std::vector<std::string> names;
                    std::vector<residue> coeffs;
                    for (const auto& t : terms) {
                        names.push_back(t.name);
                        coeffs.push_back(t.coefficient.value());
                    }
                    cell.identification.spanning.push_back(format_combination(PrimeField(p), names, coeffs));
                }
            }
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

std::vector<unsigned> minimal_to_threshold(std::uint32_t p, std::uint64_t k) {
    std::vector<unsigned> Ns;
    std::uint64_t q = p;
    unsigned N = 1;
    while (q <= k + 1) {
        Ns.push_back(N);
        ++N;
        q *= p;
    }
    Ns.push_back(N);
    return Ns;
}

}  // namespace divop
