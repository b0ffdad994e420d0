/*
 * Copyright 2026 The mpspe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MPSPE_LINPROG_HPP
#define MPSPE_LINPROG_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "mpspe/error.hpp"
#include "mpspe/ext_rat.hpp"

namespace mpspe::lp {

enum class RelKind { Eq, Geq, Leq };

struct Relation
{
    std::vector<Rational> coeffs;
    Rational rhs;
    RelKind kind;

    bool
    satisfied_by(const std::vector<Rational> &x) const
    {
        Rational lhs = 0;
        for (size_t k = 0; k < coeffs.size(); ++k) lhs += coeffs[k] * x.at(k);
        switch (kind) {
        case RelKind::Eq: return lhs == rhs;
        case RelKind::Geq: return lhs >= rhs;
        case RelKind::Leq: return lhs <= rhs;
        }
        return false;
    }
};

/**
 * Linear equations and inequations over free rational variables.
 */
struct LinearSystem
{
    size_t dims = 0;
    std::vector<Relation> relations;

    explicit LinearSystem(size_t d = 0) : dims(d) {}

    void
    add(std::vector<Rational> coeffs, Rational rhs, RelKind kind)
    {
        if (coeffs.size() != dims) throw InputError("relation has the wrong number of coefficients");
        if (std::all_of(coeffs.begin(), coeffs.end(), [](const Rational &c) { return c == 0; }))
            throw InputError("relation with an all-zero coefficient vector");
        relations.push_back(Relation{std::move(coeffs), std::move(rhs), kind});
    }

    void add_eq(std::vector<Rational> a, Rational b) { add(std::move(a), std::move(b), RelKind::Eq); }
    void add_geq(std::vector<Rational> a, Rational b) { add(std::move(a), std::move(b), RelKind::Geq); }
    void add_leq(std::vector<Rational> a, Rational b) { add(std::move(a), std::move(b), RelKind::Leq); }

    bool
    satisfied_by(const std::vector<Rational> &x) const
    {
        if (x.size() != dims) return false;
        return std::all_of(relations.begin(), relations.end(), [&](const Relation &r) { return r.satisfied_by(x); });
    }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct LpResult
{
    Status status = Status::Infeasible;
    ExtRat value;                 // optimum, -inf when unbounded
    std::vector<Rational> point;  // empty unless a point was found
};

namespace detail {

/**
 * Dense two-phase tableau simplex with Bland's rule. Minimizes c.x subject
 * to the rows and x >= 0.
 */
class Tableau
{
public:
    Tableau(size_t nvars, const std::vector<Relation> &rows, const std::vector<Rational> &cost) : n_(nvars)
    {
        const size_t m = rows.size();
        size_t nslack = 0, nart = 0;
        std::vector<RelKind> kinds(m);
        std::vector<bool> flip(m, false);
        for (size_t i = 0; i < m; ++i) {
            kinds[i] = rows[i].kind;
            if (rows[i].rhs < 0) {
                flip[i] = true;
                if (kinds[i] == RelKind::Geq) kinds[i] = RelKind::Leq;
                else if (kinds[i] == RelKind::Leq) kinds[i] = RelKind::Geq;
            }
            if (kinds[i] != RelKind::Eq) ++nslack;
            if (kinds[i] != RelKind::Leq) ++nart;
        }
        art_begin_ = n_ + nslack;
        cols_ = art_begin_ + nart;
        t_.assign(m, std::vector<Rational>(cols_ + 1));
        basis_.assign(m, 0);
        size_t s = n_, a = art_begin_;
        for (size_t i = 0; i < m; ++i) {
            Rational sign = flip[i] ? -1 : 1;
            for (size_t j = 0; j < n_; ++j) t_[i][j] = sign * rows[i].coeffs.at(j);
            t_[i][cols_] = sign * rows[i].rhs;
            if (kinds[i] == RelKind::Leq) {
                t_[i][s] = 1;
                basis_[i] = s++;
            } else {
                if (kinds[i] == RelKind::Geq) t_[i][s++] = -1;
                t_[i][a] = 1;
                basis_[i] = a++;
            }
        }
        cost_ = cost;
        cost_.resize(n_);
    }

    /// Returns the status; on Optimal, x() and value() are meaningful.
    Status
    solve()
    {
        // phase 1
        std::vector<Rational> c1(cols_);
        for (size_t j = art_begin_; j < cols_; ++j) c1[j] = 1;
        allowed_ = cols_;
        load_cost(c1);
        run();
        if (obj_[cols_] != 0) return Status::Infeasible; // obj_ holds -value
        drive_out_artificials();

        // phase 2
        allowed_ = art_begin_;
        std::vector<Rational> c2(cols_);
        for (size_t j = 0; j < n_; ++j) c2[j] = cost_[j];
        load_cost(c2);
        return run() ? Status::Optimal : Status::Unbounded;
    }

    std::vector<Rational>
    x() const
    {
        std::vector<Rational> out(n_);
        for (size_t i = 0; i < t_.size(); ++i)
            if (basis_[i] < n_) out[basis_[i]] = t_[i][cols_];
        return out;
    }

    Rational value() const { return -obj_[cols_]; }

private:
    void
    load_cost(const std::vector<Rational> &c)
    {
        obj_.assign(cols_ + 1, Rational(0));
        for (size_t j = 0; j < cols_; ++j) obj_[j] = c[j];
        for (size_t i = 0; i < t_.size(); ++i) {
            const Rational &cb = c[basis_[i]];
            if (cb == 0) continue;
            for (size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * t_[i][j];
        }
    }

    void
    pivot(size_t r, size_t c)
    {
        Rational p = t_[r][c];
        for (auto &x : t_[r]) x /= p;
        for (size_t i = 0; i < t_.size(); ++i) {
            if (i == r || t_[i][c] == 0) continue;
            Rational f = t_[i][c];
            for (size_t j = 0; j <= cols_; ++j)
                if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
        }
        if (obj_[c] != 0) {
            Rational f = obj_[c];
            for (size_t j = 0; j <= cols_; ++j)
                if (t_[r][j] != 0) obj_[j] -= f * t_[r][j];
        }
        basis_[r] = c;
    }

    // false when unbounded
    bool
    run()
    {
        for (;;) {
            size_t enter = cols_;
            for (size_t j = 0; j < allowed_; ++j)
                if (obj_[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols_) return true;
            size_t leave = t_.size();
            Rational best;
            for (size_t i = 0; i < t_.size(); ++i) {
                if (t_[i][enter] <= 0) continue;
                Rational ratio = t_[i][cols_] / t_[i][enter];
                if (leave == t_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == t_.size()) return false;
            pivot(leave, enter);
        }
    }

    void
    drive_out_artificials()
    {
        for (size_t i = 0; i < t_.size();) {
            if (basis_[i] < art_begin_) {
                ++i;
                continue;
            }
            size_t c = art_begin_;
            for (size_t j = 0; j < art_begin_; ++j)
                if (t_[i][j] != 0) {
                    c = j;
                    break;
                }
            if (c < art_begin_) {
                pivot(i, c);
                ++i;
            } else {
                // redundant row
                t_.erase(t_.begin() + long(i));
                basis_.erase(basis_.begin() + long(i));
            }
        }
    }

    size_t n_, cols_ = 0, art_begin_ = 0, allowed_ = 0;
    std::vector<std::vector<Rational>> t_;
    std::vector<size_t> basis_;
    std::vector<Rational> obj_;
    std::vector<Rational> cost_;
};

inline size_t
rank_of(std::vector<std::vector<Rational>> m, size_t ncols)
{
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (size_t j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

/// One nonzero vector of the null space of the rows, or nullopt when trivial.
inline std::optional<std::vector<Rational>>
null_vector(std::vector<std::vector<Rational>> m, size_t ncols)
{
    std::vector<size_t> pivcol;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (size_t j = 0; j < ncols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = 0; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(ncols, false);
    for (size_t c : pivcol) is_piv[c] = true;
    size_t freec = ncols;
    for (size_t c = 0; c < ncols; ++c)
        if (!is_piv[c]) {
            freec = c;
            break;
        }
    if (freec == ncols) return std::nullopt;
    std::vector<Rational> v(ncols);
    v[freec] = 1;
    for (size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = -m[i][freec];
    return v;
}

/// Unique solution of the square-or-tall system A x = b, if any.
inline std::optional<std::vector<Rational>>
solve_unique(std::vector<std::vector<Rational>> a, std::vector<Rational> b, size_t ncols)
{
    for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
    size_t r = 0;
    std::vector<size_t> pivcol;
    for (size_t c = 0; c < ncols && r < a.size(); ++c) {
        size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        Rational inv = 1 / a[r][c];
        for (auto &x : a[r]) x *= inv;
        for (size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = 0; j <= ncols; ++j) a[i][j] -= f * a[r][j];
        }
        pivcol.push_back(c);
        ++r;
    }
    if (r < ncols) return std::nullopt;
    for (size_t i = r; i < a.size(); ++i)
        if (a[i][ncols] != 0) return std::nullopt;
    std::vector<Rational> x(ncols);
    for (size_t i = 0; i < r; ++i) x[pivcol[i]] = a[i][ncols];
    return x;
}

inline Rational
dot(const std::vector<Rational> &a, const std::vector<Rational> &b)
{
    Rational s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// a.x - rhs oriented so that feasibility means >= 0 (equalities: == 0)
inline Rational
slack(const Relation &r, const std::vector<Rational> &x)
{
    Rational s = dot(r.coeffs, x) - r.rhs;
    return r.kind == RelKind::Leq ? Rational(-s) : s;
}

/**
 * Walk along null-space directions of the tight relations until they pin
 * down a single point. The objective stays constant because the start point
 * is optimal. Stops early if the region contains a line.
 */
inline std::vector<Rational>
purify(const LinearSystem &sys, std::vector<Rational> x)
{
    const size_t d = sys.dims;
    for (;;) {
        std::vector<std::vector<Rational>> tight;
        for (const auto &r : sys.relations)
            if (slack(r, x) == 0) tight.push_back(r.coeffs);
        auto dir = null_vector(tight, d);
        if (!dir) return x;
        bool moved = false;
        for (int sign : {1, -1}) {
            std::vector<Rational> dv = *dir;
            if (sign < 0)
                for (auto &z : dv) z = -z;
            std::optional<Rational> step;
            for (const auto &r : sys.relations) {
                Rational s = slack(r, x);
                if (s == 0) continue;
                Rational rate = dot(r.coeffs, dv);
                if (r.kind == RelKind::Leq) rate = -rate;
                if (rate < 0) {
                    Rational t = s / -rate;
                    if (!step || t < *step) step = t;
                }
            }
            if (!step) continue;
            for (size_t k = 0; k < d; ++k) x[k] += *step * dv[k];
            moved = true;
            break;
        }
        if (!moved) return x;
    }
}

} // namespace detail

/**
 * Minimize c.x over x >= 0 subject to rows. The returned point is a basic
 * feasible solution.
 */
inline LpResult
minimize_nonneg(size_t nvars, const std::vector<Relation> &rows, const std::vector<Rational> &cost)
{
    detail::Tableau t(nvars, rows, cost);
    LpResult res;
    res.status = t.solve();
    if (res.status == Status::Optimal) {
        res.value = ExtRat(t.value());
        res.point = t.x();
    } else if (res.status == Status::Unbounded) {
        res.value = ExtRat::neg_inf();
    }
    return res;
}

/// Minimize objective.x over the (free-variable) system.
inline LpResult
lp_minimize(const LinearSystem &sys, const std::vector<Rational> &objective)
{
    if (objective.size() != sys.dims) throw InputError("objective has the wrong dimension");
    const size_t d = sys.dims;
    // x = p - q with p, q >= 0
    std::vector<Relation> rows;
    for (const auto &r : sys.relations) {
        Relation s{std::vector<Rational>(2 * d), r.rhs, r.kind};
        for (size_t k = 0; k < d; ++k) {
            s.coeffs[k] = r.coeffs[k];
            s.coeffs[d + k] = -r.coeffs[k];
        }
        rows.push_back(std::move(s));
    }
    std::vector<Rational> cost(2 * d);
    for (size_t k = 0; k < d; ++k) {
        cost[k] = objective[k];
        cost[d + k] = -objective[k];
    }
    LpResult split = minimize_nonneg(2 * d, rows, cost);
    LpResult res;
    res.status = split.status;
    res.value = split.value;
    if (split.status == Status::Optimal) {
        std::vector<Rational> x(d);
        for (size_t k = 0; k < d; ++k) x[k] = split.point[k] - split.point[d + k];
        res.point = detail::purify(sys, std::move(x));
    }
    return res;
}

inline LpResult
lp_maximize(const LinearSystem &sys, std::vector<Rational> objective)
{
    for (auto &c : objective) c = -c;
    LpResult r = lp_minimize(sys, objective);
    r.value = -r.value;
    return r;
}

/// A point satisfying every relation, or nullopt.
inline std::optional<std::vector<Rational>>
lp_feasible(const LinearSystem &sys)
{
    LpResult r = lp_minimize(sys, std::vector<Rational>(sys.dims));
    if (r.status != Status::Optimal) return std::nullopt;
    return r.point;
}

/**
 * All vertices of a bounded region, found by a depth-first walk over sets of
 * linearly independent tight relations, pruning empty faces with the LP.
 */
inline std::vector<std::vector<Rational>>
vertices_of(const LinearSystem &sys, size_t dim_cap = 6)
{
    const size_t d = sys.dims;
    if (d > dim_cap) throw CapExceeded("vertices_of: dimension above the cap");
    if (!lp_feasible(sys)) return {};
    for (size_t k = 0; k < d; ++k) {
        std::vector<Rational> e(d);
        e[k] = 1;
        if (lp_minimize(sys, e).status == Status::Unbounded || lp_maximize(sys, e).status == Status::Unbounded)
            throw UnboundedRegion("vertices_of: region is unbounded");
    }

    std::set<std::vector<Rational>> found;
    const size_t R = sys.relations.size();
    std::vector<size_t> chosen;

    auto face = [&](const std::vector<size_t> &rows) {
        LinearSystem f = sys;
        for (size_t r : rows) f.relations[r].kind = RelKind::Eq;
        return f;
    };
    auto matrix = [&](const std::vector<size_t> &rows) {
        std::vector<std::vector<Rational>> m;
        for (size_t r : rows) m.push_back(sys.relations[r].coeffs);
        return m;
    };

    auto rec = [&](auto &self, size_t start) -> void {
        if (chosen.size() == d) {
            std::vector<Rational> b;
            for (size_t r : chosen) b.push_back(sys.relations[r].rhs);
            auto x = detail::solve_unique(matrix(chosen), b, d);
            if (x && sys.satisfied_by(*x)) found.insert(*x);
            return;
        }
        for (size_t r = start; r < R; ++r) {
            chosen.push_back(r);
            if (detail::rank_of(matrix(chosen), d) == chosen.size() && lp_feasible(face(chosen))) self(self, r + 1);
            chosen.pop_back();
        }
    };
    if (d == 0) {
        found.insert({});
    } else {
        rec(rec, 0);
    }
    return {found.begin(), found.end()};
}

/**
 * Rows alpha[j] are convex weights over the cycles, one row per player. The
 * value in dimension i is the minimum over rows of the weighted payoff.
 */
struct SealedCombination
{
    std::vector<std::vector<Rational>> alpha;
    std::vector<Rational> value;
};

inline std::vector<Rational>
sealed_value(const std::vector<std::vector<Rational>> &alpha, const std::vector<std::vector<Rational>> &cycle_mps)
{
    if (alpha.empty()) throw InputError("sealed combination without rows");
    size_t d = cycle_mps.empty() ? 0 : cycle_mps.front().size();
    std::vector<Rational> z(d);
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < alpha.size(); ++j) {
            Rational s = 0;
            for (size_t c = 0; c < cycle_mps.size(); ++c) s += alpha[j].at(c) * cycle_mps[c][i];
            if (j == 0 || s < z[i]) z[i] = s;
        }
    }
    return z;
}

/**
 * Find rows of convex weights over the cycle payoffs whose row-wise minimum
 * lies within [lower, upper]. Lower bounds constrain every row. For upper
 * bounds it is enough to let row i carry the bound of dimension i: any
 * selector that works can be turned into this one by copying rows.
 */
inline std::optional<SealedCombination>
sealed_feasible(const std::vector<std::vector<Rational>> &cycle_mps, const std::vector<ExtRat> &lower,
                const std::vector<ExtRat> &upper)
{
    if (cycle_mps.empty()) throw InputError("sealed_feasible needs at least one cycle");
    const size_t d = lower.size(), nc = cycle_mps.size();
    if (upper.size() != d) throw InputError("bound vectors differ in size");
    for (const auto &p : cycle_mps)
        if (p.size() != d) throw InputError("cycle payoff has the wrong dimension");

    std::vector<Relation> base;
    base.push_back(Relation{std::vector<Rational>(nc, Rational(1)), Rational(1), RelKind::Eq});
    for (size_t k = 0; k < d; ++k) {
        if (lower[k].is_pos_inf()) return std::nullopt;
        if (!lower[k].is_finite()) continue;
        Relation r{std::vector<Rational>(nc), lower[k].value(), RelKind::Geq};
        for (size_t c = 0; c < nc; ++c) r.coeffs[c] = cycle_mps[c][k];
        base.push_back(std::move(r));
    }

    SealedCombination out;
    for (size_t i = 0; i < d; ++i) {
        if (upper[i].is_neg_inf()) return std::nullopt;
        std::vector<Relation> rows = base;
        if (upper[i].is_finite()) {
            Relation r{std::vector<Rational>(nc), upper[i].value(), RelKind::Leq};
            for (size_t c = 0; c < nc; ++c) r.coeffs[c] = cycle_mps[c][i];
            rows.push_back(std::move(r));
        }
        LpResult res = minimize_nonneg(nc, rows, std::vector<Rational>(nc));
        if (res.status != Status::Optimal) return std::nullopt;
        out.alpha.push_back(res.point);
    }
    if (d == 0) {
        LpResult res = minimize_nonneg(nc, base, std::vector<Rational>(nc));
        if (res.status != Status::Optimal) return std::nullopt;
        out.alpha.push_back(res.point);
    }
    out.value = sealed_value(out.alpha, cycle_mps);
    return out;
}

} // namespace mpspe::lp

#endif
