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

#ifndef MPSPE_PLAY_HPP
#define MPSPE_PLAY_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "mpspe/ext_rat.hpp"
#include "mpspe/game.hpp"

namespace mpspe {

using Cycle = std::vector<Vertex>;
using PayoffVector = std::vector<Rational>;

/// A requirement assigns an extended rational to every vertex.
using Requirement = std::vector<ExtRat>;

/// Ultimately periodic play: prefix followed by the cycle repeated forever.
struct LassoPlay
{
    std::vector<Vertex> prefix;
    Cycle cycle;
};

inline Requirement
bottom_requirement(const Game &g)
{
    return Requirement(g.num_vertices(), ExtRat::neg_inf());
}

/// Throws MalformedPlay if consecutive vertices of the walk are not edges.
inline void
check_walk(const Game &g, const std::vector<Vertex> &walk)
{
    for (Vertex v : walk)
        if (v >= g.num_vertices()) throw MalformedPlay("vertex index out of range");
    for (size_t k = 0; k + 1 < walk.size(); ++k)
        if (!g.has_edge(walk[k], walk[k + 1]))
            throw MalformedPlay(g.vertex_name(walk[k]) + "->" + g.vertex_name(walk[k + 1]) + " is not an edge");
}

inline void
check_cycle(const Game &g, const Cycle &c)
{
    if (c.empty()) throw MalformedPlay("empty cycle");
    check_walk(g, c);
    if (!g.has_edge(c.back(), c.front()))
        throw MalformedPlay("cycle does not close: " + g.vertex_name(c.back()) + "->" + g.vertex_name(c.front()));
}

inline void
check_lasso(const Game &g, const LassoPlay &p)
{
    check_cycle(g, p.cycle);
    check_walk(g, p.prefix);
    if (!p.prefix.empty() && !g.has_edge(p.prefix.back(), p.cycle.front()))
        throw MalformedPlay("prefix does not lead into the cycle");
}

/// Sum of player p's rewards along the closed walk c.
inline Rational
cycle_sum(const Game &g, Player p, const Cycle &c)
{
    Rational s = 0;
    for (size_t k = 0; k < c.size(); ++k) s += g.reward(p, c[k], c[(k + 1) % c.size()]);
    return s;
}

inline PayoffVector
mp_of_cycle(const Game &g, const Cycle &c)
{
    check_cycle(g, c);
    PayoffVector out(g.num_players());
    for (Player p = 0; p < g.num_players(); ++p) out[p] = cycle_sum(g, p, c) / Rational(long(c.size()));
    for (auto &x : out) x.canonicalize();
    return out;
}

inline PayoffVector
payoff_of_lasso(const Game &g, const LassoPlay &p)
{
    check_lasso(g, p);
    return mp_of_cycle(g, p.cycle);
}

/**
 * Every visited vertex owned by j must have its requirement met by the
 * payoff of player j. Suffix payoffs all equal the play payoff.
 */
inline bool
lasso_is_consistent(const Game &g, const Requirement &lam, const LassoPlay &p)
{
    if (lam.size() != g.num_vertices()) throw InputError("requirement size does not match the game");
    PayoffVector mu = payoff_of_lasso(g, p);
    auto ok = [&](Vertex v) { return !(ExtRat(mu[g.owner(v)]) < lam[v]); };
    for (Vertex v : p.prefix) if (!ok(v)) return false;
    for (Vertex v : p.cycle) if (!ok(v)) return false;
    return true;
}

inline bool
requirement_leq(const Requirement &a, const Requirement &b)
{
    if (a.size() != b.size()) throw InputError("requirements over different vertex sets");
    for (size_t k = 0; k < a.size(); ++k)
        if (b[k] < a[k]) return false;
    return true;
}

/// Least rotation of c in lexicographic order of vertex indices.
inline Cycle
canonical_cycle(const Cycle &c)
{
    if (c.empty()) return c;
    size_t n = c.size(), best = 0;
    for (size_t s = 1; s < n; ++s) {
        for (size_t k = 0; k < n; ++k) {
            Vertex a = c[(s + k) % n], b = c[(best + k) % n];
            if (a != b) {
                if (a < b) best = s;
                break;
            }
        }
    }
    Cycle out(n);
    for (size_t k = 0; k < n; ++k) out[k] = c[(best + k) % n];
    return out;
}

inline bool
is_simple(const std::vector<Vertex> &walk)
{
    std::vector<Vertex> s = walk;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

} // namespace mpspe

#endif
