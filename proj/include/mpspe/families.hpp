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

#ifndef MPSPE_FAMILIES_HPP
#define MPSPE_FAMILIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "mpspe/game.hpp"
#include "mpspe/graph.hpp"
#include "mpspe/linprog.hpp"
#include "mpspe/play.hpp"

namespace mpspe {

/**
 * The plays h c^n rho with n > 0, mu(rho) = xbar and Occ(rho) = W.
 */
struct PunishmentFamily
{
    std::vector<Vertex> h; // simple, possibly empty
    Cycle c;               // simple, nonempty
    PayoffVector xbar;
    std::vector<Vertex> W; // sorted

    Vertex anchor() const { return h.empty() ? c.front() : h.front(); }

    /// h followed by one copy of c.
    std::vector<Vertex>
    hc() const
    {
        std::vector<Vertex> out = h;
        out.insert(out.end(), c.begin(), c.end());
        return out;
    }

    friend bool operator==(const PunishmentFamily &, const PunishmentFamily &) = default;
};

/// Memoryless Prover strategy: a family per vertex, or nullopt for giving up.
using ProverStrategy = std::vector<std::optional<PunishmentFamily>>;

/// Throws MalformedPlay when the family is not well formed.
inline void
check_family_shape(const Game &g, const PunishmentFamily &f)
{
    if (f.c.empty()) throw MalformedPlay("punishing cycle is empty");
    if (!is_simple(f.h)) throw MalformedPlay("history of a family is not simple");
    if (!is_simple(f.c)) throw MalformedPlay("punishing cycle is not simple");
    check_walk(g, f.hc());
    check_cycle(g, f.c);
    if (f.xbar.size() != g.num_players()) throw MalformedPlay("tail payoff has the wrong dimension");
    if (f.W.empty()) throw MalformedPlay("tail occurrence set is empty");
    for (Vertex w : f.W)
        if (w >= g.num_vertices()) throw MalformedPlay("tail occurrence set names an unknown vertex");
    if (!std::is_sorted(f.W.begin(), f.W.end()) || std::adjacent_find(f.W.begin(), f.W.end()) != f.W.end())
        throw MalformedPlay("tail occurrence set must be sorted and duplicate free");
}

/// Every vertex u seen by the family, owned by j, has xbar_j >= lam(u).
inline bool
family_is_consistent(const Game &g, const Requirement &lam, const PunishmentFamily &f)
{
    auto ok = [&](Vertex u) { return !(ExtRat(f.xbar.at(g.owner(u))) < lam.at(u)); };
    for (Vertex u : f.h) if (!ok(u)) return false;
    for (Vertex u : f.c) if (!ok(u)) return false;
    for (Vertex u : f.W) if (!ok(u)) return false;
    return true;
}

/// Payoff vectors of the simple cycles of W, one per cycle.
inline std::vector<PayoffVector>
cycle_payoffs(const Game &g, const std::vector<Cycle> &cycles)
{
    std::vector<PayoffVector> out;
    for (const auto &c : cycles) out.push_back(mp_of_cycle(g, c));
    return out;
}

/**
 * Is there a play rho from a successor of last(c) with Occ(rho) = W and
 * mu(rho) = xbar? Tries every strongly connected W2 inside W as the set of
 * vertices seen infinitely often.
 */
inline bool
family_is_realizable(const Game &g, const PunishmentFamily &f)
{
    check_family_shape(g, f);
    if (g.num_vertices() > 63) throw CapExceeded("realizability check needs at most 63 vertices");
    VertexMask W = vector_to_mask(f.W);
    VertexMask starts = g.successor_mask(f.c.back()) & W;
    std::vector<ExtRat> target(f.xbar.begin(), f.xbar.end());
    for (VertexMask W2 = W; W2; W2 = (W2 - 1) & W) {
        if (!graph::is_strongly_connected(g, W2)) continue;
        bool reach = false;
        for (Vertex s : mask_to_vector(starts))
            if (graph::coverage_walk_exists(g, s, W2, W)) {
                reach = true;
                break;
            }
        if (!reach) continue;
        auto mps = cycle_payoffs(g, graph::simple_cycles(g, W2));
        if (lp::sealed_feasible(mps, target, target)) return true;
    }
    return false;
}

inline std::string
describe_family(const Game &g, const PunishmentFamily &f)
{
    auto list = [&](const std::vector<Vertex> &vs) {
        std::string s;
        for (size_t k = 0; k < vs.size(); ++k) s += (k ? "," : "") + g.vertex_name(vs[k]);
        return s.empty() ? std::string("-") : s;
    };
    std::string x;
    for (Player p = 0; p < g.num_players(); ++p)
        x += (p ? "," : "") + g.player_name(p) + "=" + f.xbar.at(p).get_str();
    return "h=" + list(f.h) + " c=" + list(f.c) + " x=" + x + " W=" + list(f.W);
}

} // namespace mpspe

#endif
