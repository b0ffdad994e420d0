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

#ifndef MPSPE_REDUCTIONS_HPP
#define MPSPE_REDUCTIONS_HPP

#include <cstdlib>
#include <string>
#include <vector>

#include "mpspe/game.hpp"
#include "mpspe/witness.hpp"

namespace mpspe::reductions {

/// A formula in conjunctive normal form; literal k > 0 is x_k, k < 0 is not x_|k|.
struct CnfFormula
{
    size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;

    void
    validate() const
    {
        if (clauses.empty()) throw InputError("formula has no clauses");
        for (const auto &cl : clauses) {
            if (cl.empty()) throw InputError("formula has an empty clause");
            for (int lit : cl)
                if (lit == 0 || size_t(std::abs(lit)) > num_vars)
                    throw InputError("literal " + std::to_string(lit) + " is out of range");
        }
    }

    friend bool operator==(const CnfFormula &, const CnfFormula &) = default;
};

inline std::string
literal_vertex(size_t clause, int lit)
{
    return "C" + std::to_string(clause + 1) + "." + (lit < 0 ? "~" : "") + "x" + std::to_string(std::abs(lit));
}

/**
 * Solver (player S) walks through the clauses and picks a literal in each;
 * the literal's variable owns the literal state. Entering a positive literal
 * of x costs x its reward, and a negative literal lets x escape to the sink
 * bot where Solver gets 0.
 */
inline Game
build_g_phi(const CnfFormula &phi)
{
    phi.validate();
    Game g;
    for (size_t x = 1; x <= phi.num_vars; ++x) g.add_player("x" + std::to_string(x));
    const Player S = g.add_player("S");
    const size_t np = g.num_players();
    const size_t m = phi.clauses.size();

    std::vector<Vertex> clause(m);
    for (size_t k = 0; k < m; ++k) clause[k] = g.add_vertex("C" + std::to_string(k + 1), S);
    std::vector<std::vector<std::pair<int, Vertex>>> lits(m);
    for (size_t k = 0; k < m; ++k) {
        for (int lit : phi.clauses[k]) {
            std::string name = literal_vertex(k, lit);
            if (g.find_vertex(name)) continue; // repeated literal
            lits[k].push_back({lit, g.add_vertex(name, Player(std::abs(lit) - 1))});
        }
    }
    const Vertex bot = g.add_vertex("bot", S);

    std::vector<Rational> ones(np, Rational(1));
    for (size_t k = 0; k < m; ++k) {
        for (auto [lit, v] : lits[k]) {
            auto r = ones;
            if (lit > 0) r[size_t(lit - 1)] = 0;
            g.add_edge(clause[k], v, r);
            g.add_edge(v, clause[(k + 1) % m], ones);
            if (lit < 0) g.add_edge(v, bot, ones);
        }
    }
    auto r = ones;
    r[S] = 0;
    g.add_edge(bot, bot, r);
    g.set_init(clause[0]);
    return g;
}

/**
 * Wraps G^phi: from a, player circle may enter G^phi or go to b, where player
 * square may go back to a or stop in c. Inside G^phi both new players get
 * 1 - r_S.
 */
inline Game
build_h_phi(const CnfFormula &phi)
{
    Game inner = build_g_phi(phi);
    const size_t ni = inner.num_players();
    const Player S = ni - 1;

    Game h;
    for (Player p = 0; p < ni; ++p) h.add_player(inner.player_name(p));
    const Player circle = h.add_player("circle");
    const Player square = h.add_player("square");
    const size_t np = h.num_players();
    for (Vertex v = 0; v < inner.num_vertices(); ++v) h.add_vertex(inner.vertex_name(v), inner.owner(v));
    const Vertex a = h.add_vertex("a", circle);
    const Vertex b = h.add_vertex("b", square);
    const Vertex c = h.add_vertex("c", square);

    for (const Edge &e : inner.edges()) {
        std::vector<Rational> r = e.reward;
        r.push_back(1 - e.reward[S]);
        r.push_back(1 - e.reward[S]);
        h.add_edge(e.from, e.to, r);
    }
    auto rewards = [&](Rational rc, Rational rs) {
        std::vector<Rational> r(np, Rational(0));
        r[circle] = rc;
        r[square] = rs;
        return r;
    };
    h.add_edge(a, b, rewards(0, 3));
    h.add_edge(b, a, rewards(0, 3));
    h.add_edge(a, *inner.init(), rewards(0, 0));
    h.add_edge(b, c, rewards(0, 0));
    h.add_edge(c, c, rewards(2, 2));
    h.set_init(a);
    return h;
}

/// Truth-table satisfiability, for formulas with few variables.
inline bool
brute_force_sat(const CnfFormula &phi)
{
    phi.validate();
    if (phi.num_vars > 24) throw CapExceeded("truth table needs at most 24 variables");
    for (uint64_t asg = 0; asg < (uint64_t(1) << phi.num_vars); ++asg) {
        bool all = true;
        for (const auto &cl : phi.clauses) {
            bool sat = false;
            for (int lit : cl) {
                bool val = (asg >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

struct SanityReport
{
    bool satisfiable = false;
    Verdict spe = Verdict::Indeterminate;
    bool agree = false;
};

/// An SPE exists in H^phi exactly when phi is satisfiable.
inline SanityReport
reduction_sanity(const CnfFormula &phi, const negotiation::NegotiationOracleConfig &cfg = {})
{
    SanityReport r;
    r.satisfiable = brute_force_sat(phi);
    r.spe = spe_exists(build_h_phi(phi), ExtRat(0), cfg).verdict;
    r.agree = r.spe != Verdict::Indeterminate && (r.spe == Verdict::Yes) == r.satisfiable;
    return r;
}

} // namespace mpspe::reductions

#endif
