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

#ifndef MPSPE_WITNESS_HPP
#define MPSPE_WITNESS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpspe/deviation_graph.hpp"
#include "mpspe/families.hpp"
#include "mpspe/graph.hpp"
#include "mpspe/linprog.hpp"
#include "mpspe/negotiation.hpp"

namespace mpspe {

/// Does some eps-SPE from init have a payoff between lower and upper?
struct ThresholdInstance
{
    Game game;
    std::vector<ExtRat> lower;
    std::vector<ExtRat> upper;
    ExtRat epsilon = 0;

    void
    validate() const
    {
        game.validate();
        if (!game.init()) throw InputError("the game needs an initial vertex");
        if (lower.size() != game.num_players() || upper.size() != game.num_players())
            throw InputError("thresholds need one value per player");
        if (!epsilon.is_finite() || epsilon.value() < 0) throw InputError("epsilon must be a nonnegative rational");
    }
};

/**
 * Certificate for a positive instance: the play is described by the sets W
 * (seen infinitely often) and Wp (seen at all) and by convex weights over
 * the simple cycles of W, one row per player.
 */
struct Witness
{
    std::vector<Vertex> W;  // sorted
    std::vector<Vertex> Wp; // sorted
    std::vector<Cycle> cycles;
    std::vector<std::vector<Rational>> alpha; // alpha[player][cycle]
    Requirement lam;
    std::vector<ProverStrategy> strategies; // strategies[v] is used from v
    ExtRat epsilon = 0;

    friend bool operator==(const Witness &, const Witness &) = default;
};

struct PlayCheck
{
    bool ok = false;
    PayoffVector z;
    std::string reason;
};

/**
 * Do W, Wp and alpha describe plays from init whose payoff z lies within the
 * thresholds and dominates lam on Wp? Throws MalformedPlay on weights that
 * are negative or do not sum to one.
 */
inline PlayCheck
check_play_witness(const ThresholdInstance &inst, const std::vector<Vertex> &W, const std::vector<Vertex> &Wp,
                   const std::vector<Cycle> &cycles, const std::vector<std::vector<Rational>> &alpha,
                   const Requirement &lam)
{
    inst.validate();
    const Game &g = inst.game;
    const size_t n = g.num_vertices();
    if (lam.size() != n) throw InputError("requirement size does not match the game");
    if (alpha.size() != g.num_players()) throw MalformedPlay("alpha needs one row per player");
    for (const auto &row : alpha) {
        if (row.size() != cycles.size()) throw MalformedPlay("alpha row length differs from the cycle count");
        Rational s = 0;
        for (const auto &a : row) {
            if (a < 0) throw MalformedPlay("alpha has a negative entry");
            s += a;
        }
        if (s != 1) throw MalformedPlay("alpha row does not sum to one");
    }
    for (Vertex v : W)
        if (v >= n) throw MalformedPlay("W names an unknown vertex");
    for (Vertex v : Wp)
        if (v >= n) throw MalformedPlay("W' names an unknown vertex");

    PlayCheck out;
    auto fail = [&](std::string why) {
        out.reason = std::move(why);
        return out;
    };
    VertexMask mW = vector_to_mask(W), mWp = vector_to_mask(Wp);
    if (!mW) return fail("W is empty");
    if (mW & ~mWp) return fail("W is not a subset of W'");
    if (!graph::is_strongly_connected(g, mW)) return fail("W is not strongly connected");
    for (const auto &c : cycles) {
        check_cycle(g, c);
        if (!is_simple(c)) return fail("a weighted cycle is not simple");
        if (vector_to_mask(c) & ~mW) return fail("a weighted cycle leaves W");
    }
    Vertex v0 = *g.init();
    if (!(mWp & bit(v0))) return fail("the initial vertex is not in W'");
    if (!graph::coverage_walk_exists(g, v0, mW, mWp)) return fail("no walk from the initial vertex covers W' and reaches W");

    out.z = lp::sealed_value(alpha, cycle_payoffs(g, cycles));
    for (Player p = 0; p < g.num_players(); ++p) {
        ExtRat z(out.z[p]);
        if (z < inst.lower[p]) return fail("payoff of " + g.player_name(p) + " is below the lower threshold");
        if (inst.upper[p] < z) return fail("payoff of " + g.player_name(p) + " is above the upper threshold");
    }
    for (Vertex u : Wp)
        if (ExtRat(out.z[g.owner(u)]) < lam[u])
            return fail("payoff of " + g.player_name(g.owner(u)) + " is below the requirement at " + g.vertex_name(u));
    out.ok = true;
    return out;
}

struct WitnessVerdict
{
    bool valid = false;
    PayoffVector z;
    std::vector<std::string> diagnostics;
};

/// Checks the play part and then every Prover strategy against lam + eps.
inline WitnessVerdict
check_witness(const ThresholdInstance &inst, const Witness &w)
{
    WitnessVerdict out;
    const Game &g = inst.game;
    if (w.epsilon != inst.epsilon) out.diagnostics.push_back("witness epsilon differs from the instance");
    PlayCheck pc;
    try {
        pc = check_play_witness(inst, w.W, w.Wp, w.cycles, w.alpha, w.lam);
    } catch (const MalformedPlay &e) {
        out.diagnostics.push_back(std::string("play: ") + e.what());
        return out;
    }
    out.z = pc.z;
    if (!pc.ok) {
        out.diagnostics.push_back("play: " + pc.reason);
        return out;
    }
    if (w.strategies.size() != g.num_vertices()) {
        out.diagnostics.push_back("strategy: one strategy per vertex is required");
        return out;
    }
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        ExtRat bound = w.lam[v].is_finite() ? w.lam[v] + inst.epsilon : w.lam[v];
        try {
            ExtRat val = negotiation::prover_value(g, w.lam, g.owner(v), v, w.strategies[v]);
            if (bound < val) {
                out.diagnostics.push_back("strategy at " + g.vertex_name(v) + ": value " + val.str() + " exceeds " +
                                          bound.str());
                return out;
            }
        } catch (const InputError &e) {
            out.diagnostics.push_back("strategy at " + g.vertex_name(v) + ": " + e.what());
            return out;
        }
    }
    if (!out.diagnostics.empty()) return out;
    out.valid = true;
    return out;
}

enum class Verdict { Yes, No, Indeterminate };

inline const char *
verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "indeterminate";
    }
}

struct SearchResult
{
    Verdict verdict = Verdict::Indeterminate;
    std::optional<Witness> witness;
    Requirement lambda;
    std::vector<std::string> notes;
};

struct PlayPart
{
    std::vector<Vertex> W, Wp;
    std::vector<Cycle> cycles;
    std::vector<std::vector<Rational>> alpha;
    PayoffVector z;
};

/**
 * Tries every pair (W, Wp) reachable from the initial vertex, in a fixed
 * order, and returns the first sealed combination within the thresholds that
 * dominates lam on Wp and is accepted by `accept`.
 */
template <class Accept>
std::optional<PlayPart>
find_play(const ThresholdInstance &inst, const Requirement &lam, const negotiation::TailCatalog &cat,
          size_t max_cycles, Accept &&accept)
{
    const Game &g = inst.game;
    const Vertex v0 = *g.init();
    std::map<size_t, std::pair<std::vector<Cycle>, std::vector<PayoffVector>>> cycles_of;
    for (const auto &[k, Wp] : cat.by_start[v0]) {
        std::vector<ExtRat> lo = inst.lower;
        bool dead = false;
        for (Vertex u : mask_to_vector(Wp)) {
            if (lam[u].is_pos_inf()) dead = true;
            lo[g.owner(u)] = max(lo[g.owner(u)], lam[u]);
        }
        if (dead) continue;
        auto it = cycles_of.find(k);
        if (it == cycles_of.end()) {
            auto cs = graph::simple_cycles(g, cat.sc_sets[k], max_cycles);
            auto mps = cycle_payoffs(g, cs);
            it = cycles_of.emplace(k, std::make_pair(std::move(cs), std::move(mps))).first;
        }
        auto comb = lp::sealed_feasible(it->second.second, lo, inst.upper);
        if (!comb) continue;
        PlayPart part;
        part.W = mask_to_vector(cat.sc_sets[k]);
        part.Wp = mask_to_vector(Wp);
        part.z = comb->value;
        // keep only the cycles that carry weight
        part.alpha.resize(comb->alpha.size());
        for (size_t c = 0; c < it->second.first.size(); ++c) {
            bool any = false;
            for (const auto &row : comb->alpha) any = any || row[c] != 0;
            if (!any) continue;
            part.cycles.push_back(it->second.first[c]);
            for (size_t j = 0; j < comb->alpha.size(); ++j) part.alpha[j].push_back(comb->alpha[j][c]);
        }
        if (accept(part)) return part;
    }
    return std::nullopt;
}

/**
 * Computes the least fixed point, then looks for a play that it makes
 * consistent and returns the first witness that passes check_witness.
 */
inline SearchResult
search_witness(const ThresholdInstance &inst, negotiation::NegotiationOracleConfig cfg = {})
{
    inst.validate();
    const Game &g = inst.game;
    SearchResult res;
    cfg.epsilon = inst.epsilon;
    try {
        negotiation::Oracle oracle(g, cfg);
        negotiation::FixpointResult fr = negotiation::least_fixed_point(oracle);
        res.lambda = fr.lambda;
        if (!fr.converged) {
            res.notes.push_back("fixed point iteration hit its cap");
            return res;
        }
        Witness w;
        auto found = find_play(inst, fr.lambda, oracle.catalog(), cfg.max_cycles, [&](const PlayPart &part) {
            w = Witness{part.W, part.Wp, part.cycles, part.alpha, fr.lambda, fr.last.strategies, inst.epsilon};
            WitnessVerdict wv = check_witness(inst, w);
            for (auto &d : wv.diagnostics) res.notes.push_back("candidate rejected: " + d);
            return wv.valid;
        });
        if (found) {
            res.verdict = Verdict::Yes;
            res.witness = std::move(w);
        } else {
            res.verdict = Verdict::No;
        }
        return res;
    } catch (const CapExceeded &e) {
        res.verdict = Verdict::Indeterminate;
        res.notes.push_back(e.what());
        return res;
    }
}

/// SPE existence: the threshold problem with thresholds -inf and +inf.
inline SearchResult
spe_exists(const Game &g, const ExtRat &epsilon, const negotiation::NegotiationOracleConfig &cfg = {})
{
    ThresholdInstance inst{g, std::vector<ExtRat>(g.num_players(), ExtRat::neg_inf()),
                           std::vector<ExtRat>(g.num_players(), ExtRat::pos_inf()), epsilon};
    return search_witness(inst, cfg);
}

} // namespace mpspe

#endif
