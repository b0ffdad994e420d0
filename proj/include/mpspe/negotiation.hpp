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

#ifndef MPSPE_NEGOTIATION_HPP
#define MPSPE_NEGOTIATION_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mpspe/detail/threshold_game.hpp"
#include "mpspe/deviation_graph.hpp"
#include "mpspe/families.hpp"
#include "mpspe/graph.hpp"
#include "mpspe/linprog.hpp"

namespace mpspe::negotiation {

struct NegotiationOracleConfig
{
    size_t max_vertices = 12;
    size_t max_simple_paths = 200000; // per anchor vertex
    size_t max_families = 200000;     // per player, before pruning
    size_t max_cycles = 1000000;
    ExtRat epsilon = 0;
    size_t max_iterations = 64;
};

/**
 * Plays from a start vertex s with a given occurrence set W and set W2 of
 * vertices seen infinitely often. Depends on the game only.
 */
struct TailCatalog
{
    std::vector<VertexMask> sc_sets;               // strongly connected vertex sets
    std::vector<std::vector<PayoffVector>> points; // distinct simple-cycle payoffs of each set
    std::vector<std::vector<std::pair<size_t, VertexMask>>> by_start; // s -> (set index, W)

    static TailCatalog
    build(const Game &g, size_t max_cycles)
    {
        const size_t n = g.num_vertices();
        if (n > 20) throw CapExceeded("tail catalog needs at most 20 vertices");
        TailCatalog cat;
        const VertexMask all = bit(n) - 1;
        for (VertexMask W2 = 1; W2 <= all; ++W2) {
            if (!graph::is_strongly_connected(g, W2)) continue;
            cat.sc_sets.push_back(W2);
            std::set<PayoffVector> pts;
            for (const auto &c : graph::simple_cycles(g, W2, max_cycles)) pts.insert(mp_of_cycle(g, c));
            cat.points.emplace_back(pts.begin(), pts.end());
        }
        cat.by_start.resize(n);
        for (Vertex s = 0; s < n; ++s) {
            for (size_t k = 0; k < cat.sc_sets.size(); ++k) {
                VertexMask base = cat.sc_sets[k] | bit(s);
                VertexMask rest = all & ~base;
                for (VertexMask sub = rest;; sub = (sub - 1) & rest) {
                    VertexMask W = base | sub;
                    if (graph::coverage_walk_exists(g, s, cat.sc_sets[k], W)) cat.by_start[s].push_back({k, W});
                    if (!sub) break;
                }
            }
        }
        return cat;
    }
};

struct NegoResult
{
    Requirement value;
    /// strategies[v]: an optimal memoryless Prover strategy for the root v
    std::vector<ProverStrategy> strategies;
};

namespace detail {

inline std::vector<std::vector<Vertex>>
simple_paths_from(const Game &g, Vertex v, size_t cap)
{
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> path{v};
    std::vector<char> on(g.num_vertices(), 0);
    on[v] = 1;
    auto rec = [&](auto &self) -> void {
        out.push_back(path);
        if (out.size() > cap) throw CapExceeded("simple path enumeration exceeded its cap");
        for (Vertex w : g.successors(path.back())) {
            if (on[w]) continue;
            on[w] = 1;
            path.push_back(w);
            self(self);
            path.pop_back();
            on[w] = 0;
        }
    };
    rec(rec);
    return out;
}

} // namespace detail

/**
 * Computes the negotiation function through the reduced negotiation game:
 * the Prover families of every anchor are enumerated and the resulting
 * two-player arena is solved for decreasing thresholds.
 */
class Oracle
{
public:
    Oracle(const Game &g, NegotiationOracleConfig cfg) : g_(g), cfg_(std::move(cfg))
    {
        g_.validate();
        if (g_.num_vertices() > cfg_.max_vertices)
            throw CapExceeded("game has " + std::to_string(g_.num_vertices()) + " vertices, above the cap of " +
                              std::to_string(cfg_.max_vertices));
        catalog_ = TailCatalog::build(g_, cfg_.max_cycles);
        cycles_from_.resize(g_.num_vertices());
        for (const auto &c : graph::simple_cycles(graph::full_graph(g_), cfg_.max_cycles)) {
            for (size_t p = 0; p < c.size(); ++p) {
                Cycle r(c.begin() + long(p), c.end());
                r.insert(r.end(), c.begin(), c.begin() + long(p));
                cycles_from_[c[p]].push_back(std::move(r));
            }
        }
        for (Vertex v = 0; v < g_.num_vertices(); ++v) {
            for (auto &h : detail::simple_paths_from(g_, v, cfg_.max_simple_paths)) {
                for (const auto &c : cycles_from_[v]) shapes_.push_back({v, {}, c});
                for (Vertex x : g_.successors(h.back()))
                    for (const auto &c : cycles_from_[x]) shapes_.push_back({v, h, c});
                if (shapes_.size() > cfg_.max_families) throw CapExceeded("family enumeration exceeded its cap");
            }
        }
        // the empty-history shapes were added once per path; keep one copy
        std::sort(shapes_.begin(), shapes_.end());
        shapes_.erase(std::unique(shapes_.begin(), shapes_.end()), shapes_.end());
    }

    const Game &game() const { return g_; }
    const TailCatalog &catalog() const { return catalog_; }
    const NegotiationOracleConfig &config() const { return cfg_; }

    NegoResult
    evaluate(const Requirement &lam)
    {
        if (lam.size() != g_.num_vertices()) throw InputError("requirement size does not match the game");
        lam_ = lam;
        lp_cache_.clear();
        tail_cache_.clear();
        bound_ids_.assign(size_t(1) << g_.num_vertices(), -1);
        bounds_.clear();
        bound_index_.clear();

        NegoResult res;
        res.value.assign(g_.num_vertices(), ExtRat::pos_inf());
        res.strategies.assign(g_.num_vertices(), ProverStrategy(g_.num_vertices()));
        for (Player i = 0; i < g_.num_players(); ++i) {
            if (!g_.owned_mask(i)) continue;
            PlayerArena pa = build_arena(i);
            for (Vertex r = 0; r < g_.num_vertices(); ++r) {
                if (g_.owner(r) != i) continue;
                auto [val, tau] = descend(pa, r);
                res.value[r] = val;
                res.strategies[r] = std::move(tau);
            }
        }
        return res;
    }

private:
    struct Shape
    {
        Vertex anchor;
        std::vector<Vertex> h;
        Cycle c;
        friend auto operator<=>(const Shape &, const Shape &) = default;
    };

    struct TailChoice
    {
        VertexMask W;
        VertexMask targets;
        PayoffVector xbar;
    };

    struct Candidate
    {
        PunishmentFamily fam;
        Rational xi;
        Rational tag;
        VertexMask targets;
        std::vector<std::tuple<Vertex, Rational, size_t>> pre; // sorted
    };

    struct PlayerArena
    {
        Player player;
        mpspe::detail::Arena arena;
        std::vector<std::optional<PunishmentFamily>> family; // per node, set on proposals
        std::vector<Rational> xi;                            // per node, proposals
        std::vector<std::optional<Rational>> post_tag;       // per node, posts
        size_t top = 0;
    };

    // -1: some vertex of S has requirement +inf
    int
    bound_id(VertexMask S)
    {
        int &slot = bound_ids_[S];
        if (slot != -1) return slot;
        std::vector<ExtRat> b(g_.num_players(), ExtRat::neg_inf());
        for (Vertex u : mask_to_vector(S)) {
            if (lam_[u].is_pos_inf()) return slot = -2;
            b[g_.owner(u)] = max(b[g_.owner(u)], lam_[u]);
        }
        auto it = bound_index_.find(b);
        if (it == bound_index_.end()) {
            it = bound_index_.emplace(b, int(bounds_.size())).first;
            bounds_.push_back(b);
        }
        return slot = it->second;
    }

    // least xbar_i over the hull of the cycle payoffs of set k, subject to the bounds
    const std::optional<PayoffVector> &
    min_tail(Player i, size_t k, int bid)
    {
        auto key = std::make_tuple(i, k, bid);
        auto it = lp_cache_.find(key);
        if (it != lp_cache_.end()) return it->second;
        const auto &pts = catalog_.points[k];
        const auto &b = bounds_[size_t(bid)];
        const size_t nc = pts.size();
        std::vector<lp::Relation> rows;
        rows.push_back(lp::Relation{std::vector<Rational>(nc, Rational(1)), Rational(1), lp::RelKind::Eq});
        for (Player j = 0; j < g_.num_players(); ++j) {
            if (!b[j].is_finite()) continue;
            lp::Relation r{std::vector<Rational>(nc), b[j].value(), lp::RelKind::Geq};
            for (size_t c = 0; c < nc; ++c) r.coeffs[c] = pts[c][j];
            rows.push_back(std::move(r));
        }
        std::vector<Rational> cost(nc);
        for (size_t c = 0; c < nc; ++c) cost[c] = pts[c][i];
        lp::LpResult r = lp::minimize_nonneg(nc, rows, cost);
        std::optional<PayoffVector> out;
        if (r.status == lp::Status::Optimal) {
            PayoffVector x(g_.num_players());
            for (size_t c = 0; c < nc; ++c)
                for (Player j = 0; j < g_.num_players(); ++j) x[j] += r.point[c] * pts[c][j];
            for (auto &q : x) q.canonicalize();
            out = std::move(x);
        }
        return lp_cache_.emplace(key, std::move(out)).first->second;
    }

    // Pareto-optimal tails after h.c, keyed by Occ(h.c) and last(c)
    const std::vector<TailChoice> &
    tails(Player i, VertexMask occ, Vertex last)
    {
        auto key = std::make_tuple(i, occ, last);
        auto it = tail_cache_.find(key);
        if (it != tail_cache_.end()) return it->second;

        std::map<VertexMask, TailChoice> best;
        for (Vertex s : g_.successors(last)) {
            for (const auto &[k, W] : catalog_.by_start[s]) {
                int bid = bound_id(occ | W);
                if (bid < 0) continue;
                const auto &x = min_tail(i, k, bid);
                if (!x) continue;
                auto b = best.find(W);
                if (b == best.end() || (*x)[i] < b->second.xbar[i])
                    best[W] = TailChoice{W, post_targets(g_, i, mask_to_vector(W)), *x};
            }
        }
        std::vector<TailChoice> all;
        for (auto &[W, t] : best) all.push_back(t);
        std::vector<TailChoice> kept;
        for (size_t a = 0; a < all.size(); ++a) {
            bool dominated = false;
            for (size_t b = 0; b < all.size() && !dominated; ++b) {
                if (a == b) continue;
                bool sub = (all[b].targets & ~all[a].targets) == 0;
                bool le = all[b].xbar[i] <= all[a].xbar[i];
                bool strict = all[b].targets != all[a].targets || all[b].xbar[i] < all[a].xbar[i];
                if (sub && le && (strict || b < a)) dominated = true;
            }
            if (!dominated) kept.push_back(all[a]);
        }
        return tail_cache_.emplace(key, std::move(kept)).first->second;
    }

    PlayerArena
    build_arena(Player i)
    {
        const size_t n = g_.num_vertices();
        std::vector<std::vector<Candidate>> per_anchor(n);
        for (const auto &sh : shapes_) {
            PunishmentFamily proto{sh.h, sh.c, {}, {}};
            std::vector<Vertex> seq = proto.hc();
            VertexMask occ = vector_to_mask(seq);
            const auto &ts = tails(i, occ, sh.c.back());
            if (ts.empty()) continue;
            std::vector<std::tuple<Vertex, Rational, size_t>> pre;
            for (auto &d : pre_deviations(g_, i, proto)) pre.emplace_back(d.target, d.weight, d.length);
            std::sort(pre.begin(), pre.end());
            Rational tag = cycle_sum(g_, i, sh.c) / Rational(long(sh.c.size()));
            tag.canonicalize();
            for (const auto &t : ts) {
                Candidate cand{PunishmentFamily{sh.h, sh.c, t.xbar, mask_to_vector(t.W)}, t.xbar[i], tag, t.targets,
                               pre};
                per_anchor[sh.anchor].push_back(std::move(cand));
            }
        }

        PlayerArena pa;
        pa.player = i;
        auto &a = pa.arena;
        for (Vertex v = 0; v < n; ++v) a.add_node(true);
        pa.top = a.add_node(false);
        a.add_arc(pa.top, pa.top);
        pa.family.resize(a.size());
        pa.xi.resize(a.size());
        pa.post_tag.resize(a.size());
        std::map<std::pair<Rational, Vertex>, size_t> posts;
        auto post_node = [&](const Rational &tag, Vertex u) {
            auto key = std::make_pair(tag, u);
            auto it = posts.find(key);
            if (it != posts.end()) return it->second;
            size_t id = a.add_node(false);
            a.add_arc(id, u);
            pa.family.emplace_back();
            pa.xi.emplace_back();
            pa.post_tag.emplace_back(tag);
            posts[key] = id;
            return id;
        };

        for (Vertex v = 0; v < n; ++v) {
            auto kept = prune(per_anchor[v]);
            for (const Candidate *c : kept) {
                size_t p = a.add_node(false);
                pa.family.emplace_back(c->fam);
                pa.xi.emplace_back(c->xi);
                pa.post_tag.emplace_back();
                a.add_arc(v, p);
                a.add_arc(p, pa.top);
                for (const auto &[u, w, len] : c->pre) a.add_arc(p, u, w, len);
                for (Vertex u : mask_to_vector(c->targets)) a.add_arc(p, post_node(c->tag, u));
            }
        }
        return pa;
    }

    // drop candidates that give Challenger a superset of another one's options
    static std::vector<const Candidate *>
    prune(const std::vector<Candidate> &cs)
    {
        auto better = [](const Candidate &a, const Candidate &b) {
            if (b.xi < a.xi) return false;
            if ((a.targets & ~b.targets) != 0) return false;
            if (a.targets && b.tag < a.tag) return false;
            return std::includes(b.pre.begin(), b.pre.end(), a.pre.begin(), a.pre.end());
        };
        std::vector<size_t> order(cs.size());
        for (size_t k = 0; k < cs.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
            if (cs[x].pre.size() != cs[y].pre.size()) return cs[x].pre.size() < cs[y].pre.size();
            return cs[x].xi < cs[y].xi;
        });
        std::vector<const Candidate *> kept;
        for (size_t k : order) {
            bool dominated = false;
            for (const Candidate *q : kept)
                if (better(*q, cs[k])) {
                    dominated = true;
                    break;
                }
            if (dominated) continue;
            // a later candidate may still dominate an earlier kept one
            std::erase_if(kept, [&](const Candidate *q) { return better(cs[k], *q); });
            kept.push_back(&cs[k]);
        }
        return kept;
    }

    ProverStrategy
    strategy_from(const PlayerArena &pa, const mpspe::detail::ThresholdSolution &sol) const
    {
        ProverStrategy tau(g_.num_vertices());
        for (Vertex v = 0; v < g_.num_vertices(); ++v) {
            if (!sol.prover_wins[v] || sol.choice[v] == mpspe::detail::no_choice) continue;
            tau[v] = pa.family[pa.arena.arcs[sol.choice[v]].dst];
        }
        return tau;
    }

    std::pair<ExtRat, ProverStrategy>
    descend(const PlayerArena &pa, Vertex root)
    {
        const auto &a = pa.arena;
        mpspe::detail::NodeSet all(a.size(), 1);
        auto safe = mpspe::detail::solve_safety(a, all);
        if (!safe.prover_wins[root]) return {ExtRat::pos_inf(), ProverStrategy(g_.num_vertices())};
        ProverStrategy tau = strategy_from(pa, safe);
        ExtRat value = prover_value(g_, lam_, pa.player, root, tau);

        for (;;) {
            const Rational alpha = value.value();
            mpspe::detail::NodeSet live(a.size(), 1), good(a.size(), 0), bad(a.size(), 0);
            good[pa.top] = 1;
            for (size_t v = 0; v < a.size(); ++v) {
                if (pa.family[v] && !(pa.xi[v] < alpha)) live[v] = 0;
                if (pa.post_tag[v]) (*pa.post_tag[v] < alpha ? good : bad)[v] = 1;
            }
            auto sol = mpspe::detail::solve_threshold(a, live, good, bad, alpha);
            if (!sol.prover_wins[root]) return {value, tau};
            ProverStrategy next = strategy_from(pa, sol);
            ExtRat nv = prover_value(g_, lam_, pa.player, root, next);
            if (!(nv < value)) throw std::logic_error("negotiation oracle: threshold strategy did not improve");
            value = nv;
            tau = std::move(next);
        }
    }

    Game g_;
    NegotiationOracleConfig cfg_;
    TailCatalog catalog_;
    std::vector<std::vector<Cycle>> cycles_from_;
    std::vector<Shape> shapes_;

    Requirement lam_;
    std::vector<int> bound_ids_;
    std::vector<std::vector<ExtRat>> bounds_;
    std::map<std::vector<ExtRat>, int> bound_index_;
    std::map<std::tuple<Player, size_t, int>, std::optional<PayoffVector>> lp_cache_;
    std::map<std::tuple<Player, VertexMask, Vertex>, std::vector<TailChoice>> tail_cache_;
};

inline NegoResult
nego_oracle(const Game &g, const Requirement &lam, const NegotiationOracleConfig &cfg = {})
{
    Oracle o(g, cfg);
    return o.evaluate(lam);
}

struct FixpointResult
{
    Requirement lambda;
    bool converged = false;
    std::vector<Requirement> trace; // lambda_1, lambda_2, ... (lambda_0 is -inf everywhere)
    NegoResult last;                // oracle output at lambda
};

/**
 * Iterates lambda <- nego(lambda) - eps from the constant -inf requirement
 * and stops as soon as the sequence stops increasing. The stopping point
 * satisfies nego(lambda) <= lambda + eps and lies below every other such
 * requirement.
 */
inline FixpointResult
least_fixed_point(Oracle &oracle)
{
    const Game &g = oracle.game();
    const ExtRat &eps = oracle.config().epsilon;
    if (!eps.is_finite() || eps.value() < 0) throw InputError("epsilon must be a nonnegative rational");
    FixpointResult fr;
    fr.lambda = bottom_requirement(g);
    for (size_t it = 0; it <= oracle.config().max_iterations; ++it) {
        NegoResult res = oracle.evaluate(fr.lambda);
        Requirement next(g.num_vertices());
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            next[v] = res.value[v].is_finite() ? res.value[v] - eps : res.value[v];
        if (requirement_leq(next, fr.lambda)) {
            fr.converged = true;
            fr.last = std::move(res);
            return fr;
        }
        if (it == oracle.config().max_iterations) {
            fr.last = std::move(res);
            break;
        }
        fr.lambda = next;
        fr.trace.push_back(next);
    }
    return fr;
}

inline FixpointResult
least_fixed_point(const Game &g, const NegotiationOracleConfig &cfg = {})
{
    Oracle o(g, cfg);
    return least_fixed_point(o);
}

} // namespace mpspe::negotiation

#endif
