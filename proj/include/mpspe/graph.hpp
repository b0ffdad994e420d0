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

#ifndef MPSPE_GRAPH_HPP
#define MPSPE_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "mpspe/error.hpp"
#include "mpspe/ext_rat.hpp"
#include "mpspe/game.hpp"
#include "mpspe/play.hpp"

namespace mpspe::graph {

struct Digraph
{
    size_t n = 0;
    std::vector<std::vector<size_t>> adj;

    explicit Digraph(size_t nodes = 0) : n(nodes), adj(nodes) {}
    void add_arc(size_t u, size_t v) { adj.at(u).push_back(v); }
};

/// Subgraph of the game induced by W. Nodes keep their vertex index.
inline Digraph
induced(const Game &g, VertexMask W)
{
    Digraph d(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (!(W & bit(v))) continue;
        for (Vertex u : g.successors(v))
            if (W & bit(u)) d.add_arc(v, u);
    }
    return d;
}

inline Digraph
full_graph(const Game &g)
{
    VertexMask all = g.num_vertices() >= 64 ? ~VertexMask(0) : (bit(g.num_vertices()) - 1);
    return induced(g, all);
}

struct SccResult
{
    std::vector<size_t> comp;                 // node -> component, numbered in topological order
    std::vector<std::vector<size_t>> members; // component -> nodes, sorted
    std::vector<std::vector<size_t>> dag;     // deduplicated condensation arcs
    std::vector<bool> cyclic;                 // component contains a cycle
};

/**
 * Tarjan's algorithm, iterative. Components are renumbered so that every
 * condensation arc goes from a smaller to a larger index.
 */
inline SccResult
scc(const Digraph &g)
{
    const size_t n = g.n, none = size_t(-1);
    std::vector<size_t> index(n, none), low(n, 0), comp(n, none), stack;
    std::vector<bool> on_stack(n, false);
    size_t counter = 0, ncomp = 0;

    for (size_t root = 0; root < n; ++root) {
        if (index[root] != none) continue;
        std::vector<std::pair<size_t, size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto &[v, pos] = call.back();
            if (pos < g.adj[v].size()) {
                size_t w = g.adj[v][pos++];
                if (index[w] == none) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }

    // Tarjan emits sinks first.
    SccResult r;
    r.comp.resize(n);
    for (size_t v = 0; v < n; ++v) r.comp[v] = ncomp - 1 - comp[v];
    r.members.assign(ncomp, {});
    for (size_t v = 0; v < n; ++v) r.members[r.comp[v]].push_back(v);
    r.cyclic.assign(ncomp, false);
    std::vector<std::set<size_t>> dag(ncomp);
    for (size_t v = 0; v < n; ++v) {
        for (size_t w : g.adj[v]) {
            if (r.comp[v] == r.comp[w]) r.cyclic[r.comp[v]] = true;
            else dag[r.comp[v]].insert(r.comp[w]);
        }
    }
    for (auto &s : dag) r.dag.emplace_back(s.begin(), s.end());
    return r;
}

inline std::vector<bool>
reachable_from(const Digraph &g, size_t source)
{
    std::vector<bool> seen(g.n, false);
    std::vector<size_t> todo{source};
    seen.at(source) = true;
    while (!todo.empty()) {
        size_t v = todo.back();
        todo.pop_back();
        for (size_t w : g.adj[v])
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

/// Nonempty and strongly connected inside its induced subgraph.
inline bool
is_strongly_connected(const Game &g, VertexMask W)
{
    if (!W) return false;
    Digraph d = induced(g, W);
    Vertex first = mask_to_vector(W).front();
    auto fwd = reachable_from(d, first);
    Digraph rev(d.n);
    for (size_t v = 0; v < d.n; ++v)
        for (size_t w : d.adj[v]) rev.add_arc(w, v);
    auto bwd = reachable_from(rev, first);
    for (Vertex v : mask_to_vector(W))
        if (!fwd[v] || !bwd[v]) return false;
    if (std::popcount(W) == 1) return g.has_edge(first, first);
    return true;
}

/**
 * All simple cycles of d (Johnson's algorithm). Each cycle starts at its
 * smallest node, which is the canonical rotation for simple cycles. Throws
 * CapExceeded when more than cap cycles exist.
 */
inline std::vector<Cycle>
simple_cycles(const Digraph &d, size_t cap = 1000000)
{
    std::vector<Cycle> out;
    const size_t n = d.n;
    std::vector<bool> blocked(n);
    std::vector<std::set<size_t>> B(n);
    std::vector<size_t> path;

    for (size_t s = 0; s < n; ++s) {
        // restrict to nodes >= s, then to the component of s
        Digraph sub(n);
        for (size_t v = s; v < n; ++v)
            for (size_t w : d.adj[v])
                if (w >= s) sub.add_arc(v, w);
        SccResult comps = scc(sub);
        size_t cs = comps.comp[s];
        if (!comps.cyclic[cs]) continue;
        auto in_comp = [&](size_t v) { return comps.comp[v] == cs; };

        for (size_t v = 0; v < n; ++v) {
            blocked[v] = false;
            B[v].clear();
        }

        std::function<void(size_t)> unblock = [&](size_t u) {
            blocked[u] = false;
            auto bu = std::move(B[u]);
            B[u].clear();
            for (size_t w : bu)
                if (blocked[w]) unblock(w);
        };

        std::function<bool(size_t)> circuit = [&](size_t v) -> bool {
            bool found = false;
            path.push_back(v);
            blocked[v] = true;
            for (size_t w : sub.adj[v]) {
                if (!in_comp(w)) continue;
                if (w == s) {
                    out.push_back(path);
                    if (out.size() > cap) throw CapExceeded("simple cycle enumeration exceeded its cap");
                    found = true;
                } else if (!blocked[w] && circuit(w)) {
                    found = true;
                }
            }
            if (found) {
                unblock(v);
            } else {
                for (size_t w : sub.adj[v])
                    if (in_comp(w)) B[w].insert(v);
            }
            path.pop_back();
            return found;
        };
        circuit(s);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// SC(W): simple cycles of the subgraph induced by W.
inline std::vector<Cycle>
simple_cycles(const Game &g, VertexMask W, size_t cap = 1000000)
{
    return simple_cycles(induced(g, W), cap);
}

struct WeightedArc
{
    size_t src;
    size_t dst;
    Rational weight;
    size_t length = 1;
};

struct WeightedDigraph
{
    size_t n = 0;
    std::vector<WeightedArc> arcs;

    size_t add_node() { return n++; }

    void
    add_arc(size_t src, size_t dst, Rational weight, size_t length = 1)
    {
        if (src >= n || dst >= n) throw InputError("arc endpoint out of range");
        if (length == 0) throw InputError("arc length must be positive");
        arcs.push_back(WeightedArc{src, dst, std::move(weight), length});
    }

    Digraph
    skeleton() const
    {
        Digraph d(n);
        for (const auto &a : arcs) d.add_arc(a.src, a.dst);
        return d;
    }
};

struct MeanCycle
{
    Rational value;              // total weight over total length
    std::vector<size_t> nodes;   // starts at its smallest node
    std::vector<size_t> arcs;    // indices into the input arc list, aligned with nodes
};

/**
 * Maximum of (sum of weights)/(sum of lengths) over cycles reachable from
 * source. Arcs of length L are expanded into chains of L unit arcs and
 * Karp's recurrence runs on the expanded graph with two rolling passes.
 * Returns nullopt when no cycle is reachable.
 */
inline std::optional<MeanCycle>
karp_max_mean_cycle(const WeightedDigraph &g, size_t source)
{
    if (source >= g.n) throw InputError("source out of range");
    auto reach = reachable_from(g.skeleton(), source);

    // parallel arcs with equal length: keep the heaviest
    std::map<std::tuple<size_t, size_t, size_t>, size_t> best;
    for (size_t a = 0; a < g.arcs.size(); ++a) {
        const auto &arc = g.arcs[a];
        if (!reach[arc.src]) continue;
        auto key = std::make_tuple(arc.src, arc.dst, arc.length);
        auto it = best.find(key);
        if (it == best.end() || g.arcs[it->second].weight < arc.weight) best[key] = a;
    }
    std::vector<size_t> kept;
    for (auto &[k, a] : best) kept.push_back(a);

    // expanded graph: original nodes keep their ids, chain nodes follow
    struct Unit { size_t src, dst; const Rational *w; };
    std::vector<size_t> id(g.n, size_t(-1));
    size_t N = 0;
    for (size_t v = 0; v < g.n; ++v)
        if (reach[v]) id[v] = N++;
    std::vector<Unit> units;
    for (size_t a : kept) {
        const auto &arc = g.arcs[a];
        size_t prev = id[arc.src];
        for (size_t k = 0; k + 1 < arc.length; ++k) {
            units.push_back({prev, N, k == 0 ? &arc.weight : nullptr});
            prev = N++;
        }
        units.push_back({prev, id[arc.dst], arc.length == 1 ? &arc.weight : nullptr});
    }

    using Row = std::vector<std::optional<Rational>>;
    auto step = [&](const Row &cur) {
        Row next(N);
        for (const auto &u : units) {
            if (!cur[u.src]) continue;
            Rational val = *cur[u.src];
            if (u.w) val += *u.w;
            if (!next[u.dst] || *next[u.dst] < val) next[u.dst] = val;
        }
        return next;
    };

    Row d0(N);
    d0[id[source]] = Rational(0);
    Row dN = d0;
    for (size_t k = 0; k < N; ++k) dN = step(dN);

    std::vector<std::optional<Rational>> worst(N);
    Row dk = d0;
    for (size_t k = 0; k < N; ++k) {
        for (size_t v = 0; v < N; ++v) {
            if (!dN[v] || !dk[v]) continue;
            Rational q = (*dN[v] - *dk[v]) / Rational(long(N - k));
            if (!worst[v] || q < *worst[v]) worst[v] = q;
        }
        dk = step(dk);
    }
    std::optional<Rational> lambda;
    for (size_t v = 0; v < N; ++v)
        if (worst[v] && (!lambda || *lambda < *worst[v])) lambda = worst[v];
    if (!lambda) return std::nullopt;
    lambda->canonicalize();

    // longest paths under w - lambda*len, then a cycle of tight arcs
    std::vector<std::optional<Rational>> dist(g.n);
    dist[source] = Rational(0);
    for (size_t round = 0; round < g.n; ++round) {
        bool changed = false;
        for (size_t a : kept) {
            const auto &arc = g.arcs[a];
            if (!dist[arc.src]) continue;
            Rational val = *dist[arc.src] + arc.weight - *lambda * Rational(long(arc.length));
            if (!dist[arc.dst] || *dist[arc.dst] < val) {
                dist[arc.dst] = val;
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::vector<std::vector<size_t>> tight(g.n);
    for (size_t a : kept) {
        const auto &arc = g.arcs[a];
        if (!dist[arc.src] || !dist[arc.dst]) continue;
        if (*dist[arc.src] + arc.weight - *lambda * Rational(long(arc.length)) == *dist[arc.dst])
            tight[arc.src].push_back(a);
    }

    std::vector<int> color(g.n, 0);
    std::vector<size_t> stack_arcs;
    std::optional<MeanCycle> found;
    std::function<bool(size_t)> dfs = [&](size_t v) -> bool {
        color[v] = 1;
        for (size_t a : tight[v]) {
            size_t w = g.arcs[a].dst;
            if (color[w] == 1) {
                MeanCycle mc;
                mc.value = *lambda;
                std::vector<size_t> cyc_arcs{a};
                for (size_t k = stack_arcs.size(); k-- > 0;) {
                    if (g.arcs[cyc_arcs.back()].src == w) break;
                    cyc_arcs.push_back(stack_arcs[k]);
                }
                std::reverse(cyc_arcs.begin(), cyc_arcs.end());
                size_t rot = 0;
                for (size_t k = 1; k < cyc_arcs.size(); ++k)
                    if (g.arcs[cyc_arcs[k]].src < g.arcs[cyc_arcs[rot]].src) rot = k;
                std::rotate(cyc_arcs.begin(), cyc_arcs.begin() + rot, cyc_arcs.end());
                for (size_t c : cyc_arcs) mc.nodes.push_back(g.arcs[c].src);
                mc.arcs = cyc_arcs;
                found = mc;
                return true;
            }
            if (color[w] == 0) {
                stack_arcs.push_back(a);
                if (dfs(w)) return true;
                stack_arcs.pop_back();
            }
        }
        color[v] = 2;
        return false;
    };
    for (size_t v = 0; v < g.n && !found; ++v)
        if (dist[v] && color[v] == 0) dfs(v);
    if (!found) throw std::logic_error("karp: no tight cycle at the optimal mean");
    return found;
}

/**
 * Is there a walk from v0 inside Wp whose occurrence set is exactly Wp and
 * whose last vertex has an edge into W? Decided on the condensation of the
 * subgraph induced by Wp: its components must form a chain, with v0 in the
 * first one and W inside the last one.
 */
inline bool
coverage_walk_exists(const Game &g, Vertex v0, VertexMask W, VertexMask Wp)
{
    if ((W & ~Wp) != 0) throw InputError("coverage: W is not a subset of W'");
    if (!(Wp & bit(v0))) throw InputError("coverage: v0 is not in W'");
    if (!is_strongly_connected(g, W)) throw InputError("coverage: W is not strongly connected");

    Digraph d = induced(g, Wp);
    SccResult r = scc(d);
    // components restricted to Wp, in topological order
    std::vector<size_t> order;
    std::vector<bool> used(r.members.size(), false);
    for (Vertex v : mask_to_vector(Wp)) used[r.comp[v]] = true;
    for (size_t c = 0; c < used.size(); ++c)
        if (used[c]) order.push_back(c);
    for (size_t k = 0; k + 1 < order.size(); ++k) {
        const auto &next = r.dag[order[k]];
        if (!std::binary_search(next.begin(), next.end(), order[k + 1])) return false;
    }
    if (r.comp[v0] != order.front()) return false;
    for (Vertex w : mask_to_vector(W))
        if (r.comp[w] != order.back()) return false;
    return true;
}

/// tags[v] is set on tagged nodes only.
using Tags = std::vector<std::optional<ExtRat>>;

namespace detail {

// Some tagged node passing keep() lies on a cycle whose tagged nodes all pass
// keep(), and the cycle is reachable from source.
template <typename Keep>
bool
tagged_cycle_exists(const Digraph &d, const Tags &tags, size_t source, Keep keep)
{
    auto reach = reachable_from(d, source);
    Digraph sub(d.n);
    auto alive = [&](size_t v) { return reach[v] && (!tags[v] || keep(*tags[v])); };
    for (size_t v = 0; v < d.n; ++v) {
        if (!alive(v)) continue;
        for (size_t w : d.adj[v])
            if (alive(w)) sub.add_arc(v, w);
    }
    SccResult r = scc(sub);
    for (size_t v = 0; v < d.n; ++v)
        if (alive(v) && tags[v] && r.cyclic[r.comp[v]]) return true;
    return false;
}

} // namespace detail

/**
 * Is there a cycle reachable from source that passes through a tagged node
 * and whose tagged nodes all carry a tag strictly above alpha?
 */
inline bool
maximin_cycle_above(const WeightedDigraph &g, const Tags &tags, const ExtRat &alpha, size_t source)
{
    if (tags.size() != g.n) throw InputError("tags must cover every node");
    return detail::tagged_cycle_exists(g.skeleton(), tags, source, [&](const ExtRat &t) { return alpha < t; });
}

/**
 * Largest t such that a reachable cycle through tagged nodes has all its tags
 * at least t, or nullopt when no reachable cycle meets a tagged node.
 */
inline std::optional<ExtRat>
maximin_cycle_value(const Digraph &d, const Tags &tags, size_t source)
{
    std::vector<ExtRat> cand;
    for (const auto &t : tags)
        if (t) cand.push_back(*t);
    std::sort(cand.begin(), cand.end(), [](const ExtRat &a, const ExtRat &b) { return b < a; });
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (const ExtRat &t : cand)
        if (detail::tagged_cycle_exists(d, tags, source, [&](const ExtRat &x) { return !(x < t); })) return t;
    return std::nullopt;
}

} // namespace mpspe::graph

#endif
