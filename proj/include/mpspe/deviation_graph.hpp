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

#ifndef MPSPE_DEVIATION_GRAPH_HPP
#define MPSPE_DEVIATION_GRAPH_HPP

#include <deque>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "mpspe/families.hpp"
#include "mpspe/graph.hpp"

namespace mpspe::negotiation {

/// A deviation of player i from a prefix of h.c.
struct PreDeviation
{
    size_t position; // index in h.c of the deviating vertex
    Vertex target;
    Rational weight; // player i's rewards along the prefix and the deviation edge
    size_t length;   // position + 1
};

/**
 * Deviations before the punishing cycle, from every prefix of h.c that ends
 * in a vertex of player i and along any of its edges. Moving along the
 * proposed edge counts too: from the last vertex of h.c it means staying on
 * the cycle and asking for a new proposal.
 */
inline std::vector<PreDeviation>
pre_deviations(const Game &g, Player i, const PunishmentFamily &f)
{
    std::vector<PreDeviation> out;
    std::vector<Vertex> seq = f.hc();
    Rational prefix = 0;
    for (size_t j = 0; j < seq.size(); ++j) {
        Vertex v = seq[j];
        Vertex cont = j + 1 < seq.size() ? seq[j + 1] : f.c.front();
        if (g.owner(v) == i) {
            for (size_t e : g.out_edges(v)) {
                const Edge &edge = g.edge(e);
                Rational w = prefix + edge.reward[i];
                w.canonicalize();
                out.push_back(PreDeviation{j, edge.to, w, j + 1});
            }
        }
        prefix += g.reward(i, v, cont);
    }
    return out;
}

/// Targets of post-cycle deviations: successors of tail vertices owned by i.
inline VertexMask
post_targets(const Game &g, Player i, const std::vector<Vertex> &W)
{
    VertexMask m = 0;
    for (Vertex w : W)
        if (g.owner(w) == i) m |= g.successor_mask(w);
    return m;
}

/**
 * Shortest walk inside W that starts at a successor of last(c) and ends at
 * a vertex of player i with an edge to u. Ties go to smaller vertex indices.
 */
inline std::optional<std::vector<Vertex>>
connecting_segment(const Game &g, Player i, const PunishmentFamily &f, Vertex u)
{
    VertexMask W = vector_to_mask(f.W);
    std::vector<std::optional<Vertex>> parent(g.num_vertices());
    std::vector<char> seen(g.num_vertices(), 0);
    std::deque<Vertex> queue;
    for (Vertex s : g.successors(f.c.back()))
        if ((W & bit(s)) && !seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        if (g.owner(v) == i && g.has_edge(v, u)) {
            std::vector<Vertex> path{v};
            while (parent[path.back()]) path.push_back(*parent[path.back()]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (Vertex w : g.successors(v))
            if ((W & bit(w)) && !seen[w]) {
                seen[w] = 1;
                parent[w] = v;
                queue.push_back(w);
            }
    }
    return std::nullopt;
}

enum class NodeKind { Base, Proposal, PreDev, PostDev, Accept, GiveUp };

struct DgNode
{
    NodeKind kind;
    Vertex vertex = 0;   // Base, Proposal, PreDev: the anchor vertex
    size_t position = 0; // PreDev
    Vertex target = 0;   // PreDev, PostDev
    Cycle cycle;         // PostDev: the punishing cycle
    ExtRat tag;          // Proposal: xbar_i. PostDev: MP_i(c)
};

struct DgArc
{
    size_t src;
    size_t dst;
    Rational weight;             // player i's rewards along the projected segment
    size_t length = 0;           // number of vertices in the projected segment
    std::vector<Vertex> segment; // PostDev -> Base arcs: the connecting history
};

struct DeviationGraph
{
    Player player = 0;
    size_t root = 0;
    std::vector<DgNode> nodes;
    std::vector<DgArc> arcs;

    size_t
    count(NodeKind k) const
    {
        size_t c = 0;
        for (const auto &n : nodes) c += n.kind == k ? 1 : 0;
        return c;
    }
};

/**
 * The part of the reduced negotiation game that is compatible with tau and
 * reachable from base(root). Throws InputError on families that are not
 * anchored at their vertex, malformed, or not lam-consistent.
 */
inline DeviationGraph
build_deviation_graph(const Game &g, const Requirement &lam, Player i, Vertex root, const ProverStrategy &tau)
{
    if (tau.size() != g.num_vertices()) throw InputError("strategy must cover every vertex");
    if (lam.size() != g.num_vertices()) throw InputError("requirement size does not match the game");
    DeviationGraph dg;
    dg.player = i;

    std::map<Vertex, size_t> base, proposal;
    std::map<std::tuple<Vertex, size_t, Vertex>, size_t> pre;
    std::map<std::pair<Cycle, Vertex>, size_t> post;
    std::optional<size_t> accept, giveup;
    std::deque<size_t> todo;

    auto new_node = [&](DgNode n) {
        dg.nodes.push_back(std::move(n));
        return dg.nodes.size() - 1;
    };
    auto base_node = [&](Vertex v) {
        auto it = base.find(v);
        if (it != base.end()) return it->second;
        size_t id = new_node(DgNode{NodeKind::Base, v});
        base[v] = id;
        todo.push_back(id);
        return id;
    };

    dg.root = base_node(root);
    while (!todo.empty()) {
        size_t id = todo.front();
        todo.pop_front();
        Vertex v = dg.nodes[id].vertex;
        const auto &choice = tau[v];
        if (!choice) {
            if (!giveup) giveup = new_node(DgNode{NodeKind::GiveUp});
            dg.arcs.push_back(DgArc{id, *giveup, 0, 0, {}});
            continue;
        }
        const PunishmentFamily &f = *choice;
        check_family_shape(g, f);
        if (f.anchor() != v)
            throw InputError("family proposed at " + g.vertex_name(v) + " starts elsewhere");
        if (!family_is_consistent(g, lam, f))
            throw InputError("family proposed at " + g.vertex_name(v) + " is not consistent with the requirement");

        DgNode pn{NodeKind::Proposal, v};
        pn.tag = ExtRat(f.xbar[i]);
        size_t pid = new_node(pn);
        proposal[v] = pid;
        dg.arcs.push_back(DgArc{id, pid, 0, 0, {}});

        if (!accept) accept = new_node(DgNode{NodeKind::Accept});
        dg.arcs.push_back(DgArc{pid, *accept, 0, 0, {}});

        for (const auto &d : pre_deviations(g, i, f)) {
            auto key = std::make_tuple(v, d.position, d.target);
            size_t nid;
            auto it = pre.find(key);
            if (it == pre.end()) {
                DgNode n{NodeKind::PreDev, v, d.position, d.target};
                nid = new_node(n);
                pre[key] = nid;
                dg.arcs.push_back(DgArc{pid, nid, 0, 0, {}});
                dg.arcs.push_back(DgArc{nid, base_node(d.target), d.weight, d.length, {}});
            }
        }

        Cycle cc = canonical_cycle(f.c);
        Rational tag = cycle_sum(g, i, f.c) / Rational(long(f.c.size()));
        tag.canonicalize();
        for (Vertex u : mask_to_vector(post_targets(g, i, f.W))) {
            auto key = std::make_pair(cc, u);
            auto it = post.find(key);
            size_t nid;
            if (it == post.end()) {
                DgNode n{NodeKind::PostDev, v, 0, u, cc, ExtRat(tag)};
                nid = new_node(n);
                post[key] = nid;
                DgArc arc{nid, base_node(u), 0, 0, {}};
                if (auto seg = connecting_segment(g, i, f, u)) {
                    arc.segment = *seg;
                    for (size_t k = 0; k < seg->size(); ++k) {
                        Vertex nxt = k + 1 < seg->size() ? (*seg)[k + 1] : u;
                        arc.weight += g.reward(i, (*seg)[k], nxt);
                    }
                    arc.length = seg->size();
                }
                dg.arcs.push_back(std::move(arc));
            } else {
                nid = it->second;
            }
            dg.arcs.push_back(DgArc{pid, nid, 0, 0, {}});
        }
    }
    return dg;
}

/**
 * Supremum of Challenger's payoff against the strategy the graph was built
 * from: +inf if giving up is reachable, otherwise the best of accepting a
 * proposal, cycling through pre-cycle deviations only, and cycling through
 * post-cycle deviations whose punishing cycles all pay at least t.
 */
inline ExtRat
prover_value(const DeviationGraph &dg)
{
    for (const auto &n : dg.nodes)
        if (n.kind == NodeKind::GiveUp) return ExtRat::pos_inf();

    ExtRat best = ExtRat::neg_inf();
    for (const auto &n : dg.nodes)
        if (n.kind == NodeKind::Proposal) best = max(best, n.tag);

    // base-level projection: base -> proposal -> pre-dev -> base
    const size_t N = dg.nodes.size();
    std::vector<std::vector<size_t>> out(N);
    for (size_t a = 0; a < dg.arcs.size(); ++a) out[dg.arcs[a].src].push_back(a);

    graph::WeightedDigraph pre_graph;
    pre_graph.n = N + 1; // plus a source reaching every base node
    graph::Digraph skeleton(N);
    graph::Tags tags(N);
    for (size_t v = 0; v < N; ++v) {
        if (dg.nodes[v].kind == NodeKind::PostDev) tags[v] = dg.nodes[v].tag;
        if (dg.nodes[v].kind != NodeKind::Base) continue;
        pre_graph.add_arc(N, v, 0, 1);
        for (size_t a1 : out[v]) {
            size_t p = dg.arcs[a1].dst;
            if (dg.nodes[p].kind != NodeKind::Proposal) continue;
            for (size_t a2 : out[p]) {
                size_t d = dg.arcs[a2].dst;
                if (dg.nodes[d].kind == NodeKind::PreDev) {
                    for (size_t a3 : out[d]) {
                        pre_graph.add_arc(v, dg.arcs[a3].dst, dg.arcs[a3].weight, dg.arcs[a3].length);
                        skeleton.add_arc(v, dg.arcs[a3].dst);
                    }
                } else if (dg.nodes[d].kind == NodeKind::PostDev) {
                    skeleton.add_arc(v, d);
                }
            }
        }
    }
    for (size_t v = 0; v < N; ++v)
        if (dg.nodes[v].kind == NodeKind::PostDev)
            for (size_t a : out[v]) skeleton.add_arc(v, dg.arcs[a].dst);

    if (auto mc = graph::karp_max_mean_cycle(pre_graph, N)) best = max(best, ExtRat(mc->value));
    if (auto t = graph::maximin_cycle_value(skeleton, tags, dg.root)) best = max(best, *t);
    return best;
}

inline ExtRat
prover_value(const Game &g, const Requirement &lam, Player i, Vertex root, const ProverStrategy &tau)
{
    return prover_value(build_deviation_graph(g, lam, i, root, tau));
}

inline bool
verify_prover_strategy(const Game &g, const Requirement &lam, Player i, Vertex root, const ProverStrategy &tau,
                       const ExtRat &alpha)
{
    return !(alpha < prover_value(g, lam, i, root, tau));
}

} // namespace mpspe::negotiation

#endif
