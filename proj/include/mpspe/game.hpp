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

#ifndef MPSPE_GAME_HPP
#define MPSPE_GAME_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpspe/error.hpp"
#include "mpspe/ext_rat.hpp"

namespace mpspe {

using Vertex = size_t;
using Player = size_t;

/// Bit set over vertices. Algorithms that enumerate subsets require |V| <= 64.
using VertexMask = uint64_t;

inline VertexMask bit(Vertex v) { return VertexMask(1) << v; }

inline std::vector<Vertex>
mask_to_vector(VertexMask m)
{
    std::vector<Vertex> out;
    for (Vertex v = 0; m; ++v, m >>= 1)
        if (m & 1) out.push_back(v);
    return out;
}

inline VertexMask
vector_to_mask(const std::vector<Vertex> &vs)
{
    VertexMask m = 0;
    for (Vertex v : vs) m |= bit(v);
    return m;
}

struct Edge
{
    Vertex from;
    Vertex to;
    std::vector<Rational> reward; // one entry per player
};

/**
 * A multiplayer mean-payoff game arena. Vertices and players are numbered in
 * insertion order; names are kept for input and output.
 */
class Game
{
public:
    Player
    add_player(const std::string &name)
    {
        if (!edges_.empty()) throw InputError("players must be declared before edges");
        if (player_ids_.count(name)) throw InputError("duplicate player '" + name + "'");
        player_ids_[name] = players_.size();
        players_.push_back(name);
        return players_.size() - 1;
    }

    Vertex
    add_vertex(const std::string &name, Player owner)
    {
        if (vertex_ids_.count(name)) throw InputError("duplicate vertex '" + name + "'");
        if (owner >= players_.size()) throw InputError("unknown owner for vertex '" + name + "'");
        vertex_ids_[name] = vertices_.size();
        vertices_.push_back(name);
        owner_.push_back(owner);
        succ_.emplace_back();
        return vertices_.size() - 1;
    }

    size_t
    add_edge(Vertex from, Vertex to, std::vector<Rational> reward)
    {
        if (from >= vertices_.size() || to >= vertices_.size()) throw InputError("edge endpoint out of range");
        if (reward.size() != players_.size())
            throw InputError("edge " + vertices_[from] + "->" + vertices_[to] + " needs one reward per player");
        if (edge_id(from, to)) throw InputError("duplicate edge " + vertices_[from] + "->" + vertices_[to]);
        for (auto &r : reward) r.canonicalize();
        edges_.push_back(Edge{from, to, std::move(reward)});
        auto &s = succ_[from];
        auto it = std::lower_bound(s.begin(), s.end(), to,
                                   [&](size_t e, Vertex t) { return edges_[e].to < t; });
        s.insert(it, edges_.size() - 1);
        return edges_.size() - 1;
    }

    void set_init(Vertex v)
    {
        if (v >= vertices_.size()) throw InputError("initial vertex out of range");
        init_ = v;
    }

    /// Throws InputError unless the game is well formed.
    void
    validate() const
    {
        if (players_.empty()) throw InputError("game has no players");
        if (vertices_.empty()) throw InputError("game has no vertices");
        for (Vertex v = 0; v < vertices_.size(); ++v)
            if (succ_[v].empty()) throw InputError("vertex '" + vertices_[v] + "' has no outgoing edge");
    }

    size_t num_players() const { return players_.size(); }
    size_t num_vertices() const { return vertices_.size(); }
    size_t num_edges() const { return edges_.size(); }

    const std::string &player_name(Player p) const { return players_.at(p); }
    const std::string &vertex_name(Vertex v) const { return vertices_.at(v); }
    Player owner(Vertex v) const { return owner_.at(v); }
    const Edge &edge(size_t e) const { return edges_.at(e); }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::optional<Vertex> &init() const { return init_; }

    /// Edge ids leaving v, sorted by target.
    const std::vector<size_t> &out_edges(Vertex v) const { return succ_.at(v); }

    std::vector<Vertex>
    successors(Vertex v) const
    {
        std::vector<Vertex> out;
        for (size_t e : succ_.at(v)) out.push_back(edges_[e].to);
        return out;
    }

    VertexMask
    successor_mask(Vertex v) const
    {
        VertexMask m = 0;
        for (size_t e : succ_.at(v)) m |= bit(edges_[e].to);
        return m;
    }

    std::optional<size_t>
    edge_id(Vertex from, Vertex to) const
    {
        if (from >= succ_.size()) return std::nullopt;
        const auto &s = succ_[from];
        auto it = std::lower_bound(s.begin(), s.end(), to,
                                   [&](size_t e, Vertex t) { return edges_[e].to < t; });
        if (it != s.end() && edges_[*it].to == to) return *it;
        return std::nullopt;
    }

    bool has_edge(Vertex from, Vertex to) const { return edge_id(from, to).has_value(); }

    const Rational &
    reward(Player p, Vertex from, Vertex to) const
    {
        auto e = edge_id(from, to);
        if (!e) throw MalformedPlay(vertices_.at(from) + "->" + vertices_.at(to) + " is not an edge");
        return edges_[*e].reward.at(p);
    }

    std::optional<Player>
    find_player(const std::string &name) const
    {
        auto it = player_ids_.find(name);
        if (it == player_ids_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<Vertex>
    find_vertex(const std::string &name) const
    {
        auto it = vertex_ids_.find(name);
        if (it == vertex_ids_.end()) return std::nullopt;
        return it->second;
    }

    Player
    player_index(const std::string &name) const
    {
        auto p = find_player(name);
        if (!p) throw InputError("unknown player '" + name + "'");
        return *p;
    }

    Vertex
    vertex_index(const std::string &name) const
    {
        auto v = find_vertex(name);
        if (!v) throw InputError("unknown vertex '" + name + "'");
        return *v;
    }

    /// Vertices owned by p as a mask (|V| <= 64).
    VertexMask
    owned_mask(Player p) const
    {
        VertexMask m = 0;
        for (Vertex v = 0; v < vertices_.size(); ++v)
            if (owner_[v] == p) m |= bit(v);
        return m;
    }

    friend bool
    operator==(const Game &a, const Game &b)
    {
        if (a.players_ != b.players_ || a.vertices_ != b.vertices_ || a.owner_ != b.owner_ || a.init_ != b.init_)
            return false;
        if (a.edges_.size() != b.edges_.size()) return false;
        for (Vertex v = 0; v < a.vertices_.size(); ++v) {
            const auto &sa = a.succ_[v], &sb = b.succ_[v];
            if (sa.size() != sb.size()) return false;
            for (size_t k = 0; k < sa.size(); ++k) {
                const Edge &ea = a.edges_[sa[k]], &eb = b.edges_[sb[k]];
                if (ea.to != eb.to || ea.reward != eb.reward) return false;
            }
        }
        return true;
    }

private:
    std::vector<std::string> players_;
    std::map<std::string, Player> player_ids_;
    std::vector<std::string> vertices_;
    std::map<std::string, Vertex> vertex_ids_;
    std::vector<Player> owner_;
    std::vector<Edge> edges_;
    std::vector<std::vector<size_t>> succ_;
    std::optional<Vertex> init_;
};

} // namespace mpspe

#endif
