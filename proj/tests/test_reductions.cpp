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

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace mpspe;
using namespace mpspe::reductions;

namespace {

std::string
fixture(const std::string &name)
{
    return std::string(MPSPE_FIXTURES) + "/" + name;
}

CnfFormula
cnf(size_t vars, std::vector<std::vector<int>> clauses)
{
    return CnfFormula{vars, std::move(clauses)};
}

const Edge &
edge(const Game &g, const std::string &from, const std::string &to)
{
    for (const Edge &e : g.edges())
        if (e.from == g.vertex_index(from) && e.to == g.vertex_index(to)) return e;
    throw std::logic_error("no edge " + from + " -> " + to);
}

} // namespace

TEST(GPhi, TautologiesMatchGoldenFile)
{
    CnfFormula phi = io::parse_dimacs(io::read_file(fixture("taut6.cnf")));
    Game g = build_g_phi(phi);
    EXPECT_EQ(g.num_vertices(), 19u);
    EXPECT_EQ(g.num_players(), 7u);
    std::string golden, line;
    std::istringstream in(io::read_file(fixture("taut6.game")));
    while (std::getline(in, line))
        if (!line.starts_with("#")) golden += line + "\n";
    EXPECT_EQ(io::print_game(g), golden);
}

TEST(GPhi, SingleClauseStructure)
{
    Game g = build_g_phi(cnf(1, {{1}}));
    EXPECT_EQ(g.num_vertices(), 3u);
    EXPECT_EQ(g.vertex_name(*g.init()), "C1");
    EXPECT_TRUE(g.find_vertex("C1.x1"));
    Vertex bot = g.vertex_index("bot");
    // bot is only reachable from negative literals
    auto reach = graph::reachable_from(graph::full_graph(g), *g.init());
    EXPECT_FALSE(reach[bot]);
    EXPECT_EQ(edge(g, "C1", "C1.x1").reward, (std::vector<Rational>{0, 1}));
    EXPECT_EQ(edge(g, "bot", "bot").reward, (std::vector<Rational>{1, 0}));
}

TEST(GPhi, RejectsBadFormulas)
{
    EXPECT_THROW(build_g_phi(cnf(1, {})), InputError);
    EXPECT_THROW(build_g_phi(cnf(1, {{}})), InputError);
    EXPECT_THROW(build_g_phi(cnf(1, {{2}})), InputError);
}

TEST(GPhi, SolverPaysZeroOrOne)
{
    for (const auto &phi : {cnf(1, {{1}}), cnf(2, {{1, 2}, {-1}}), cnf(2, {{1, -2}, {-1, 2}, {-2}})}) {
        Game g = build_g_phi(phi);
        Player S = g.player_index("S");
        Vertex bot = g.vertex_index("bot");
        for (const auto &c : oracle::simple_cycles(g, bit(g.num_vertices()) - 1)) {
            Rational s = mp_of_cycle(g, c)[S];
            EXPECT_EQ(s, std::find(c.begin(), c.end(), bot) == c.end() ? 1 : 0);
        }
    }
}

TEST(HPhi, WrapsGPhi)
{
    for (const auto &phi : {cnf(1, {{1}}), cnf(1, {{1}, {-1}}), cnf(2, {{1, 2}, {-1}})}) {
        Game g = build_g_phi(phi), h = build_h_phi(phi);
        EXPECT_EQ(h.num_vertices(), g.num_vertices() + 3);
        EXPECT_EQ(h.edges().size(), g.edges().size() + 5);
        EXPECT_EQ(h.num_players(), g.num_players() + 2);
        EXPECT_EQ(h.vertex_name(*h.init()), "a");
        Player S = h.player_index("S"), circle = h.player_index("circle"), square = h.player_index("square");
        for (const Edge &e : g.edges()) {
            const Edge &f = edge(h, g.vertex_name(e.from), g.vertex_name(e.to));
            EXPECT_EQ(f.reward[circle], 1 - f.reward[S]);
            EXPECT_EQ(f.reward[square], 1 - f.reward[S]);
        }
        Vertex a = h.vertex_index("a"), b = h.vertex_index("b"), c = h.vertex_index("c");
        auto ab = mp_of_cycle(h, {a, b});
        EXPECT_EQ(ab[circle], 0);
        EXPECT_EQ(ab[square], 3);
        auto cc = mp_of_cycle(h, {c});
        EXPECT_EQ(cc[circle], 2);
        EXPECT_EQ(cc[square], 2);
    }
}

TEST(Sat, TruthTable)
{
    EXPECT_TRUE(brute_force_sat(cnf(1, {{1}})));
    EXPECT_FALSE(brute_force_sat(cnf(1, {{1}, {-1}})));
    EXPECT_TRUE(brute_force_sat(cnf(2, {{1, 2}, {-1}})));
    EXPECT_EQ(brute_force_sat(cnf(3, {{1, -2}, {2, 3}, {-1, -3}, {-3}})),
              oracle::satisfiable(3, {{1, -2}, {2, 3}, {-1, -3}, {-3}}));
}

TEST(Sanity, SmallFormulasAgree)
{
    auto one = reduction_sanity(cnf(1, {{1}}));
    EXPECT_TRUE(one.agree);
    EXPECT_EQ(one.spe, Verdict::Yes);
    auto contra = reduction_sanity(cnf(1, {{1}, {-1}}));
    EXPECT_TRUE(contra.agree);
    EXPECT_EQ(contra.spe, Verdict::No);
    auto two = reduction_sanity(cnf(2, {{1, 2}, {-1}}));
    EXPECT_TRUE(two.agree);
    EXPECT_EQ(two.spe, Verdict::Yes);
}
