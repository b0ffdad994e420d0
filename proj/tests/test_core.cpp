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

#include <random>

#include "oracles.hpp"

using namespace mpspe;

namespace {

Game
load(const std::string &name)
{
    return io::parse_game(io::read_file(std::string(MPSPE_FIXTURES) + "/" + name));
}

Requirement
req(std::initializer_list<ExtRat> xs)
{
    return Requirement(xs);
}

} // namespace

TEST(ExtRat, CanonicalFormAndOrder)
{
    ExtRat a = ExtRat::parse("-12/8");
    EXPECT_EQ(a.value().get_num(), -3);
    EXPECT_EQ(a.value().get_den(), 2);
    EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
    EXPECT_EQ(parse_rational("0.75"), Rational(3, 4));
    EXPECT_EQ(parse_rational("12"), Rational(12));
    EXPECT_LT(ExtRat::neg_inf(), ExtRat(-1000000));
    EXPECT_LT(ExtRat(1000000), ExtRat::pos_inf());
    EXPECT_EQ(ExtRat::pos_inf(), ExtRat::pos_inf());
}

TEST(ExtRat, RejectsMalformedText)
{
    for (const char *s : {"", "1/0", "x", "1//2", "--1", "1.2.3", "/3"})
        EXPECT_THROW(parse_rational(s), InputError) << s;
    EXPECT_THROW(ExtRat::parse("infinity"), InputError);
}

TEST(ExtRat, MixedInfinitiesAreRejected)
{
    EXPECT_THROW(ExtRat::pos_inf() + ExtRat::neg_inf(), ArithmeticError);
    EXPECT_THROW(ExtRat::neg_inf() - ExtRat::neg_inf(), ArithmeticError);
    EXPECT_EQ(ExtRat::pos_inf() + ExtRat(5), ExtRat::pos_inf());
    EXPECT_EQ(ExtRat(Rational(1, 3)) + ExtRat(Rational(1, 6)), ExtRat(Rational(1, 2)));
    EXPECT_THROW(ExtRat::pos_inf().value(), ArithmeticError);
}

TEST(ExtRat, PrintParseRoundTrip)
{
    std::mt19937 rng(7);
    for (int k = 0; k < 500; ++k) {
        ExtRat x;
        switch (rng() % 6) {
        case 0: x = ExtRat::pos_inf(); break;
        case 1: x = ExtRat::neg_inf(); break;
        default: x = ExtRat(Rational(long(rng() % 2001) - 1000, long(1 + rng() % 97)));
        }
        EXPECT_EQ(ExtRat::parse(x.str()), x);
    }
}

TEST(Game, RejectsBadConstruction)
{
    Game g;
    Player p = g.add_player("p");
    Vertex a = g.add_vertex("a", p);
    EXPECT_THROW(g.add_vertex("a", p), InputError);
    EXPECT_THROW(g.add_vertex("b", 3), InputError);
    EXPECT_THROW(g.validate(), InputError); // a has no edge
    g.add_edge(a, a, {1});
    EXPECT_THROW(g.add_edge(a, a, {1}), InputError);
    EXPECT_THROW(g.add_edge(a, a, {1, 2}), InputError);
    EXPECT_THROW(g.add_player("q"), InputError);
    EXPECT_NO_THROW(g.validate());
    EXPECT_THROW(Game().validate(), InputError);
}

TEST(MeanPayoff, TwoStateCycles)
{
    Game g = load("twostate.game");
    Vertex a = g.vertex_index("a"), b = g.vertex_index("b");
    EXPECT_EQ(mp_of_cycle(g, {a, b}), (PayoffVector{2, 2}));
    EXPECT_EQ(mp_of_cycle(g, {a, a, a, b, b, b}), (PayoffVector{1, 1}));
    EXPECT_THROW(mp_of_cycle(g, {}), MalformedPlay);
}

TEST(MeanPayoff, ZeroRewardsGiveZero)
{
    Game g = load("branch7.game");
    Vertex e = g.vertex_index("e");
    EXPECT_EQ(mp_of_cycle(g, {e}), (PayoffVector{0, 0}));
}

TEST(MeanPayoff, NonEdgeIsMalformed)
{
    Game g = load("chain4.game");
    Vertex a = g.vertex_index("a"), c = g.vertex_index("c");
    EXPECT_THROW(mp_of_cycle(g, {a, c}), MalformedPlay);
    EXPECT_THROW(payoff_of_lasso(g, LassoPlay{{c}, {a}}), MalformedPlay);
}

TEST(MeanPayoff, ChainLassos)
{
    Game g = load("chain4.game");
    Vertex a = 0, b = 1, c = 2;
    EXPECT_EQ(payoff_of_lasso(g, LassoPlay{{}, {a}}), (PayoffVector{1, 1}));
    EXPECT_EQ(payoff_of_lasso(g, LassoPlay{{a}, {b, c}}), (PayoffVector{0, 0}));
    EXPECT_EQ(payoff_of_lasso(g, LassoPlay{{a, b}, {c, b}}), (PayoffVector{0, 0}));
}

TEST(Consistency, ChainExamples)
{
    Game g = load("chain4.game");
    Requirement l4 = req({1, 1, 1, 1});
    EXPECT_TRUE(lasso_is_consistent(g, l4, LassoPlay{{}, {0}}));
    EXPECT_FALSE(lasso_is_consistent(g, l4, LassoPlay{{}, {1, 2}}));
    EXPECT_TRUE(lasso_is_consistent(g, bottom_requirement(g), LassoPlay{{}, {1, 2}}));
}

TEST(Requirement, PointwiseOrder)
{
    Requirement l1 = req({1, 0, 0, 0}), l2 = req({1, 1, 0, 0});
    EXPECT_TRUE(requirement_leq(l1, l2));
    EXPECT_FALSE(requirement_leq(l2, l1));
    EXPECT_TRUE(requirement_leq(Requirement(4, ExtRat::neg_inf()), l1));
    EXPECT_THROW(requirement_leq(l1, req({1})), InputError);
}

TEST(Properties, PrefixIndependenceRotationAntitone)
{
    std::mt19937 rng(11);
    for (int round = 0; round < 40; ++round) {
        Game g = oracle::random_game(rng, 2 + rng() % 4, 2 + rng() % 2);
        auto ls = oracle::lassos(g, 0, 6);
        for (const auto &l : ls) {
            LassoPlay p{l.prefix, l.cycle};
            auto mu = payoff_of_lasso(g, p);
            EXPECT_EQ(mu, payoff_of_lasso(g, LassoPlay{{}, l.cycle}));
            Cycle rot(l.cycle.begin() + 1, l.cycle.end());
            rot.push_back(l.cycle.front());
            EXPECT_EQ(mp_of_cycle(g, rot), mu);

            Requirement hi(g.num_vertices()), lo(g.num_vertices());
            for (Vertex v = 0; v < g.num_vertices(); ++v) {
                hi[v] = ExtRat(long(rng() % 5) - 2);
                lo[v] = rng() % 3 ? hi[v] - ExtRat(long(rng() % 3)) : ExtRat::neg_inf();
            }
            if (lasso_is_consistent(g, hi, p)) EXPECT_TRUE(lasso_is_consistent(g, lo, p));
        }
    }
}

TEST(Cycles, CanonicalRotation)
{
    EXPECT_EQ(canonical_cycle({3, 1, 2}), (Cycle{1, 2, 3}));
    EXPECT_EQ(canonical_cycle({2, 0, 1, 0}), (Cycle{0, 1, 0, 2}));
    EXPECT_TRUE(is_simple({1, 2, 3}));
    EXPECT_FALSE(is_simple({1, 2, 1}));
}
