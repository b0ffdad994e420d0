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
using lp::LinearSystem;

namespace {

std::vector<Rational>
vec(std::initializer_list<long> xs)
{
    std::vector<Rational> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

std::vector<oracle::Ineq>
as_ineqs(const LinearSystem &sys)
{
    std::vector<oracle::Ineq> out;
    for (const auto &r : sys.relations) {
        std::vector<Rational> neg = r.coeffs;
        for (auto &x : neg) x = -x;
        if (r.kind != lp::RelKind::Leq) out.push_back({r.coeffs, r.rhs});
        if (r.kind != lp::RelKind::Geq) out.push_back({neg, -r.rhs});
    }
    return out;
}

LinearSystem
random_system(std::mt19937 &rng, size_t d, size_t m)
{
    LinearSystem sys(d);
    while (sys.relations.size() < m) {
        std::vector<Rational> a(d);
        bool nz = false;
        for (auto &x : a) {
            x = long(rng() % 7) - 3;
            nz = nz || x != 0;
        }
        if (!nz) continue;
        auto kind = rng() % 5 == 0 ? lp::RelKind::Eq : (rng() % 2 ? lp::RelKind::Geq : lp::RelKind::Leq);
        sys.add(a, Rational(long(rng() % 9) - 4), kind);
    }
    return sys;
}

} // namespace

TEST(Lp, FeasibleAndInfeasibleExamples)
{
    LinearSystem sys(2);
    sys.add_geq(vec({1, 0}), 1);
    sys.add_geq(vec({0, 1}), 1);
    sys.add_leq(vec({1, 1}), 3);
    auto p = lp::lp_feasible(sys);
    ASSERT_TRUE(p);
    EXPECT_TRUE(sys.satisfied_by(*p));
    sys.add_leq(vec({1, 1}), 1);
    EXPECT_FALSE(lp::lp_feasible(sys));
    EXPECT_THROW(sys.add_geq(vec({0, 0}), 1), InputError);
    EXPECT_THROW(sys.add_geq(vec({1}), 1), InputError);
}

TEST(Lp, MinimizeExamples)
{
    LinearSystem sys(2);
    sys.add_geq(vec({1, 0}), 0);
    sys.add_geq(vec({0, 1}), 0);
    sys.add_eq(vec({1, 1}), 1);
    auto r = lp::lp_minimize(sys, {Rational(2), Rational(-1)});
    EXPECT_EQ(r.status, lp::Status::Optimal);
    EXPECT_EQ(r.value, ExtRat(-1));
    EXPECT_EQ(r.point, vec({0, 1}));
    auto mx = lp::lp_maximize(sys, vec({3, 1}));
    EXPECT_EQ(mx.value, ExtRat(3));

    LinearSystem open(1);
    open.add_leq(vec({1}), 5);
    EXPECT_EQ(lp::lp_minimize(open, vec({1})).status, lp::Status::Unbounded);
    EXPECT_TRUE(lp::lp_minimize(open, vec({1})).value.is_neg_inf());
}

TEST(Lp, FeasibilityMatchesFourierMotzkin)
{
    std::mt19937 rng(41);
    int feasible = 0;
    for (int round = 0; round < 400; ++round) {
        size_t d = 1 + rng() % 3;
        LinearSystem sys = random_system(rng, d, 1 + rng() % 6);
        auto p = lp::lp_feasible(sys);
        EXPECT_EQ(bool(p), oracle::fm_feasible(as_ineqs(sys), d));
        if (p) {
            EXPECT_TRUE(sys.satisfied_by(*p));
            ++feasible;
        }
    }
    EXPECT_GT(feasible, 50);
}

TEST(Lp, OptimumIsTightAgainstFourierMotzkin)
{
    std::mt19937 rng(43);
    for (int round = 0; round < 200; ++round) {
        size_t d = 1 + rng() % 3;
        LinearSystem sys = random_system(rng, d, 1 + rng() % 5);
        std::vector<Rational> obj(d);
        for (auto &x : obj) x = long(rng() % 5) - 2;
        if (std::all_of(obj.begin(), obj.end(), [](const Rational &x) { return x == 0; })) obj[0] = 1;
        auto r = lp::lp_minimize(sys, obj);
        if (r.status != lp::Status::Optimal) continue;
        EXPECT_TRUE(sys.satisfied_by(r.point));
        // nothing strictly below the optimum: obj.x <= v - 1/1000 is infeasible
        LinearSystem below = sys;
        below.add_leq(obj, r.value.value() - Rational(1, 1000));
        EXPECT_FALSE(oracle::fm_feasible(as_ineqs(below), d));
    }
}

TEST(Vertices, UnitSimplex)
{
    LinearSystem sys(2);
    sys.add_geq(vec({1, 0}), 0);
    sys.add_geq(vec({0, 1}), 0);
    sys.add_leq(vec({1, 1}), 1);
    EXPECT_EQ(lp::vertices_of(sys), (std::vector<std::vector<Rational>>{vec({0, 0}), vec({0, 1}), vec({1, 0})}));
}

TEST(Vertices, TwoStateHull)
{
    // convex hull of the simple cycle payoffs (0,1), (1,0), (2,2)
    LinearSystem sys(2);
    sys.add_geq(vec({1, 1}), 1);
    sys.add_geq(vec({1, -2}), -2);
    sys.add_geq(vec({-2, 1}), -2);
    EXPECT_EQ(lp::vertices_of(sys), (std::vector<std::vector<Rational>>{vec({0, 1}), vec({1, 0}), vec({2, 2})}));
}

TEST(Vertices, UnboundedAndEmpty)
{
    LinearSystem ray(1);
    ray.add_geq(vec({1}), 0);
    EXPECT_THROW(lp::vertices_of(ray), UnboundedRegion);
    LinearSystem none(1);
    none.add_geq(vec({1}), 2);
    none.add_leq(vec({1}), 1);
    EXPECT_TRUE(lp::vertices_of(none).empty());
    EXPECT_THROW(lp::vertices_of(LinearSystem(7)), CapExceeded);
}

TEST(Vertices, EveryVertexIsFeasibleAndExtreme)
{
    std::mt19937 rng(47);
    for (int round = 0; round < 100; ++round) {
        LinearSystem sys = random_system(rng, 2, 2 + rng() % 4);
        for (int k = 0; k < 2; ++k) {
            std::vector<Rational> e(2);
            e[k] = 1;
            sys.add_leq(e, 3);
            sys.add_geq(e, -3);
        }
        auto vs = lp::vertices_of(sys);
        EXPECT_EQ(vs.empty(), !lp::lp_feasible(sys));
        for (const auto &v : vs) {
            EXPECT_TRUE(sys.satisfied_by(v));
            size_t tight = 0;
            for (const auto &r : sys.relations) {
                Rational lhs = r.coeffs[0] * v[0] + r.coeffs[1] * v[1];
                if (lhs == r.rhs) ++tight;
            }
            EXPECT_GE(tight, 2u);
        }
        // a random objective is optimized at one of the vertices
        std::vector<Rational> obj{Rational(long(rng() % 5) - 2), Rational(long(rng() % 5) - 2)};
        if (vs.empty() || (obj[0] == 0 && obj[1] == 0)) continue;
        Rational best = obj[0] * vs[0][0] + obj[1] * vs[0][1];
        for (const auto &v : vs) best = std::min(best, Rational(obj[0] * v[0] + obj[1] * v[1]));
        EXPECT_EQ(lp::lp_minimize(sys, obj).value, ExtRat(best));
    }
}

TEST(Sealed, TwoStateExamples)
{
    std::vector<std::vector<Rational>> mps{vec({0, 1}), vec({2, 2}), vec({1, 0})};
    std::vector<ExtRat> one{ExtRat(1), ExtRat(1)};
    auto r = lp::sealed_feasible(mps, one, one);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->value, vec({1, 1}));
    std::vector<ExtRat> two{ExtRat(2), ExtRat(2)};
    EXPECT_TRUE(lp::sealed_feasible(mps, two, two));
    std::vector<ExtRat> hi{ExtRat(Rational(5, 2)), ExtRat(0)};
    EXPECT_FALSE(lp::sealed_feasible(mps, hi, std::vector<ExtRat>(2, ExtRat::pos_inf())));
}

TEST(Sealed, RowMinimaCanLeaveTheHull)
{
    // (0,0) is below the hull of (0,1) and (1,0) but the row-wise minimum reaches it
    std::vector<std::vector<Rational>> mps{vec({0, 1}), vec({1, 0})};
    std::vector<ExtRat> zero{ExtRat(0), ExtRat(0)};
    auto r = lp::sealed_feasible(mps, zero, zero);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->value, vec({0, 0}));
}

TEST(Sealed, MatchesSelectorSearchAndScales)
{
    std::mt19937 rng(53);
    int yes = 0;
    for (int round = 0; round < 300; ++round) {
        size_t d = 1 + rng() % 3, nc = 1 + rng() % 4;
        std::vector<std::vector<Rational>> mps(nc, std::vector<Rational>(d));
        for (auto &p : mps)
            for (auto &x : p) x = long(rng() % 7) - 3;
        std::vector<ExtRat> lo(d), up(d);
        for (size_t i = 0; i < d; ++i) {
            lo[i] = rng() % 4 == 0 ? ExtRat::neg_inf() : ExtRat(long(rng() % 7) - 4);
            up[i] = rng() % 4 == 0 ? ExtRat::pos_inf() : lo[i].is_finite() ? lo[i] + ExtRat(long(rng() % 4))
                                                                             : ExtRat(long(rng() % 5) - 2);
        }
        auto got = lp::sealed_feasible(mps, lo, up);
        EXPECT_EQ(bool(got), oracle::sealed_feasible(mps, lo, up));
        if (!got) continue;
        ++yes;
        // soundness: rows are convex and the value is within bounds
        for (const auto &row : got->alpha) {
            Rational s = 0;
            for (const auto &a : row) {
                EXPECT_GE(a, 0);
                s += a;
            }
            EXPECT_EQ(s, 1);
        }
        EXPECT_EQ(got->value, lp::sealed_value(got->alpha, mps));
        for (size_t i = 0; i < d; ++i) {
            EXPECT_FALSE(ExtRat(got->value[i]) < lo[i]);
            EXPECT_FALSE(up[i] < ExtRat(got->value[i]));
        }
        // scaling payoffs and bounds by a positive factor keeps the answer
        Rational f = oracle::frac(long(1 + rng() % 5), long(1 + rng() % 3));
        auto smps = mps;
        for (auto &p : smps)
            for (auto &x : p) x *= f;
        auto slo = lo, sup = up;
        for (auto &x : slo)
            if (x.is_finite()) x = ExtRat(x.value() * f);
        for (auto &x : sup)
            if (x.is_finite()) x = ExtRat(x.value() * f);
        EXPECT_TRUE(lp::sealed_feasible(smps, slo, sup));
    }
    EXPECT_GT(yes, 30);
}
