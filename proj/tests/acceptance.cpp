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

// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "oracles.hpp"

using namespace mpspe;

namespace {

struct Outcome
{
    bool ok = false;
    std::string detail;
};

std::string
fixture(const std::string &name)
{
    return std::string(MPSPE_FIXTURES) + "/" + name;
}

Game
load(const std::string &name)
{
    return io::parse_game(io::read_file(fixture(name)));
}

Requirement
req(std::initializer_list<long> xs)
{
    Requirement r;
    for (long x : xs) r.emplace_back(x);
    return r;
}

std::string
show(const Game &g, const Requirement &lam)
{
    std::string s;
    for (Vertex v = 0; v < g.num_vertices(); ++v) s += (v ? " " : "") + g.vertex_name(v) + ":" + lam[v].str();
    return s;
}

Outcome
chain_iteration()
{
    Game g = load("chain4.game");
    auto fr = negotiation::least_fixed_point(g);
    std::vector<Requirement> want{req({1, 0, 0, 0}), req({1, 1, 0, 0}), req({1, 1, 1, 0}), req({1, 1, 1, 1})};
    if (!fr.converged) return {false, "did not converge"};
    if (fr.trace != want) {
        std::string s = "trace:";
        for (const auto &l : fr.trace) s += " [" + show(g, l) + "]";
        return {false, s};
    }
    return {true, "4 iterations, lambda* = " + show(g, fr.lambda)};
}

Outcome
twostate_fixpoint()
{
    Game g = load("twostate.game");
    auto fr = negotiation::least_fixed_point(g);
    if (!fr.converged || fr.lambda != req({1, 1})) return {false, "lambda* = " + show(g, fr.lambda)};
    Witness w = io::parse_witness(g, io::read_file(fixture("twostate.witness")));
    const auto &tau = w.strategies[0];
    ExtRat val = negotiation::prover_value(g, fr.lambda, 0, 0, tau);
    bool at1 = negotiation::verify_prover_strategy(g, fr.lambda, 0, 0, tau, ExtRat(1));
    bool below = negotiation::verify_prover_strategy(g, fr.lambda, 0, 0, tau, ExtRat(Rational(99, 100)));
    if (val != ExtRat(1) || !at1 || below) return {false, "prover value " + val.str()};
    return {true, "lambda* = a:1 b:1, prover value 1"};
}

Outcome
branch_game()
{
    ThresholdInstance inst{load("branch7.game"), {ExtRat(1), ExtRat(1)}, {ExtRat(1), ExtRat(1)}, ExtRat(0)};
    auto res = search_witness(inst);
    if (res.verdict != Verdict::Yes) return {false, std::string("verdict ") + verdict_name(res.verdict)};
    if (!check_witness(inst, *res.witness).valid) return {false, "witness does not recheck"};
    return {true, "yes"};
}

Outcome
karp_equivalence()
{
    std::mt19937 rng(1001);
    for (int round = 0; round < 50; ++round) {
        size_t n = 1 + rng() % 8;
        graph::WeightedDigraph wd;
        wd.n = n;
        std::vector<oracle::Arc> arcs;
        for (size_t k = 0, m = 1 + rng() % (2 * n + 1); k < m; ++k) {
            size_t s = rng() % n, t = rng() % n, len = 1 + rng() % 3;
            Rational w = long(rng() % 11) - 5;
            wd.add_arc(s, t, w, len);
            arcs.push_back({s, t, w, len});
        }
        size_t src = rng() % n;
        auto got = graph::karp_max_mean_cycle(wd, src);
        auto want = oracle::max_mean_cycle(n, arcs, src);
        if (bool(got) != bool(want) || (got && got->value != *want))
            return {false, "mismatch on instance " + std::to_string(round)};
    }
    return {true, "50 instances"};
}

Outcome
sealed_equivalence()
{
    std::mt19937 rng(1002);
    int yes = 0;
    for (int round = 0; round < 100; ++round) {
        size_t d = 1 + rng() % 3, nc = 1 + rng() % 5;
        std::vector<std::vector<Rational>> mps(nc, std::vector<Rational>(d));
        for (auto &p : mps)
            for (auto &x : p) x = long(rng() % 7) - 3;
        std::vector<ExtRat> lo(d), up(d);
        for (size_t i = 0; i < d; ++i) {
            lo[i] = rng() % 4 == 0 ? ExtRat::neg_inf() : ExtRat(long(rng() % 7) - 4);
            up[i] = rng() % 4 == 0 ? ExtRat::pos_inf()
                                   : (lo[i].is_finite() ? lo[i] : ExtRat(-2)) + ExtRat(long(rng() % 4));
        }
        auto got = lp::sealed_feasible(mps, lo, up);
        if (bool(got) != oracle::sealed_feasible(mps, lo, up))
            return {false, "verdict mismatch on instance " + std::to_string(round)};
        if (!got) continue;
        ++yes;
        auto z = lp::sealed_value(got->alpha, mps);
        for (size_t i = 0; i < d; ++i)
            if (ExtRat(z[i]) < lo[i] || up[i] < ExtRat(z[i]))
                return {false, "combination outside bounds on instance " + std::to_string(round)};
    }
    return {true, "100 instances, " + std::to_string(yes) + " feasible"};
}

Outcome
lasso_completeness()
{
    std::mt19937 rng(1003);
    size_t checked = 0;
    for (int round = 0; round < 40; ++round) {
        size_t n = 2 + rng() % 4;
        Game g = oracle::random_game(rng, n, 2, 2, -2, 2);
        Requirement lam(n);
        for (auto &x : lam) x = rng() % 2 ? ExtRat::neg_inf() : ExtRat(long(rng() % 3) - 2);
        ThresholdInstance inst{g, {ExtRat(-2), ExtRat(-1)}, {ExtRat(2), ExtRat(1)}, ExtRat(0)};
        for (const auto &l : oracle::lassos(g, 0, 10)) {
            LassoPlay p{l.prefix, l.cycle};
            auto mu = payoff_of_lasso(g, p);
            if (!lasso_is_consistent(g, lam, p)) continue;
            bool inside = true;
            for (size_t i = 0; i < 2; ++i)
                inside = inside && !(ExtRat(mu[i]) < inst.lower[i]) && !(inst.upper[i] < ExtRat(mu[i]));
            if (!inside) continue;
            std::vector<Cycle> cycles;
            std::vector<Rational> weights;
            for (const auto &[c, k] : oracle::decompose(l.cycle)) {
                cycles.push_back(c);
                weights.push_back(oracle::frac(k * long(c.size()), long(l.cycle.size())));
            }
            std::vector<Vertex> occ = l.prefix;
            occ.insert(occ.end(), l.cycle.begin(), l.cycle.end());
            auto pc = check_play_witness(inst, mask_to_vector(vector_to_mask(l.cycle)),
                                         mask_to_vector(vector_to_mask(occ)), cycles, {weights, weights}, lam);
            if (!pc.ok || pc.z != mu) return {false, "rejected lasso in game " + std::to_string(round) + ": " + pc.reason};
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " lassos"};
}

Outcome
witness_self_consistency()
{
    std::mt19937 rng(1004);
    int yes = 0, no = 0;
    for (int round = 0; round < 50; ++round) {
        size_t n = 2 + rng() % 3;
        Game g = oracle::random_game(rng, n, 2, 2, -2, 2);
        std::vector<ExtRat> lo(2), up(2);
        for (size_t p = 0; p < 2; ++p) {
            lo[p] = rng() % 2 ? ExtRat::neg_inf() : ExtRat(long(rng() % 3) - 2);
            up[p] = rng() % 2 ? ExtRat::pos_inf() : ExtRat(long(rng() % 3));
        }
        ExtRat eps = rng() % 3 ? ExtRat(0) : ExtRat(Rational(1, 2));
        ThresholdInstance inst{g, lo, up, eps};
        auto res = search_witness(inst);
        if (res.verdict == Verdict::Indeterminate) return {false, "indeterminate on instance " + std::to_string(round)};
        if (res.verdict == Verdict::No) {
            ++no;
            continue;
        }
        ++yes;
        auto wv = check_witness(inst, *res.witness);
        if (!wv.valid) return {false, "witness " + std::to_string(round) + " does not recheck"};
        for (Vertex u : res.witness->Wp)
            if (ExtRat(wv.z[g.owner(u)]) < res.witness->lam[u]) return {false, "payoff below lambda"};
        for (size_t p = 0; p < 2; ++p)
            if (ExtRat(wv.z[p]) < lo[p] || up[p] < ExtRat(wv.z[p])) return {false, "payoff outside thresholds"};
    }
    return {true, std::to_string(yes) + " yes, " + std::to_string(no) + " no"};
}

Outcome
negotiation_properties()
{
    std::mt19937 rng(1005);
    for (int round = 0; round < 30; ++round) {
        size_t n = 2 + rng() % 3;
        Game g = oracle::random_game(rng, n, 2, 2, -2, 2);
        negotiation::Oracle o(g, {});
        Requirement lo(n), hi(n);
        for (Vertex v = 0; v < n; ++v) {
            lo[v] = rng() % 3 ? ExtRat(long(rng() % 5) - 3) : ExtRat::neg_inf();
            hi[v] = lo[v].is_finite() ? lo[v] + ExtRat(long(rng() % 2)) : ExtRat(long(rng() % 3) - 2);
        }
        auto a = o.evaluate(lo).value, b = o.evaluate(hi).value;
        if (!requirement_leq(a, b)) return {false, "not monotone on game " + std::to_string(round)};
        if (!requirement_leq(lo, a) || !requirement_leq(hi, b))
            return {false, "decreasing on game " + std::to_string(round)};
    }
    return {true, "30 games"};
}

Outcome
reduction_end_to_end()
{
    using reductions::CnfFormula;
    std::vector<CnfFormula> phis{{1, {{1}}}, {1, {{1}, {-1}}}, {2, {{1, 2}, {-1}}}};
    std::string s;
    for (const auto &phi : phis) {
        auto r = reductions::reduction_sanity(phi);
        s += std::string(s.empty() ? "" : ", ") + (r.satisfiable ? "sat/" : "unsat/") + verdict_name(r.spe);
        if (!r.agree) return {false, s};
    }
    return {true, s};
}

Outcome
round_trips()
{
    for (const char *name : {"chain4.game", "twostate.game", "branch7.game", "taut6.game"}) {
        Game g = load(name);
        if (io::parse_game(io::print_game(g)) != g) return {false, name};
    }
    Game two = load("twostate.game");
    Witness w = io::parse_witness(two, io::read_file(fixture("twostate.witness")));
    if (io::parse_witness(two, io::print_witness(two, w)) != w) return {false, "twostate.witness"};
    auto phi = io::parse_dimacs(io::read_file(fixture("taut6.cnf")));
    if (io::parse_dimacs(io::print_dimacs(phi)) != phi) return {false, "taut6.cnf"};
    std::mt19937 rng(1006);
    for (int round = 0; round < 200; ++round) {
        Game g = oracle::random_game(rng, 1 + rng() % 6, 1 + rng() % 3, 3, -9, 9);
        if (io::parse_game(io::print_game(g)) != g) return {false, "generated game " + std::to_string(round)};
        Witness rw = oracle::random_witness(rng, g);
        if (io::parse_witness(g, io::print_witness(g, rw)) != rw)
            return {false, "generated witness " + std::to_string(round)};
    }
    return {true, "fixtures and 200 games/witnesses"};
}

struct Criterion
{
    int id;
    double limit_s;
    bool slow;
    std::function<Outcome()> run;
};

} // namespace

int
main(int argc, char **argv)
{
    CLI::App app{"acceptance checks"};
    bool skip_slow = false;
    int only = 0;
    app.add_flag("--skip-slow", skip_slow, "skip criteria marked slow");
    app.add_option("--only", only, "run a single criterion");
    CLI11_PARSE(app, argc, argv);

    std::vector<Criterion> all{
        {1, 60, false, chain_iteration},         {2, 10, false, twostate_fixpoint},
        {3, 60, false, branch_game},              {4, 30, false, karp_equivalence},
        {5, 60, false, sealed_equivalence},      {6, 120, false, lasso_completeness},
        {7, 300, false, witness_self_consistency}, {8, 300, false, negotiation_properties},
        {9, 1800, true, reduction_end_to_end},   {10, 10, false, round_trips},
    };
    int failed = 0;
    for (const auto &c : all) {
        if (only && c.id != only) continue;
        if (!only && skip_slow && c.slow) {
            std::cout << "criterion " << c.id << ": SKIP (slow)\n";
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && secs > c.limit_s) o = {false, o.detail + "; over the time limit"};
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2fs of %.0fs", secs, c.limit_s);
        std::cout << "criterion " << c.id << ": " << (o.ok ? "PASS" : "FAIL") << " (" << o.detail << "; " << buf
                  << ")\n"
                  << std::flush;
        failed += o.ok ? 0 : 1;
    }
    return failed ? 1 : 0;
}
