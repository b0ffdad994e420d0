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

#ifndef MPSPE_DETAIL_THRESHOLD_GAME_HPP
#define MPSPE_DETAIL_THRESHOLD_GAME_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "mpspe/error.hpp"
#include "mpspe/ext_rat.hpp"

namespace mpspe::detail {

using NodeSet = std::vector<char>;

/**
 * Two-player arena between Prover and Challenger. Arcs carry a weight and a
 * length; only the ratio of sums along a play matters.
 */
struct Arena
{
    struct Arc
    {
        size_t src;
        size_t dst;
        Rational weight;
        size_t length;
    };

    std::vector<char> prover; // node owned by Prover
    std::vector<Arc> arcs;
    std::vector<std::vector<size_t>> out, in;

    size_t size() const { return prover.size(); }

    size_t
    add_node(bool is_prover)
    {
        prover.push_back(is_prover);
        out.emplace_back();
        in.emplace_back();
        return prover.size() - 1;
    }

    void
    add_arc(size_t u, size_t v, Rational w = 0, size_t len = 0)
    {
        arcs.push_back(Arc{u, v, std::move(w), len});
        out[u].push_back(arcs.size() - 1);
        in[v].push_back(arcs.size() - 1);
    }
};

inline constexpr size_t no_choice = size_t(-1);

/**
 * Nodes of S from which `player` can force a visit to target inside S.
 * choice receives, for nodes of that player added by the attractor, the
 * arc that leads closer to the target.
 */
inline NodeSet
attractor(const Arena &a, const NodeSet &S, const NodeSet &target, bool for_prover, std::vector<size_t> *choice = nullptr)
{
    const size_t n = a.size();
    NodeSet attr(n, 0);
    std::vector<size_t> count(n, 0);
    std::deque<size_t> queue;
    for (size_t v = 0; v < n; ++v) {
        if (!S[v]) continue;
        for (size_t e : a.out[v])
            if (S[a.arcs[e].dst]) ++count[v];
        if (target[v]) {
            attr[v] = 1;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        size_t v = queue.front();
        queue.pop_front();
        for (size_t e : a.in[v]) {
            size_t u = a.arcs[e].src;
            if (!S[u] || attr[u]) continue;
            if (bool(a.prover[u]) == for_prover) {
                attr[u] = 1;
                if (choice) (*choice)[u] = e;
                queue.push_back(u);
            } else if (--count[u] == 0) {
                attr[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return attr;
}

inline NodeSet
set_minus(const NodeSet &a, const NodeSet &b)
{
    NodeSet r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] && !b[k];
    return r;
}

inline NodeSet
set_and(const NodeSet &a, const NodeSet &b)
{
    NodeSet r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] && b[k];
    return r;
}

inline NodeSet
set_or(const NodeSet &a, const NodeSet &b)
{
    NodeSet r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] || b[k];
    return r;
}

inline bool
is_empty(const NodeSet &a)
{
    for (char c : a)
        if (c) return false;
    return true;
}

/**
 * Inside the subgame T, where can Prover make every cycle strictly negative
 * for the arc weights w - alpha*len? Solved as an energy game in which
 * Prover keeps the credit nonnegative for the integer weights
 * -((N+1)*w' + 1), N being the size of T. Those weights have the opposite
 * sign of w' on every simple cycle and are never zero on one.
 */
inline NodeSet
negative_cycles_region(const Arena &a, const NodeSet &T, const Rational &alpha, std::vector<size_t> &choice)
{
    const size_t n = a.size();
    size_t N = 0;
    for (char c : T) N += c ? 1 : 0;

    std::vector<size_t> live;
    mpz_class lcd = 1;
    for (size_t e = 0; e < a.arcs.size(); ++e) {
        const auto &arc = a.arcs[e];
        if (!T[arc.src] || !T[arc.dst]) continue;
        live.push_back(e);
        Rational wp = arc.weight - alpha * Rational(long(arc.length));
        wp.canonicalize();
        mpz_lcm(lcd.get_mpz_t(), lcd.get_mpz_t(), wp.get_den_mpz_t());
    }
    std::vector<int64_t> w(a.arcs.size(), 0);
    mpz_class limit = mpz_class(1) << 40;
    for (size_t e : live) {
        const auto &arc = a.arcs[e];
        Rational wp = (arc.weight - alpha * Rational(long(arc.length))) * Rational(lcd);
        wp.canonicalize();
        mpz_class z = -(mpz_class(long(N + 1)) * wp.get_num() + 1);
        if (abs(z) > limit) throw CapExceeded("energy game weights too large");
        w[e] = z.get_si();
    }

    // credit never needs to exceed the sum of the worst losses along a simple path
    int64_t cap = 0;
    for (size_t v = 0; v < n; ++v) {
        if (!T[v]) continue;
        int64_t worst = 0;
        for (size_t e : a.out[v])
            if (T[a.arcs[e].dst]) worst = std::max(worst, -w[e]);
        cap += worst;
        if (cap > (int64_t(1) << 60)) throw CapExceeded("energy game bound too large");
    }
    const int64_t TOP = std::numeric_limits<int64_t>::max();
    auto lift = [&](int64_t fu, int64_t we) -> int64_t {
        if (fu == TOP) return TOP;
        int64_t x = std::max<int64_t>(0, fu - we);
        return x > cap ? TOP : x;
    };

    std::vector<int64_t> f(n, 0);
    std::deque<size_t> work;
    std::vector<char> queued(n, 0);
    for (size_t v = 0; v < n; ++v)
        if (T[v]) {
            work.push_back(v);
            queued[v] = 1;
        }
    while (!work.empty()) {
        size_t v = work.front();
        work.pop_front();
        queued[v] = 0;
        int64_t best = a.prover[v] ? TOP : 0;
        bool any = false;
        for (size_t e : a.out[v]) {
            if (!T[a.arcs[e].dst]) continue;
            int64_t x = lift(f[a.arcs[e].dst], w[e]);
            if (!any) best = x;
            else best = a.prover[v] ? std::min(best, x) : std::max(best, x);
            any = true;
        }
        if (!any) best = TOP;
        if (best > f[v]) {
            f[v] = best;
            for (size_t e : a.in[v]) {
                size_t u = a.arcs[e].src;
                if (T[u] && !queued[u] && f[u] != TOP) {
                    queued[u] = 1;
                    work.push_back(u);
                }
            }
        }
    }

    NodeSet win(n, 0);
    for (size_t v = 0; v < n; ++v) {
        if (!T[v] || f[v] == TOP) continue;
        win[v] = 1;
        if (!a.prover[v]) continue;
        for (size_t e : a.out[v]) {
            if (!T[a.arcs[e].dst]) continue;
            if (lift(f[a.arcs[e].dst], w[e]) <= f[v]) {
                choice[v] = e;
                break;
            }
        }
    }
    return win;
}

struct ThresholdSolution
{
    NodeSet prover_wins;
    std::vector<size_t> choice; // arc chosen by Prover at each winning Prover node
};

/**
 * Prover wins a play if it visits `good` infinitely often, or if it visits
 * `bad` finitely often and its weights are eventually strictly below alpha
 * on average. S0 is the set of live nodes.
 */
inline ThresholdSolution
solve_threshold(const Arena &a, const NodeSet &S0, const NodeSet &good, const NodeSet &bad, const Rational &alpha)
{
    const size_t n = a.size();
    // Prover nodes without a live successor lose
    NodeSet dead(n, 0);
    for (size_t v = 0; v < n; ++v) {
        if (!S0[v] || !a.prover[v]) continue;
        bool any = false;
        for (size_t e : a.out[v]) any = any || S0[a.arcs[e].dst];
        dead[v] = !any;
    }
    NodeSet C = attractor(a, S0, dead, false);

    std::vector<size_t> choice(n, no_choice);
    for (;;) {
        NodeSet S = set_minus(S0, C);
        std::fill(choice.begin(), choice.end(), no_choice);
        NodeSet X = attractor(a, S, set_and(good, S), true, &choice);
        NodeSet T = set_minus(S, X);

        // inner game on T: avoid bad eventually and keep the mean below alpha
        NodeSet D(n, 0);
        for (;;) {
            NodeSet Sp = set_minus(T, D);
            NodeSet Y = attractor(a, Sp, set_and(bad, Sp), false);
            NodeSet Tp = set_minus(Sp, Y);
            NodeSet U = is_empty(Tp) ? NodeSet(n, 0) : negative_cycles_region(a, Tp, alpha, choice);
            if (is_empty(U)) break;
            D = attractor(a, T, set_or(D, U), true, &choice);
        }
        NodeSet lost = set_minus(T, D);
        if (is_empty(lost)) {
            ThresholdSolution sol{S, std::move(choice)};
            return sol;
        }
        C = attractor(a, S0, set_or(C, lost), false);
    }
}

/**
 * Where can Prover avoid dead ends forever? Choice picks a successor
 * staying in that region.
 */
inline ThresholdSolution
solve_safety(const Arena &a, const NodeSet &S0)
{
    const size_t n = a.size();
    NodeSet dead(n, 0);
    for (size_t v = 0; v < n; ++v) {
        if (!S0[v] || !a.prover[v]) continue;
        bool any = false;
        for (size_t e : a.out[v]) any = any || S0[a.arcs[e].dst];
        dead[v] = !any;
    }
    NodeSet C = attractor(a, S0, dead, false);
    ThresholdSolution sol{set_minus(S0, C), std::vector<size_t>(n, no_choice)};
    for (size_t v = 0; v < n; ++v) {
        if (!sol.prover_wins[v] || !a.prover[v]) continue;
        for (size_t e : a.out[v])
            if (sol.prover_wins[a.arcs[e].dst]) {
                sol.choice[v] = e;
                break;
            }
    }
    return sol;
}

} // namespace mpspe::detail

#endif
