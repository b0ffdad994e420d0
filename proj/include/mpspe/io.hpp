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

#ifndef MPSPE_IO_HPP
#define MPSPE_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mpspe/game.hpp"
#include "mpspe/reductions.hpp"
#include "mpspe/witness.hpp"

namespace mpspe::io {

namespace detail {

struct Token
{
    std::string text;
    size_t column; // 1-based
};

struct Line
{
    size_t number; // 1-based
    std::vector<Token> tokens;
};

/// Non-empty lines with comments (from '#') removed.
inline std::vector<Line>
tokenize(std::string_view text, char comment = '#')
{
    std::vector<Line> out;
    size_t number = 0, pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        ++number;
        if (size_t c = line.find(comment); c != std::string_view::npos) line = line.substr(0, c);
        Line l{number, {}};
        size_t k = 0;
        while (k < line.size()) {
            while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
            size_t start = k;
            while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
            if (k > start) l.tokens.push_back(Token{std::string(line.substr(start, k - start)), start + 1});
        }
        if (!l.tokens.empty()) out.push_back(std::move(l));
        pos = end + 1;
    }
    return out;
}

[[noreturn]] inline void
fail(const Line &l, const Token &t, const std::string &msg)
{
    throw InputError("line " + std::to_string(l.number) + ", column " + std::to_string(t.column) + ": " + msg);
}

[[noreturn]] inline void
fail(const Line &l, const std::string &msg)
{
    fail(l, l.tokens.front(), msg);
}

inline void
arity(const Line &l, size_t n)
{
    if (l.tokens.size() != n)
        fail(l, "'" + l.tokens[0].text + "' expects " + std::to_string(n - 1) + " argument(s)");
}

template <class F>
auto
at(const Line &l, const Token &t, F &&f) -> decltype(f())
{
    try {
        return f();
    } catch (const InputError &e) {
        fail(l, t, e.what());
    }
}

inline std::vector<std::string>
split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    size_t pos = 0;
    for (;;) {
        size_t k = s.find(sep, pos);
        out.push_back(s.substr(pos, k == std::string::npos ? std::string::npos : k - pos));
        if (k == std::string::npos) break;
        pos = k + 1;
    }
    return out;
}

inline std::vector<Vertex>
parse_list(const Game &g, const std::string &s)
{
    std::vector<Vertex> out;
    if (s == "-") return out;
    for (const auto &name : split(s, ',')) out.push_back(g.vertex_index(name));
    return out;
}

inline std::string
print_list(const Game &g, const std::vector<Vertex> &vs)
{
    if (vs.empty()) return "-";
    std::string s;
    for (size_t k = 0; k < vs.size(); ++k) s += (k ? "," : "") + g.vertex_name(vs[k]);
    return s;
}

} // namespace detail

inline std::string
read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/**
 * Game files: `player <name>`, `vertex <name> <owner>`,
 * `edge <from> <to> <player>=<rational> ...` and `init <vertex>` lines.
 */
inline Game
parse_game(std::string_view text)
{
    using namespace detail;
    Game g;
    bool have_init = false;
    for (const Line &l : tokenize(text)) {
        const std::string &kw = l.tokens[0].text;
        if (kw == "player") {
            arity(l, 2);
            at(l, l.tokens[1], [&] { return g.add_player(l.tokens[1].text); });
        } else if (kw == "vertex") {
            arity(l, 3);
            Player p = at(l, l.tokens[2], [&] { return g.player_index(l.tokens[2].text); });
            at(l, l.tokens[1], [&] { return g.add_vertex(l.tokens[1].text, p); });
        } else if (kw == "edge") {
            if (l.tokens.size() < 3) fail(l, "'edge' expects two endpoints and rewards");
            Vertex from = at(l, l.tokens[1], [&] { return g.vertex_index(l.tokens[1].text); });
            Vertex to = at(l, l.tokens[2], [&] { return g.vertex_index(l.tokens[2].text); });
            std::vector<std::optional<Rational>> r(g.num_players());
            for (size_t k = 3; k < l.tokens.size(); ++k) {
                const Token &t = l.tokens[k];
                size_t eq = t.text.find('=');
                if (eq == std::string::npos) fail(l, t, "expected <player>=<rational>");
                Player p = at(l, t, [&] { return g.player_index(t.text.substr(0, eq)); });
                if (r[p]) fail(l, t, "reward of '" + g.player_name(p) + "' given twice");
                r[p] = at(l, t, [&] { return parse_rational(t.text.substr(eq + 1)); });
            }
            std::vector<Rational> rewards;
            for (Player p = 0; p < g.num_players(); ++p) {
                if (!r[p]) fail(l, "missing reward for player '" + g.player_name(p) + "'");
                rewards.push_back(*r[p]);
            }
            at(l, l.tokens[0], [&] { return g.add_edge(from, to, rewards); });
        } else if (kw == "init") {
            arity(l, 2);
            if (have_init) fail(l, "duplicate 'init' line");
            Vertex v = at(l, l.tokens[1], [&] { return g.vertex_index(l.tokens[1].text); });
            g.set_init(v);
            have_init = true;
        } else {
            fail(l, "unknown keyword '" + kw + "'");
        }
    }
    g.validate();
    return g;
}

inline std::string
print_game(const Game &g)
{
    std::ostringstream os;
    for (Player p = 0; p < g.num_players(); ++p) os << "player " << g.player_name(p) << "\n";
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        os << "vertex " << g.vertex_name(v) << " " << g.player_name(g.owner(v)) << "\n";
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        for (size_t e : g.out_edges(v)) {
            const Edge &edge = g.edge(e);
            os << "edge " << g.vertex_name(edge.from) << " " << g.vertex_name(edge.to);
            for (Player p = 0; p < g.num_players(); ++p) os << " " << g.player_name(p) << "=" << edge.reward[p].get_str();
            os << "\n";
        }
    }
    if (g.init()) os << "init " << g.vertex_name(*g.init()) << "\n";
    return os.str();
}

/// One `<vertex> <value>` line per vertex; values may be inf or -inf.
inline Requirement
parse_requirement(const Game &g, std::string_view text)
{
    using namespace detail;
    std::vector<std::optional<ExtRat>> vals(g.num_vertices());
    for (const Line &l : tokenize(text)) {
        arity(l, 2);
        Vertex v = at(l, l.tokens[0], [&] { return g.vertex_index(l.tokens[0].text); });
        if (vals[v]) fail(l, "requirement for '" + g.vertex_name(v) + "' given twice");
        vals[v] = at(l, l.tokens[1], [&] { return ExtRat::parse(l.tokens[1].text); });
    }
    Requirement lam;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (!vals[v]) throw InputError("no requirement for vertex '" + g.vertex_name(v) + "'");
        lam.push_back(*vals[v]);
    }
    return lam;
}

inline std::string
print_requirement(const Game &g, const Requirement &lam)
{
    std::string s;
    for (Vertex v = 0; v < g.num_vertices(); ++v) s += g.vertex_name(v) + " " + lam.at(v).str() + "\n";
    return s;
}

/// Parses `h=<list> c=<list> x=<player>=<rational>,... W=<list>`.
inline PunishmentFamily
parse_family(const Game &g, const std::vector<std::string> &fields)
{
    PunishmentFamily f;
    bool seen[4] = {false, false, false, false};
    f.xbar.assign(g.num_players(), Rational(0));
    for (const auto &fld : fields) {
        size_t eq = fld.find('=');
        if (eq == std::string::npos) throw InputError("malformed family field '" + fld + "'");
        std::string key = fld.substr(0, eq), val = fld.substr(eq + 1);
        if (key == "h" && !seen[0]) {
            f.h = detail::parse_list(g, val);
            seen[0] = true;
        } else if (key == "c" && !seen[1]) {
            f.c = detail::parse_list(g, val);
            seen[1] = true;
        } else if (key == "x" && !seen[2]) {
            std::vector<char> given(g.num_players(), 0);
            for (const auto &item : detail::split(val, ',')) {
                size_t e2 = item.find('=');
                if (e2 == std::string::npos) throw InputError("malformed payoff entry '" + item + "'");
                Player p = g.player_index(item.substr(0, e2));
                if (given[p]) throw InputError("payoff of '" + g.player_name(p) + "' given twice");
                given[p] = 1;
                f.xbar[p] = parse_rational(item.substr(e2 + 1));
            }
            for (Player p = 0; p < g.num_players(); ++p)
                if (!given[p]) throw InputError("family payoff misses player '" + g.player_name(p) + "'");
            seen[2] = true;
        } else if (key == "W" && !seen[3]) {
            f.W = detail::parse_list(g, val);
            seen[3] = true;
        } else {
            throw InputError("unexpected or repeated family field '" + key + "'");
        }
    }
    for (bool s : seen)
        if (!s) throw InputError("family needs the fields h, c, x and W");
    check_family_shape(g, f);
    return f;
}

/**
 * Witness files: `EPSILON <rational>`, a `LAMBDA` section of vertex values,
 * a `PLAY` section (`W <list>`, `W' <list>`, `alpha <player> <cycle> <rational>`)
 * and one `STRATEGY <vertex>` block per vertex with `at <vertex> family ...`
 * or `at <vertex> giveup` lines. Missing choices mean giving up.
 */
inline Witness
parse_witness(const Game &g, std::string_view text)
{
    using namespace detail;
    Witness w;
    enum class Sec { None, Lambda, Play, Strategy } sec = Sec::None;
    std::vector<std::optional<ExtRat>> lam(g.num_vertices());
    std::vector<char> has_strategy(g.num_vertices(), 0);
    Vertex current = 0;
    bool have_eps = false, have_W = false, have_Wp = false;
    std::map<Cycle, size_t> cycle_index;
    std::vector<std::map<size_t, Rational>> alpha(g.num_players());

    w.strategies.assign(g.num_vertices(), ProverStrategy(g.num_vertices()));
    for (const Line &l : tokenize(text)) {
        const std::string &kw = l.tokens[0].text;
        if (kw == "EPSILON") {
            arity(l, 2);
            if (have_eps) fail(l, "duplicate EPSILON");
            w.epsilon = at(l, l.tokens[1], [&] { return ExtRat(parse_rational(l.tokens[1].text)); });
            have_eps = true;
            sec = Sec::None;
        } else if (kw == "LAMBDA") {
            arity(l, 1);
            sec = Sec::Lambda;
        } else if (kw == "PLAY") {
            arity(l, 1);
            sec = Sec::Play;
        } else if (kw == "STRATEGY") {
            arity(l, 2);
            current = at(l, l.tokens[1], [&] { return g.vertex_index(l.tokens[1].text); });
            if (has_strategy[current]) fail(l, "duplicate strategy for '" + g.vertex_name(current) + "'");
            has_strategy[current] = 1;
            sec = Sec::Strategy;
        } else if (sec == Sec::Lambda) {
            arity(l, 2);
            Vertex v = at(l, l.tokens[0], [&] { return g.vertex_index(kw); });
            if (lam[v]) fail(l, "requirement for '" + kw + "' given twice");
            lam[v] = at(l, l.tokens[1], [&] { return ExtRat::parse(l.tokens[1].text); });
        } else if (sec == Sec::Play && (kw == "W" || kw == "W'")) {
            arity(l, 2);
            bool &seen = kw == "W" ? have_W : have_Wp;
            if (seen) fail(l, "duplicate " + kw + " line");
            seen = true;
            auto vs = at(l, l.tokens[1], [&] { return parse_list(g, l.tokens[1].text); });
            std::sort(vs.begin(), vs.end());
            if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) fail(l, l.tokens[1], "repeated vertex");
            (kw == "W" ? w.W : w.Wp) = vs;
        } else if (sec == Sec::Play && kw == "alpha") {
            arity(l, 4);
            Player p = at(l, l.tokens[1], [&] { return g.player_index(l.tokens[1].text); });
            Cycle c = at(l, l.tokens[2], [&] { return parse_list(g, l.tokens[2].text); });
            if (c.empty()) fail(l, l.tokens[2], "empty cycle");
            c = canonical_cycle(c);
            Rational a = at(l, l.tokens[3], [&] { return parse_rational(l.tokens[3].text); });
            auto it = cycle_index.find(c);
            if (it == cycle_index.end()) {
                it = cycle_index.emplace(c, w.cycles.size()).first;
                w.cycles.push_back(c);
            }
            if (alpha[p].count(it->second)) fail(l, "weight given twice");
            alpha[p][it->second] = a;
        } else if (sec == Sec::Strategy && kw == "at") {
            if (l.tokens.size() < 3) fail(l, "'at' expects a vertex and a choice");
            Vertex v = at(l, l.tokens[1], [&] { return g.vertex_index(l.tokens[1].text); });
            auto &slot = w.strategies[current][v];
            const std::string &what = l.tokens[2].text;
            if (what == "giveup") {
                arity(l, 3);
                slot.reset();
            } else if (what == "family") {
                std::vector<std::string> fields;
                for (size_t k = 3; k < l.tokens.size(); ++k) fields.push_back(l.tokens[k].text);
                slot = at(l, l.tokens[2], [&] { return parse_family(g, fields); });
            } else {
                fail(l, l.tokens[2], "expected 'family' or 'giveup'");
            }
        } else {
            fail(l, "unexpected line");
        }
    }
    if (!have_eps) throw InputError("witness has no EPSILON line");
    if (!have_W || !have_Wp) throw InputError("witness needs W and W' lines");
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (!lam[v]) throw InputError("witness has no requirement for '" + g.vertex_name(v) + "'");
        w.lam.push_back(*lam[v]);
    }
    w.alpha.assign(g.num_players(), std::vector<Rational>(w.cycles.size()));
    for (Player p = 0; p < g.num_players(); ++p)
        for (auto &[c, a] : alpha[p]) w.alpha[p][c] = a;
    return w;
}

inline std::string
print_witness(const Game &g, const Witness &w)
{
    std::ostringstream os;
    os << "EPSILON " << w.epsilon.str() << "\n";
    os << "LAMBDA\n";
    for (Vertex v = 0; v < g.num_vertices(); ++v) os << g.vertex_name(v) << " " << w.lam.at(v).str() << "\n";
    os << "PLAY\n";
    os << "W " << detail::print_list(g, w.W) << "\n";
    os << "W' " << detail::print_list(g, w.Wp) << "\n";
    for (size_t c = 0; c < w.cycles.size(); ++c)
        for (Player p = 0; p < g.num_players(); ++p)
            os << "alpha " << g.player_name(p) << " " << detail::print_list(g, canonical_cycle(w.cycles[c])) << " "
               << w.alpha.at(p).at(c).get_str() << "\n";
    for (Vertex v = 0; v < w.strategies.size(); ++v) {
        os << "STRATEGY " << g.vertex_name(v) << "\n";
        for (Vertex u = 0; u < w.strategies[v].size(); ++u) {
            os << "at " << g.vertex_name(u) << " ";
            if (const auto &f = w.strategies[v][u]) os << "family " << describe_family(g, *f) << "\n";
            else os << "giveup\n";
        }
    }
    return os.str();
}

/// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header, clauses ended by 0.
inline reductions::CnfFormula
parse_dimacs(std::string_view text)
{
    using namespace detail;
    reductions::CnfFormula phi;
    bool header = false;
    size_t declared = 0;
    std::vector<int> clause;
    for (const Line &l : tokenize(text, '\0')) {
        if (l.tokens[0].text == "c") continue;
        if (l.tokens[0].text == "%") break;
        if (l.tokens[0].text == "p") {
            if (header) fail(l, "duplicate header");
            if (l.tokens.size() != 4 || l.tokens[1].text != "cnf") fail(l, "expected 'p cnf <vars> <clauses>'");
            try {
                phi.num_vars = std::stoul(l.tokens[2].text);
                declared = std::stoul(l.tokens[3].text);
            } catch (const std::exception &) {
                fail(l, "malformed header counts");
            }
            header = true;
            continue;
        }
        if (!header) fail(l, "clause before the 'p cnf' header");
        for (const Token &t : l.tokens) {
            int lit = 0;
            try {
                size_t used = 0;
                lit = std::stoi(t.text, &used);
                if (used != t.text.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception &) {
                fail(l, t, "malformed literal '" + t.text + "'");
            }
            if (lit == 0) {
                if (clause.empty()) fail(l, t, "empty clause");
                phi.clauses.push_back(clause);
                clause.clear();
            } else {
                if (size_t(std::abs(lit)) > phi.num_vars) fail(l, t, "variable out of range");
                clause.push_back(lit);
            }
        }
    }
    if (!header) throw InputError("missing 'p cnf' header");
    if (!clause.empty()) throw InputError("last clause is not terminated by 0");
    if (phi.clauses.size() != declared)
        throw InputError("header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(phi.clauses.size()));
    phi.validate();
    return phi;
}

inline std::string
print_dimacs(const reductions::CnfFormula &phi)
{
    std::ostringstream os;
    os << "p cnf " << phi.num_vars << " " << phi.clauses.size() << "\n";
    for (const auto &cl : phi.clauses) {
        for (int lit : cl) os << lit << " ";
        os << "0\n";
    }
    return os.str();
}

} // namespace mpspe::io

#endif
