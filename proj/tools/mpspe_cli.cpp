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

// Command-line front end. Exit codes: 0 yes/valid, 1 no/invalid,
// 2 indeterminate (a cap was hit), 3 input error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpspe/mpspe.hpp"

using namespace mpspe;
using json = nlohmann::json;

namespace {

enum Exit { kYes = 0, kNo = 1, kIndeterminate = 2, kInputError = 3 };

struct Options
{
    bool json = false;
    std::string game;
    std::string second; // witness, requirement or dimacs path
    std::string player;
    std::string from;
    std::string witness_out;
    std::vector<std::string> lower, upper;
    std::string epsilon = "0";
    size_t max_vertices = 12;
    size_t max_iterations = 64;
    bool max = true;
    bool wrap = false;
};

json
payoff_json(const Game &g, const PayoffVector &z)
{
    json j = json::object();
    for (Player p = 0; p < g.num_players() && p < z.size(); ++p) j[g.player_name(p)] = z[p].get_str();
    return j;
}

json
requirement_json(const Game &g, const Requirement &lam)
{
    json j = json::object();
    for (Vertex v = 0; v < g.num_vertices(); ++v) j[g.vertex_name(v)] = lam[v].str();
    return j;
}

std::string
payoff_line(const Game &g, const PayoffVector &z)
{
    std::string s;
    for (Player p = 0; p < g.num_players() && p < z.size(); ++p)
        s += (p ? " " : "") + g.player_name(p) + ":" + z[p].get_str();
    return s;
}

std::string
requirement_line(const Game &g, const Requirement &lam)
{
    std::string s;
    for (Vertex v = 0; v < g.num_vertices(); ++v) s += (v ? " " : "") + g.vertex_name(v) + ":" + lam[v].str();
    return s;
}

std::vector<ExtRat>
thresholds(const Game &g, const std::vector<std::string> &vals, const std::string &what, ExtRat fallback)
{
    if (vals.empty()) return std::vector<ExtRat>(g.num_players(), fallback);
    if (vals.size() != g.num_players())
        throw InputError(what + " needs " + std::to_string(g.num_players()) + " values, one per player");
    std::vector<ExtRat> out;
    for (const auto &s : vals) out.push_back(ExtRat::parse(s));
    return out;
}

negotiation::NegotiationOracleConfig
config(const Options &o)
{
    negotiation::NegotiationOracleConfig cfg;
    cfg.max_vertices = o.max_vertices;
    cfg.max_iterations = o.max_iterations;
    cfg.epsilon = ExtRat(parse_rational(o.epsilon));
    if (cfg.epsilon.value() < 0) throw InputError("epsilon must be nonnegative");
    return cfg;
}

ThresholdInstance
instance(const Options &o, const Game &g)
{
    ThresholdInstance inst{g, thresholds(g, o.lower, "--lower", ExtRat::neg_inf()),
                           thresholds(g, o.upper, "--upper", ExtRat::pos_inf()), ExtRat(parse_rational(o.epsilon))};
    inst.validate();
    return inst;
}

int
emit(const Options &o, json j, const std::string &text, int code)
{
    if (o.json) {
        if (!j.contains("diagnostics")) j["diagnostics"] = json::array();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    return code;
}

int
verdict_code(Verdict v)
{
    return v == Verdict::Yes ? kYes : v == Verdict::No ? kNo : kIndeterminate;
}

int
cmd_validate(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    json j{{"verdict", "valid"},
           {"players", g.num_players()},
           {"vertices", g.num_vertices()},
           {"edges", g.num_edges()}};
    std::string text = "valid: " + std::to_string(g.num_players()) + " players, " + std::to_string(g.num_vertices()) +
                       " vertices, " + std::to_string(g.num_edges()) + " edges\n";
    return emit(o, j, text, kYes);
}

int
cmd_mp_cycle(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    Player p = g.player_index(o.player);
    Vertex src = o.from.empty() ? g.init().value_or(0) : g.vertex_index(o.from);
    graph::WeightedDigraph wd;
    wd.n = g.num_vertices();
    for (const Edge &e : g.edges()) wd.add_arc(e.from, e.to, o.max ? e.reward[p] : Rational(-e.reward[p]), 1);
    auto mc = graph::karp_max_mean_cycle(wd, src);
    if (!mc) throw InputError("no cycle is reachable from " + g.vertex_name(src));
    Rational val = o.max ? mc->value : Rational(-mc->value);
    std::vector<Vertex> cyc(mc->nodes.begin(), mc->nodes.end());
    json j{{"verdict", "yes"}, {"value", val.get_str()}, {"cycle", json::array()}};
    for (Vertex v : cyc) j["cycle"].push_back(g.vertex_name(v));
    std::string text = std::string(o.max ? "max" : "min") + " mean payoff of " + g.player_name(p) + ": " +
                       val.get_str() + "\ncycle: " + io::detail::print_list(g, cyc) + "\n";
    return emit(o, j, text, kYes);
}

int
cmd_nego(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    Requirement lam = io::parse_requirement(g, io::read_file(o.second));
    auto cfg = config(o);
    try {
        auto res = negotiation::nego_oracle(g, lam, cfg);
        json j{{"verdict", "yes"}, {"nego", requirement_json(g, res.value)}};
        return emit(o, j, "nego: " + requirement_line(g, res.value) + "\n", kYes);
    } catch (const CapExceeded &e) {
        json j{{"verdict", "indeterminate"}, {"diagnostics", {e.what()}}};
        return emit(o, j, std::string("indeterminate: ") + e.what() + "\n", kIndeterminate);
    }
}

int
cmd_fixpoint(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    auto cfg = config(o);
    try {
        auto fr = negotiation::least_fixed_point(g, cfg);
        json j{{"verdict", fr.converged ? "yes" : "indeterminate"},
               {"lambda", requirement_json(g, fr.lambda)},
               {"trace", json::array()}};
        std::string text;
        for (size_t k = 0; k < fr.trace.size(); ++k) {
            j["trace"].push_back(requirement_json(g, fr.trace[k]));
            text += "lambda_" + std::to_string(k + 1) + " = " + requirement_line(g, fr.trace[k]) + "\n";
        }
        if (fr.converged) {
            text += "lambda* = " + requirement_line(g, fr.lambda) + "\n";
            return emit(o, j, text, kYes);
        }
        j["diagnostics"] = {"iteration cap reached"};
        return emit(o, j, text + "indeterminate: iteration cap reached\n", kIndeterminate);
    } catch (const CapExceeded &e) {
        json j{{"verdict", "indeterminate"}, {"diagnostics", {e.what()}}};
        return emit(o, j, std::string("indeterminate: ") + e.what() + "\n", kIndeterminate);
    }
}

int
cmd_exists_play(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    Requirement lam = io::parse_requirement(g, io::read_file(o.second));
    ThresholdInstance inst = instance(o, g);
    auto cfg = config(o);
    if (g.num_vertices() > cfg.max_vertices) {
        json j{{"verdict", "indeterminate"}, {"diagnostics", {"game exceeds the vertex cap"}}};
        return emit(o, j, "indeterminate: game exceeds the vertex cap\n", kIndeterminate);
    }
    auto cat = negotiation::TailCatalog::build(g, cfg.max_cycles);
    auto part = find_play(inst, lam, cat, cfg.max_cycles, [](const PlayPart &) { return true; });
    if (!part) {
        json j{{"verdict", "no"}};
        return emit(o, j, "no: no consistent play within the thresholds\n", kNo);
    }
    json j{{"verdict", "yes"},
           {"payoff", payoff_json(g, part->z)},
           {"W", io::detail::print_list(g, part->W)},
           {"Wp", io::detail::print_list(g, part->Wp)}};
    std::string text = "yes: W=" + io::detail::print_list(g, part->W) + " W'=" + io::detail::print_list(g, part->Wp) +
                       " payoff " + payoff_line(g, part->z) + "\n";
    return emit(o, j, text, kYes);
}

int
cmd_verify_witness(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    Witness w = io::parse_witness(g, io::read_file(o.second));
    ThresholdInstance inst = instance(o, g);
    WitnessVerdict v = check_witness(inst, w);
    json j{{"verdict", v.valid ? "valid" : "invalid"}, {"diagnostics", v.diagnostics}};
    if (!v.z.empty()) j["payoff"] = payoff_json(g, v.z);
    std::string text = v.valid ? "valid\n" : "invalid\n";
    for (const auto &d : v.diagnostics) text += "  " + d + "\n";
    return emit(o, j, text, v.valid ? kYes : kNo);
}

int
report_search(const Options &o, const Game &g, const SearchResult &r)
{
    json j{{"verdict", verdict_name(r.verdict)}, {"diagnostics", r.notes}};
    std::string text = std::string(verdict_name(r.verdict)) + "\n";
    if (!r.lambda.empty()) {
        j["lambda"] = requirement_json(g, r.lambda);
        text += "lambda* = " + requirement_line(g, r.lambda) + "\n";
    }
    if (r.witness) {
        PayoffVector z = lp::sealed_value(r.witness->alpha, cycle_payoffs(g, r.witness->cycles));
        j["payoff"] = payoff_json(g, z);
        text += "payoff = " + payoff_line(g, z) + "\n";
        if (!o.witness_out.empty()) {
            std::ofstream out(o.witness_out);
            if (!out) throw InputError("cannot write '" + o.witness_out + "'");
            out << io::print_witness(g, *r.witness);
        }
    }
    if (r.verdict == Verdict::No)
        text += "note: negative answers are relative to the negotiation oracle and the enumeration caps\n";
    if (r.verdict == Verdict::Indeterminate)
        for (const auto &n : r.notes) text += "  " + n + "\n";
    return emit(o, j, text, verdict_code(r.verdict));
}

int
cmd_solve(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    ThresholdInstance inst = instance(o, g);
    return report_search(o, g, search_witness(inst, config(o)));
}

int
cmd_spe_exists(const Options &o)
{
    Game g = io::parse_game(io::read_file(o.game));
    if (!g.init()) throw InputError("the game needs an initial vertex");
    auto cfg = config(o);
    return report_search(o, g, spe_exists(g, cfg.epsilon, cfg));
}

int
cmd_gen_sat(const Options &o)
{
    auto phi = io::parse_dimacs(io::read_file(o.game));
    Game g = o.wrap ? reductions::build_h_phi(phi) : reductions::build_g_phi(phi);
    std::string text = io::print_game(g);
    json j{{"verdict", "yes"}, {"game", text}};
    return emit(o, j, text, kYes);
}

} // namespace

int
main(int argc, char **argv)
{
    CLI::App app{"Subgame-perfect equilibria of multiplayer mean-payoff games"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "Machine-readable output");

    auto caps = [&](CLI::App *sub) {
        sub->add_option("--max-vertices", o.max_vertices, "Largest game the oracle accepts");
        sub->add_option("--max-iterations", o.max_iterations, "Cap on fixed point iterations");
    };
    auto bounds = [&](CLI::App *sub) {
        sub->add_option("--lower", o.lower, "Lower thresholds, one per player (inf, -inf allowed)");
        sub->add_option("--upper", o.upper, "Upper thresholds, one per player (inf, -inf allowed)");
    };
    auto eps = [&](CLI::App *sub) { sub->add_option("--epsilon", o.epsilon, "Tolerance epsilon >= 0"); };

    auto *validate = app.add_subcommand("validate", "Parse and check a game file");
    validate->add_option("game", o.game)->required();

    auto *mp = app.add_subcommand("mp-cycle", "Best reachable cycle mean for one player");
    mp->add_option("game", o.game)->required();
    mp->add_option("--player", o.player)->required();
    mp->add_option("--from", o.from, "Start vertex (default: init)");
    mp->add_flag("--max,!--min", o.max, "Maximize (default) or minimize");

    auto *nego = app.add_subcommand("nego", "Apply the negotiation function once");
    nego->add_option("game", o.game)->required();
    nego->add_option("--lambda", o.second, "Requirement file")->required();
    caps(nego);

    auto *fix = app.add_subcommand("fixpoint", "Least epsilon-fixed point of the negotiation function");
    fix->add_option("game", o.game)->required();
    eps(fix);
    caps(fix);

    auto *ep = app.add_subcommand("exists-play", "Is there a lambda-consistent play within the thresholds?");
    ep->add_option("game", o.game)->required();
    ep->add_option("--lambda", o.second, "Requirement file")->required();
    bounds(ep);
    caps(ep);

    auto *vw = app.add_subcommand("verify-witness", "Check a witness file");
    vw->add_option("game", o.game)->required();
    vw->add_option("witness", o.second)->required();
    bounds(vw);
    eps(vw);

    auto *solve = app.add_subcommand("solve", "Decide the threshold problem and produce a witness");
    solve->add_option("game", o.game)->required();
    bounds(solve);
    eps(solve);
    caps(solve);
    solve->add_option("--witness-out", o.witness_out, "Write the witness here");

    auto *spe = app.add_subcommand("spe-exists", "Does an epsilon-SPE exist from init?");
    spe->add_option("game", o.game)->required();
    eps(spe);
    caps(spe);
    spe->add_option("--witness-out", o.witness_out, "Write the witness here");

    auto *gen = app.add_subcommand("gen-sat", "Build the game of a CNF formula");
    gen->add_option("dimacs", o.game)->required();
    gen->add_flag("--wrap", o.wrap, "Wrap it so that an SPE exists iff the formula is satisfiable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*mp) return cmd_mp_cycle(o);
        if (*nego) return cmd_nego(o);
        if (*fix) return cmd_fixpoint(o);
        if (*ep) return cmd_exists_play(o);
        if (*vw) return cmd_verify_witness(o);
        if (*solve) return cmd_solve(o);
        if (*spe) return cmd_spe_exists(o);
        if (*gen) return cmd_gen_sat(o);
    } catch (const CapExceeded &e) {
        json j{{"verdict", "indeterminate"}, {"diagnostics", {e.what()}}};
        return emit(o, j, std::string("indeterminate: ") + e.what() + "\n", kIndeterminate);
    } catch (const Error &e) {
        json j{{"verdict", "error"}, {"diagnostics", {e.what()}}};
        if (o.json) std::cout << j.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
