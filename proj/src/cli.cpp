#include "dltl/cli.hpp"

#include "dltl/errors.hpp"
#include "dltl/learning.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dltl {

using nlohmann::json;

namespace {

std::string decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", x);
    return buf;
}

json exact(const Rational& r) { return {{"exact", r.to_string()}, {"decimal", decimal(r.to_double())}}; }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in " + what + ": " + e.what());
    }
}

// Inline JSON when it looks like JSON, otherwise a file path.
json json_arg(const std::string& arg, const std::string& what) {
    auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) return parse_json(arg, what);
    return parse_json(read_file(arg), what);
}

json formula_json(const Formula& f) {
    json j{{"op", op_name(f->op)}};
    if (f->op == Op::Atom) j["name"] = f->name;
    if (is_temporal(f->op)) j["lambda"] = f->lambda.to_string();
    if (f->lhs) j["args"].push_back(formula_json(f->lhs));
    if (f->rhs) j["args"].push_back(formula_json(f->rhs));
    return j;
}

json uniformity_json(const Uniformity& u) {
    switch (u.kind) {
    case Uniformity::Any: return {{"uniform", true}, {"lambda", nullptr}, {"note", "no temporal operator"}};
    case Uniformity::Uniform: return {{"uniform", true}, {"lambda", u.lambda.to_string()}};
    case Uniformity::NonUniform: return {{"uniform", false}};
    }
    return {};
}

std::vector<std::string> split_props(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct Common {
    std::string formula, word, rm, mdp, policy, out, dot, mode = "pac", lambda, props, eps = "1/20", conf = "1/10",
                                                         tol_exact = "1/1000000000";
    bool lasso = false, serial = false, ev_dedup = false, evaluate = true, reduce = false, faithful = false;
    double tol = 1e-9;
    std::size_t trials = 200, max_len = 12, steps = 100, seeds = 1, jobs = 1, budget = 1000000;
    std::uint64_t seed = 0;
    RlOptions rl;
    std::size_t known = 0, max_episodes = 200000;
};

Formula need_formula(const Common& c) {
    if (c.formula.empty()) throw ValidationError("missing formula (-f)");
    return parse(c.formula);
}

// compile stays faithful to the constructions unless asked; solving commands reduce unless asked not to.
RewardMachine compile_for(const Formula& f, const Alphabet& a, const Common& c, bool reduce_default) {
    BuildOptions opt;
    opt.reduce = c.faithful ? false : (c.reduce || reduce_default);
    opt.state_budget = c.budget;
    opt.eventually_dedup = c.ev_dedup;
    if (!c.lambda.empty()) return compile(f, a, Rational::parse(c.lambda), opt);
    return compile(f, a, opt);
}

Alphabet formula_alphabet(const Formula& f, const Common& c) {
    auto ps = props(f);
    auto extra = split_props(c.props);
    ps.insert(ps.end(), extra.begin(), extra.end());
    return Alphabet(ps);
}

int cmd_parse(const Common& c, std::ostream& out) {
    Formula f = need_formula(c);
    json j{{"ast", formula_json(f)},
           {"printed", to_string(f)},
           {"desugared", to_string(desugar(f))},
           {"size", formula_size(f)},
           {"props", props(f)},
           {"uniformity", uniformity_json(is_uniform(f))}};
    j["lambda_max"] = has_temporal(f) ? json(max_discount(f).to_string()) : json(nullptr);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_eval(const Common& c, std::ostream& out) {
    Formula f = need_formula(c);
    if (c.word.empty()) throw ValidationError("missing --word");
    json w = json_arg(c.word, "--word");
    auto ps = props(f);
    auto wp = props_in_json(w);
    ps.insert(ps.end(), wp.begin(), wp.end());
    Alphabet a(ps);
    json j;
    Interval iv;
    if (c.lasso) {
        Rational tol = Rational::parse(c.tol_exact);
        iv = eval_lasso(f, a, lasso_from_json(a, w), tol);
        j["tolerance"] = tol.to_string();
    } else {
        FiniteWord fw = word_from_json(a, w);
        iv = eval_interval(f, a, fw);
        j["finite"] = exact(eval_finite(f, a, fw));
    }
    j["interval"] = "[" + iv.lo.to_string() + ", " + iv.hi.to_string() + "]";
    j["lo"] = exact(iv.lo);
    j["hi"] = exact(iv.hi);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_compile(const Common& c, std::ostream& out) {
    Formula f = need_formula(c);
    RewardMachine m = compile_for(f, formula_alphabet(f, c), c, false);
    json mj = machine_to_json(m);
    if (!c.dot.empty()) write_file(c.dot, to_dot(m));
    if (c.out.empty()) {
        out << mj.dump(2) << "\n";
    } else {
        write_file(c.out, mj.dump(2) + "\n");
        out << json{{"states", m.num_states()}, {"lambda", m.lambda().to_string()}, {"output", c.out}}.dump(2) << "\n";
    }
    return 0;
}

int cmd_check(const Common& c, std::ostream& out) {
    Formula f = need_formula(c);
    if (c.rm.empty()) throw ValidationError("missing --rm");
    RewardMachine m = machine_from_json(parse_json(read_file(c.rm), c.rm));
    InvariantReport rep = check_invariants(m, f, c.trials, c.max_len, c.seed);
    json j = rep.to_json();
    j["seed"] = c.seed;
    out << j.dump(2) << "\n";
    return rep.ok() ? 0 : 3;
}

struct Loaded {
    LabeledMdp mdp;
    RewardMachine machine;
    Formula f;
};

Loaded load_model(const Common& c) {
    if (c.mdp.empty()) throw ValidationError("missing --mdp");
    Loaded l;
    l.mdp = load_mdp(parse_json(read_file(c.mdp), c.mdp));
    if (!c.rm.empty()) {
        l.machine = machine_from_json(parse_json(read_file(c.rm), c.rm));
    } else {
        l.f = need_formula(c);
        Alphabet a = l.mdp.alphabet.merged(formula_alphabet(l.f, c));
        l.machine = compile_for(l.f, a, c, true);
    }
    return l;
}

int cmd_synthesize(const Common& c, std::ostream& out) {
    Loaded l = load_model(c);
    ProductMdp p = product(l.mdp, l.machine);
    ValueFunction v = value_iteration(p, c.tol, c.serial ? Exec::Serial : Exec::Parallel);
    FinitePolicy pi = extract_policy(l.mdp, l.machine, p, v);
    json j{{"value", decimal(v.at_initial(p))},
           {"product_states", p.num_states()},
           {"machine_states", l.machine.num_states()},
           {"iterations", v.iterations},
           {"residual", v.residual},
           {"tol", c.tol}};
    j["initial_action"] = l.mdp.action_names[pi.action(l.machine.initial(), l.mdp.initial)];
    if (!c.out.empty()) {
        write_file(c.out, policy_to_json(pi).dump(2) + "\n");
        j["policy"] = c.out;
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_learn(const Common& c, std::ostream& out) {
    if (c.mdp.empty()) throw ValidationError("missing --mdp");
    LabeledMdp m = load_mdp(parse_json(read_file(c.mdp), c.mdp));
    Formula f = need_formula(c);
    if (c.mode != "pac" && c.mode != "rl") throw ValidationError("--mode must be pac or rl");
    std::vector<json> reports(c.seeds);
    std::vector<std::string> errors(c.seeds);

    RewardMachine machine;
    double optimum = -1;
    if (c.mode == "rl" || (c.evaluate && is_uniform(f).kind != Uniformity::NonUniform)) {
        machine = compile_for(f, m.alphabet.merged(formula_alphabet(f, c)), c, true);
        if (c.evaluate) optimum = value_iteration(product(m, machine), 1e-9).at_initial(product(m, machine));
    }
    Rational eps = Rational::parse(c.eps);
    std::unique_ptr<UnrolledMdp> model;
    if (c.mode == "pac" && c.evaluate) model = std::make_unique<UnrolledMdp>(unroll(m, f, eps / 20));

#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(std::max<std::size_t>(1, c.jobs)))
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(c.seeds); ++i) {
        std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
        try {
            MdpEnvironment env(m, seed);
            json j;
            if (c.mode == "pac") {
                PacOptions opt;
                opt.eps = eps;
                opt.conf = Rational::parse(c.conf);
                opt.known_threshold = c.known;
                opt.max_episodes = c.max_episodes;
                PacResult r = pac_learn(env, f, opt, seed);
                if (model) {
                    r.report.evaluated = evaluate_history_policy(*model, r.policy);
                    r.report.extra["root_action"] =
                        m.action_names[r.policy.action({model->trie.word(model->nodes[0].history)}, m.initial,
                                                       m.enabled_actions(m.initial))];
                }
                r.report.optimum = optimum;
                j = r.report.to_json();
            } else {
                RlResult r = rl_product(env, machine, m.state_names, m.action_names, c.rl, seed);
                r.report.evaluated = policy_value(m, machine, r.policy);
                r.report.optimum = optimum;
                j = r.report.to_json();
                Run run = simulate(m, r.policy, c.steps, seed);
                j["simulated_word"] = word_to_json(machine.alphabet(), run.word);
            }
            reports[static_cast<std::size_t>(i)] = std::move(j);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    json all = json::array();
    for (auto& r : reports) all.push_back(std::move(r));
    out << (c.seeds == 1 ? all[0] : all).dump(2) << "\n";
    return 0;
}

int cmd_simulate(const Common& c, std::ostream& out) {
    if (c.mdp.empty() || c.policy.empty()) throw ValidationError("simulate needs --mdp and --policy");
    LabeledMdp m = load_mdp(parse_json(read_file(c.mdp), c.mdp));
    FinitePolicy pi = policy_from_json(parse_json(read_file(c.policy), c.policy));
    Run run = simulate(m, pi, c.steps, c.seed);
    json states = json::array(), actions = json::array();
    for (auto s : run.states) states.push_back(m.state_names[s]);
    for (auto a : run.actions) actions.push_back(m.action_names[a]);
    Rational partial = rm_eval_finite(pi.machine, run.word);
    out << json{{"seed", c.seed},
                {"states", states},
                {"actions", actions},
                {"word", word_to_json(pi.machine.alphabet(), run.word)},
                {"partial_reward", exact(partial)}}
               .dump(2)
        << "\n";
    return 0;
}

int cmd_export_dot(const Common& c, std::ostream& out) {
    if (c.rm.empty()) throw ValidationError("missing --rm");
    out << to_dot(machine_from_json(parse_json(read_file(c.rm), c.rm)));
    return 0;
}

void report_error(std::ostream& err, const char* kind, const std::string& msg) {
    err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discounted LTL toolkit: evaluation, reward-machine compilation, synthesis and learning"};
    app.require_subcommand(1, 1);
    Common c;

    auto formula_opt = [&](CLI::App* s) { s->add_option("-f,--formula", c.formula, "formula text"); };
    auto compile_opts = [&](CLI::App* s) {
        s->add_option("--lambda", c.lambda, "machine discount for formulas without temporal operators");
        s->add_option("--props", c.props, "extra propositions, comma separated");
        s->add_option("--budget", c.budget, "state budget per construction");
        s->add_flag("--ev-dedup", c.ev_dedup, "drop dominated duplicates in eventually states");
        s->add_flag("--reduce", c.reduce, "prune dominated subset elements (default for synthesize/learn)");
        s->add_flag("--faithful", c.faithful, "never reduce; build the constructions exactly as stated");
    };

    auto* p_parse = app.add_subcommand("parse", "parse a formula and report its structure");
    formula_opt(p_parse);

    auto* p_eval = app.add_subcommand("eval", "evaluate a formula on a finite or lasso word");
    formula_opt(p_eval);
    p_eval->add_option("--word", c.word, "word JSON (inline or file)");
    p_eval->add_flag("--lasso", c.lasso, "word is {prefix, cycle}");
    p_eval->add_option("--tol", c.tol_exact, "lasso tolerance (rational)");

    auto* p_compile = app.add_subcommand("compile", "compile a uniformly discounted formula to a reward machine");
    formula_opt(p_compile);
    compile_opts(p_compile);
    p_compile->add_option("-o,--output", c.out, "machine JSON output");
    p_compile->add_option("--dot", c.dot, "DOT output");

    auto* p_check = app.add_subcommand("check", "check machine invariants against the formula");
    formula_opt(p_check);
    p_check->add_option("--rm", c.rm, "machine JSON");
    p_check->add_option("--trials", c.trials, "random words");
    p_check->add_option("--max-len", c.max_len, "maximum word length");
    p_check->add_option("--seed", c.seed, "random seed");

    auto* p_syn = app.add_subcommand("synthesize", "optimal finite-memory policy on a labeled MDP");
    formula_opt(p_syn);
    compile_opts(p_syn);
    p_syn->add_option("--mdp", c.mdp, "MDP JSON");
    p_syn->add_option("--rm", c.rm, "use this machine instead of compiling -f");
    p_syn->add_option("--tol", c.tol, "value tolerance");
    p_syn->add_option("-o,--output", c.out, "policy JSON output");
    p_syn->add_flag("--serial", c.serial, "use the serial Bellman sweep");

    auto* p_learn = app.add_subcommand("learn", "learn a policy from simulated interaction");
    formula_opt(p_learn);
    compile_opts(p_learn);
    p_learn->add_option("--mdp", c.mdp, "MDP JSON (used as a simulator)");
    p_learn->add_option("--mode", c.mode, "pac or rl");
    p_learn->add_option("--eps", c.eps, "accuracy (rational)");
    p_learn->add_option("--conf", c.conf, "failure probability (rational)");
    p_learn->add_option("--seed", c.seed, "first seed");
    p_learn->add_option("--seeds", c.seeds, "number of consecutive seeds");
    p_learn->add_option("--jobs", c.jobs, "parallel seed runs");
    p_learn->add_option("--known", c.known, "visits before a pair counts as known (pac)");
    p_learn->add_option("--max-episodes", c.max_episodes, "episode budget (pac)");
    p_learn->add_option("--episodes", c.rl.episodes, "episodes (rl)");
    p_learn->add_option("--steps", c.rl.steps_per_episode, "steps per episode (rl)");
    p_learn->add_option("--alpha", c.rl.alpha, "initial learning rate (rl)");
    p_learn->add_option("--alpha-decay", c.rl.alpha_decay, "learning-rate decay per visit (rl)");
    p_learn->add_option("--epsilon", c.rl.epsilon, "initial exploration rate (rl)");
    p_learn->add_option("--epsilon-decay", c.rl.epsilon_decay, "exploration decay per episode (rl)");
    p_learn->add_option("--epsilon-min", c.rl.epsilon_min, "exploration floor (rl)");
    p_learn->add_flag("!--no-replay", c.rl.replay, "disable end-of-episode backward replay (rl)");
    p_learn->add_option("--sim-steps", c.steps, "length of the reported simulated word (rl)");
    p_learn->add_flag("!--no-evaluate", c.evaluate, "skip evaluation against the known model");

    auto* p_sim = app.add_subcommand("simulate", "simulate a policy");
    p_sim->add_option("--mdp", c.mdp, "MDP JSON");
    p_sim->add_option("--policy", c.policy, "policy JSON");
    p_sim->add_option("--steps", c.steps, "steps");
    p_sim->add_option("--seed", c.seed, "random seed");

    auto* p_dot = app.add_subcommand("export-dot", "print a machine as Graphviz DOT");
    p_dot->add_option("--rm", c.rm, "machine JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return 1;
    }

    try {
        if (*p_parse) return cmd_parse(c, out);
        if (*p_eval) return cmd_eval(c, out);
        if (*p_compile) return cmd_compile(c, out);
        if (*p_check) return cmd_check(c, out);
        if (*p_syn) return cmd_synthesize(c, out);
        if (*p_learn) return cmd_learn(c, out);
        if (*p_sim) return cmd_simulate(c, out);
        if (*p_dot) return cmd_export_dot(c, out);
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what());
        return e.exit_code();
    }
    return 1;
}

}  // namespace dltl
