// Command-line front end for the hypersequent prover.
//
// Subcommands:
//   decide       exact validity of a quantifier-free hypersequent
//   prove        proof of the 1/n-approximation of a closed hypersequent
//   check        verify a proof file
//   countermodel search for a refuting valuation or finite structure
//   skolemize    print the quantifier-removal tree
//   eval         evaluate under a model file
//
// Exit codes: 0 valid/proved/accepted, 1 invalid/rejected, 2 input error,
// 3 search bounds exhausted.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glv/parser.hpp"
#include "glv/reconstruct.hpp"
#include "glv/semantics.hpp"

using namespace glv;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kReject = 1, kInputError = 2, kExhausted = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct InputOpt {
    std::string text;
    std::string file;

    std::string get() const {
        if (!file.empty()) return trim(slurp(file));
        if (!text.empty()) return text;
        throw std::runtime_error("no input given (positional text or --file)");
    }
};

void add_input(CLI::App* cmd, InputOpt& in) {
    cmd->add_option("input", in.text, "hypersequent text, e.g. \"=> A -> A\"");
    cmd->add_option("-f,--file", in.file, "read the hypersequent from a file");
}

void write_proof(const Proof& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(p).dump(1) << "\n";
}

json proof_summary(const Proof& p) {
    ProofStats st = stats(p);
    json rules = json::object();
    for (auto& [r, c] : st.rule_counts) rules[r] = c;
    return {{"conclusion", print(p.conclusion())},
            {"dag_size", st.dag_size},
            {"tree_size", st.tree_size.str()},
            {"depth", st.depth},
            {"rules", rules}};
}

void emit(const json& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << std::endl;
        return;
    }
    for (auto& [k, v] : j.items()) {
        if (v.is_string())
            std::cout << k << ": " << v.get<std::string>() << std::endl;
        else
            std::cout << k << ": " << v.dump() << std::endl;
    }
}

// ---------------------------------------------------------------- models

struct Model {
    bool structural = false;
    Valuation val;
    FiniteStructure str;
    Assignment env;
};

Model load_model(const std::string& path) {
    Model m;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected '='");
        std::string lhs = trim(s.substr(0, eq));
        std::string rhs = trim(s.substr(eq + 1));
        if (lhs == "domain") {
            m.structural = true;
            m.str.size = std::stoi(rhs);
            if (m.str.size < 1) throw std::runtime_error("domain size must be >= 1");
            continue;
        }
        auto head = [&](const std::string& kw) {
            return lhs.rfind(kw + " ", 0) == 0 ? trim(lhs.substr(kw.size())) : std::string();
        };
        auto split_call = [&](const std::string& callstr, std::string& name, std::vector<int>& args) {
            size_t par = callstr.find('(');
            if (par == std::string::npos) {
                name = callstr;
                return;
            }
            name = trim(callstr.substr(0, par));
            std::string inner = callstr.substr(par + 1, callstr.rfind(')') - par - 1);
            std::stringstream as(inner);
            std::string piece;
            while (std::getline(as, piece, ','))
                if (!trim(piece).empty()) args.push_back(std::stoi(trim(piece)));
        };
        if (std::string c = head("fn"); !c.empty()) {
            m.structural = true;
            std::string name;
            std::vector<int> args;
            split_call(c, name, args);
            auto& table = m.str.funcs[name];
            size_t cells = 1;
            for (size_t i = 0; i < args.size(); ++i) cells *= static_cast<size_t>(m.str.size);
            table.resize(cells, 0);
            table[m.str.index(args)] = std::stoi(rhs);
        } else if (std::string c = head("rel"); !c.empty()) {
            m.structural = true;
            std::string name;
            std::vector<int> args;
            split_call(c, name, args);
            auto& table = m.str.rels[name];
            size_t cells = 1;
            for (size_t i = 0; i < args.size(); ++i) cells *= static_cast<size_t>(m.str.size);
            table.resize(cells, Rational(0));
            table[m.str.index(args)] = parse_rational(rhs);
        } else if (std::string c = head("var"); !c.empty()) {
            m.structural = true;
            m.env[c] = std::stoi(rhs);
        } else {
            Formula atom = parse_formula(lhs);
            if (atom.kind != FKind::Atom)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": left side must be an atom");
            m.val.set(atom, parse_rational(rhs));
        }
    }
    return m;
}

json valuation_json(const Valuation& v) {
    json j = json::object();
    for (auto& [a, r] : v.v) j[a] = to_string(r);
    return j;
}

json structure_json(const StructureCounter& sc) {
    json fns = json::object(), rels = json::object(), env = json::object();
    for (auto& [n, t] : sc.m.funcs) {
        json arr = json::array();
        for (int x : t) arr.push_back(x);
        fns[n] = arr;
    }
    for (auto& [n, t] : sc.m.rels) {
        json arr = json::array();
        for (auto& x : t) arr.push_back(to_string(x));
        rels[n] = arr;
    }
    for (auto& [n, x] : sc.env) env[n] = x;
    return {{"domain", sc.m.size}, {"fn", fns}, {"rel", rels}, {"var", env},
            {"value", to_string(sc.value)}};
}

// ------------------------------------------------------------- commands

int cmd_decide(const InputOpt& in, const std::string& out_path, const std::string& format) {
    Hypersequent h = parse_hypersequent(in.get());
    if (has_quantifier(h)) {
        std::cerr << "decide handles quantifier-free input only; use prove" << std::endl;
        return kInputError;
    }
    auto res = decide_prop(h);
    if (res.valid) {
        check(res.proof);
        if (!out_path.empty()) write_proof(res.proof, out_path);
        emit({{"verdict", "valid"}, {"proof", proof_summary(res.proof)}}, format);
        return kOk;
    }
    emit({{"verdict", "invalid"},
          {"countermodel", valuation_json(res.countermodel)},
          {"value", to_string(eval_hypersequent(res.countermodel, h))}},
         format);
    return kReject;
}

int cmd_prove(const InputOpt& in, const ProveOptions& opt, const std::string& out_path,
              const std::string& format) {
    Hypersequent h = parse_hypersequent(in.get());
    ProveResult r = prove_approx(h, opt);
    switch (r.status) {
        case ProveResult::Proved: {
            check(r.proof);
            if (r.proof.conclusion() != to_approx(h, opt.n))
                throw std::logic_error("proved the wrong goal");
            if (!out_path.empty()) write_proof(r.proof, out_path);
            emit({{"verdict", "proved"},
                  {"n", opt.n},
                  {"goal", print(to_approx(h, opt.n))},
                  {"proof", proof_summary(r.proof)}},
                 format);
            return kOk;
        }
        case ProveResult::Refuted:
            emit({{"verdict", "refuted"},
                  {"n", opt.n},
                  {"countermodel", valuation_json(r.countermodel)}},
                 format);
            return kReject;
        case ProveResult::Exhausted:
            emit({{"verdict", "exhausted"},
                  {"max_k_tried", r.search.max_k_tried},
                  {"max_depth_tried", r.search.max_depth_tried},
                  {"lp_calls", r.search.lp_calls},
                  {"lp_budget_exhausted", r.search.budget_exhausted}},
                 format);
            return kExhausted;
    }
    return kInputError;
}

int cmd_check(const std::string& path, bool allow_cut, const std::string& format) {
    json j;
    Proof p;
    try {
        j = json::parse(slurp(path));
        p = proof_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "malformed proof file: " << e.what() << std::endl;
        return kInputError;
    }
    try {
        check(p, allow_cut);
    } catch (const CheckError& e) {
        emit({{"verdict", "rejected"}, {"node", e.node}, {"reason", e.what()}}, format);
        return kReject;
    }
    emit({{"verdict", "accepted"}, {"proof", proof_summary(p)}}, format);
    return kOk;
}

int cmd_countermodel(const InputOpt& in, int trials, unsigned long seed, int max_size,
                     const std::string& format) {
    Hypersequent h = parse_hypersequent(in.get());
    if (!has_quantifier(h)) {
        auto v = sample_refute(h, trials, seed);
        if (v) {
            emit({{"verdict", "refuted"},
                  {"countermodel", valuation_json(*v)},
                  {"value", to_string(eval_hypersequent(*v, h))}},
                 format);
            return kReject;
        }
        emit({{"verdict", "not-found"}, {"trials", trials}}, format);
        return kExhausted;
    }
    std::vector<Rational> grid{Rational(0), Rational(1, 2), Rational(1)};
    auto sc = refute_on_structures(h, max_size, grid);
    if (sc) {
        emit({{"verdict", "refuted"}, {"structure", structure_json(*sc)}}, format);
        return kReject;
    }
    emit({{"verdict", "not-found"}, {"max_size", max_size}}, format);
    return kExhausted;
}

const char* step_name(StepKind k) {
    switch (k) {
        case StepKind::RightImp: return "right-imp";
        case StepKind::LeftImp: return "left-imp";
        case StepKind::RightExists: return "right-exists";
        case StepKind::LeftExists: return "left-exists";
    }
    return "?";
}

const char* derive_name(Derive d) {
    switch (d) {
        case Derive::Root: return "root";
        case Derive::SelfLoop: return "self-loop";
        case Derive::Applied: return "applied";
        case Derive::AppliedLeft: return "applied-left";
        case Derive::AppliedRight: return "applied-right";
    }
    return "?";
}

int cmd_skolemize(const InputOpt& in, const std::string& format) {
    Hypersequent h = parse_hypersequent(in.get());
    Signature sig;
    SkolemTree t = build_tree(h, sig);
    auto sync = check_sync(t);

    if (format == "json") {
        json levels = json::array();
        for (auto& lv : t.levels) {
            json nodes = json::array();
            for (auto& nd : lv)
                nodes.push_back({{"content", print(nd.hyp())},
                                 {"parent", nd.parent},
                                 {"edge", derive_name(nd.how)},
                                 {"positions", nd.pos}});
            levels.push_back(nodes);
        }
        json steps = json::array();
        for (auto& st : t.steps) {
            json js = {{"kind", step_name(st.kind)}, {"position", st.pos}};
            if (st.kind == StepKind::RightExists) js["variable"] = st.var;
            if (st.kind == StepKind::LeftExists) {
                js["skolem_fn"] = st.skfn;
                js["skolem_args"] = st.skargs;
            }
            steps.push_back(js);
        }
        std::cout << json{{"variables", t.xbar},
                          {"levels", levels},
                          {"steps", steps},
                          {"sync", sync.ok}}
                         .dump(2)
                  << std::endl;
        return sync.ok ? kOk : kReject;
    }

    std::cout << "variables:";
    for (auto& v : t.xbar) std::cout << " " << v;
    std::cout << std::endl;
    for (size_t lv = 0; lv < t.levels.size(); ++lv) {
        if (lv > 0) {
            const SkolemStep& st = t.steps[lv - 1];
            std::cout << "step " << lv << ": " << step_name(st.kind) << " at position "
                      << st.pos;
            if (st.kind == StepKind::RightExists) std::cout << ", variable " << st.var;
            if (st.kind == StepKind::LeftExists) {
                std::cout << ", skolem " << st.skfn << "(";
                for (size_t i = 0; i < st.skargs.size(); ++i)
                    std::cout << (i ? "," : "") << st.skargs[i];
                std::cout << ")";
            }
            std::cout << std::endl;
        }
        std::cout << "level " << lv << ":" << std::endl;
        for (size_t ix = 0; ix < t.levels[lv].size(); ++ix) {
            const SkolemNode& nd = t.levels[lv][ix];
            std::cout << "  node " << ix << " [" << derive_name(nd.how);
            if (nd.how != Derive::Root) std::cout << " of " << nd.parent;
            std::cout << "]: " << print(nd.hyp()) << std::endl;
        }
    }
    std::cout << "sync: " << (sync.ok ? "ok" : sync.message) << std::endl;
    return sync.ok ? kOk : kReject;
}

int cmd_eval(const InputOpt& in, const std::string& model_path, const std::string& format) {
    Hypersequent h = parse_hypersequent(in.get());
    Model m = load_model(model_path);
    Rational v;
    if (m.structural) {
        v = eval_hypersequent(m.str, m.env, h);
    } else {
        if (has_quantifier(h))
            throw std::runtime_error("quantified input needs a structure model (domain = ...)");
        v = eval_hypersequent(m.val, h);
    }
    emit({{"value", to_string(v)}, {"verdict", v <= Rational(0) ? "holds" : "fails"}}, format);
    return v <= Rational(0) ? kOk : kReject;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate prover, exact decider, and proof checker for "
                 "Lukasiewicz hypersequents"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    int workers = 1;
    app.add_option("--workers", workers, "worker threads (reserved, currently advisory)")
        ->check(CLI::PositiveNumber);

    InputOpt in;
    std::string out_path, proof_path, model_path;
    ProveOptions popt;
    bool allow_cut = false, trace = false;
    int trials = 10000, max_size = 2;
    unsigned long seed = 0;

    auto* decide = app.add_subcommand("decide", "decide a quantifier-free hypersequent");
    add_input(decide, in);
    decide->add_option("-o,--out", out_path, "write the proof here when valid");

    auto* prove = app.add_subcommand("prove", "prove the 1/n-approximation");
    add_input(prove, in);
    prove->add_option("--n", popt.n, "approximation denominator")->required()
        ->check(CLI::PositiveNumber);
    prove->add_option("--max-k", popt.max_k, "witness count ceiling")->capture_default_str();
    prove->add_option("--max-term-depth", popt.max_depth, "ground term depth ceiling")
        ->capture_default_str();
    prove->add_option("--lp-budget", popt.lp_budget, "validity-check call budget")
        ->capture_default_str();
    prove->add_flag("--trace", trace, "log search and reconstruction steps");
    prove->add_option("-o,--out", out_path, "write the proof here");

    auto* chk = app.add_subcommand("check", "check a proof file");
    chk->add_option("proof", proof_path, "proof file (json)")->required();
    chk->add_flag("--allow-cut", allow_cut, "accept proofs that use cut");

    auto* cm = app.add_subcommand("countermodel", "search for a countermodel");
    add_input(cm, in);
    cm->add_option("--trials", trials, "random valuations to try")->capture_default_str();
    cm->add_option("--seed", seed, "random seed")->capture_default_str();
    cm->add_option("--max-size", max_size, "largest structure domain")->capture_default_str();

    auto* sk = app.add_subcommand("skolemize", "print the quantifier-removal tree");
    add_input(sk, in);

    auto* ev = app.add_subcommand("eval", "evaluate under a model file");
    add_input(ev, in);
    ev->add_option("--model", model_path, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (trace)
            popt.trace = [](const std::string& m) { std::cerr << "# " << m << std::endl; };
        if (decide->parsed()) return cmd_decide(in, out_path, format);
        if (prove->parsed()) return cmd_prove(in, popt, out_path, format);
        if (chk->parsed()) return cmd_check(proof_path, allow_cut, format);
        if (cm->parsed()) return cmd_countermodel(in, trials, seed, max_size, format);
        if (sk->parsed()) return cmd_skolemize(in, format);
        if (ev->parsed()) return cmd_eval(in, model_path, format);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << std::endl;
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kInputError;
    }
    return kInputError;
}
