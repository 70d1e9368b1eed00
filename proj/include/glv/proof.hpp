#pragma once

// Proof objects and the independent checker for the hypersequent calculus.
//
// A proof is a DAG of nodes; each node records its conclusion, the rule
// applied, the rule's instantiation data, and premise node ids. The data is
// rich enough that the checker can recompute the expected premises of every
// node from its conclusion alone and compare them against the premises
// actually supplied, so checking never trusts the producer.
//
// Rules (conclusions shown up to multiset equality, G is the side context):
//
//   id         |- A => A
//   empty      |- =>
//   bot_left   |- bot => A
//   ew         G            |- G | S
//   ec         G | S | S    |- G | S
//   split      G | G0,G1 => D0,D1          |- G | G0 => D0 | G1 => D1
//   mix        G | G0 => D0 , G | G1 => D1 |- G | G0,G1 => D0,D1
//   wl         G | Gm => D                 |- G | A,Gm => D
//   imp_left   G | Gm,B => A,D | Gm => D   |- G | Gm,A->B => D
//   imp_right  G | Gm,A => B,D , G | Gm => D |- G | Gm => A->B,D
//   cut        G | Gm,A => A,D             |- G | Gm => D
//   exists_left  G | Gm,A[c/x] => D  |- G | Gm,exists x.A => D
//                (eigenvariable c not free in the conclusion)
//   exists_right G | Gm => A[t/x],D  |- G | Gm => exists x.A,D

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "glv/parser.hpp"
#include "glv/rational.hpp"
#include "glv/syntax.hpp"

namespace glv {

enum class Rule {
    Id,
    EmptySeq,
    BotLeft,
    EW,
    EC,
    Split,
    Mix,
    WL,
    ImpLeft,
    ImpRight,
    Cut,
    ExistsLeft,
    ExistsRight,
};

inline const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Id: return "id";
        case Rule::EmptySeq: return "empty";
        case Rule::BotLeft: return "bot_left";
        case Rule::EW: return "ew";
        case Rule::EC: return "ec";
        case Rule::Split: return "split";
        case Rule::Mix: return "mix";
        case Rule::WL: return "wl";
        case Rule::ImpLeft: return "imp_left";
        case Rule::ImpRight: return "imp_right";
        case Rule::Cut: return "cut";
        case Rule::ExistsLeft: return "exists_left";
        case Rule::ExistsRight: return "exists_right";
    }
    return "?";
}

// Instantiation data; which fields are meaningful depends on the rule.
struct RuleData {
    Formula A, B;                     // principal formulas
    FormulaMultiset g0, d0, g1, d1;   // active component contexts
    Sequent s;                        // ew / ec component
    Term t;                           // exists_right witness / exists_left eigenvariable
    std::string x;                    // bound variable
};

struct ProofNode {
    Hypersequent concl;
    Rule rule = Rule::Id;
    RuleData data;
    std::vector<size_t> premises;
};

struct Proof {
    std::vector<ProofNode> nodes;
    size_t root = 0;

    const Hypersequent& conclusion() const { return nodes.at(root).concl; }
};

struct CheckError : std::runtime_error {
    size_t node;
    CheckError(size_t n, const std::string& msg)
        : std::runtime_error("proof node " + std::to_string(n) + ": " + msg), node(n) {}
};

namespace detail {

inline FormulaMultiset cat(FormulaMultiset a, const FormulaMultiset& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline FormulaMultiset cat(FormulaMultiset a, const Formula& f) {
    a.push_back(f);
    return a;
}

// Removes one copy of `s` from the conclusion, yielding the side context.
inline Hypersequent context_minus(size_t id, const Hypersequent& concl, const Sequent& s) {
    std::vector<Sequent> cs = concl.comps;
    if (!erase_one(cs, s))
        throw CheckError(id, "conclusion lacks active component " + print(s));
    return Hypersequent(std::move(cs));
}

}  // namespace detail

inline size_t count_of_component(const Hypersequent& h, const Sequent& s) {
    size_t n = 0;
    for (auto& c : h.comps)
        if (c == s) ++n;
    return n;
}

// Expected premises of a node, computed from conclusion and rule data only.
inline std::vector<Hypersequent> premises_of(size_t id, const Hypersequent& concl, Rule rule,
                                             const RuleData& d) {
    using detail::cat;
    using detail::context_minus;
    switch (rule) {
        case Rule::Id: {
            if (concl != Hypersequent({Sequent({d.A}, {d.A})}))
                throw CheckError(id, "id conclusion must be the single component A => A");
            return {};
        }
        case Rule::EmptySeq: {
            if (concl != Hypersequent({Sequent({}, {})}))
                throw CheckError(id, "empty-sequent conclusion must be =>");
            return {};
        }
        case Rule::BotLeft: {
            if (concl != Hypersequent({Sequent({f_bot()}, {d.A})}))
                throw CheckError(id, "bot_left conclusion must be bot => A");
            return {};
        }
        case Rule::EW:
            return {context_minus(id, concl, d.s)};
        case Rule::EC: {
            if (count_of_component(concl, d.s) < 1)
                throw CheckError(id, "ec conclusion lacks the contracted component");
            return {with_component(concl, d.s)};
        }
        case Rule::Split: {
            Hypersequent g = context_minus(
                id, context_minus(id, concl, Sequent(d.g0, d.d0)), Sequent(d.g1, d.d1));
            return {with_component(g, Sequent(cat(d.g0, d.g1), cat(d.d0, d.d1)))};
        }
        case Rule::Mix: {
            Hypersequent g =
                context_minus(id, concl, Sequent(cat(d.g0, d.g1), cat(d.d0, d.d1)));
            return {with_component(g, Sequent(d.g0, d.d0)),
                    with_component(g, Sequent(d.g1, d.d1))};
        }
        case Rule::WL: {
            Hypersequent g = context_minus(id, concl, Sequent(cat(d.g0, d.A), d.d0));
            return {with_component(g, Sequent(d.g0, d.d0))};
        }
        case Rule::ImpLeft: {
            Formula imp = f_imp(d.A, d.B);
            Hypersequent g = context_minus(id, concl, Sequent(cat(d.g0, imp), d.d0));
            Hypersequent p = with_component(g, Sequent(cat(d.g0, d.B), cat(d.d0, d.A)));
            return {with_component(p, Sequent(d.g0, d.d0))};
        }
        case Rule::ImpRight: {
            Formula imp = f_imp(d.A, d.B);
            Hypersequent g = context_minus(id, concl, Sequent(d.g0, cat(d.d0, imp)));
            return {with_component(g, Sequent(cat(d.g0, d.A), cat(d.d0, d.B))),
                    with_component(g, Sequent(d.g0, d.d0))};
        }
        case Rule::Cut: {
            Hypersequent g = context_minus(id, concl, Sequent(d.g0, d.d0));
            return {with_component(g, Sequent(cat(d.g0, d.A), cat(d.d0, d.A)))};
        }
        case Rule::ExistsLeft: {
            if (!d.t.is_var)
                throw CheckError(id, "exists_left eigenvariable must be a variable");
            Formula ex = f_exists(d.x, d.A);
            Hypersequent g = context_minus(id, concl, Sequent(cat(d.g0, ex), d.d0));
            if (free_vars(concl).count(d.t.name))
                throw CheckError(id, "eigenvariable " + d.t.name + " is free in the conclusion");
            std::map<std::string, Term> sub{{d.x, d.t}};
            return {with_component(g, Sequent(cat(d.g0, substitute(d.A, sub)), d.d0))};
        }
        case Rule::ExistsRight: {
            Formula ex = f_exists(d.x, d.A);
            Hypersequent g = context_minus(id, concl, Sequent(d.g0, cat(d.d0, ex)));
            std::map<std::string, Term> sub{{d.x, d.t}};
            return {with_component(g, Sequent(d.g0, cat(d.d0, substitute(d.A, sub))))};
        }
    }
    throw CheckError(id, "unknown rule");
}

// Full structural check of the proof DAG. Throws CheckError on the first
// violation. Cut is rejected unless allow_cut is set.
inline void check(const Proof& p, bool allow_cut = false) {
    if (p.root >= p.nodes.size()) throw CheckError(p.root, "root out of range");
    // Acyclicity first, so node storage order does not matter. Iterative
    // three-color depth-first search over premise edges.
    {
        std::vector<int> color(p.nodes.size(), 0);
        for (size_t s = 0; s < p.nodes.size(); ++s) {
            if (color[s]) continue;
            std::vector<std::pair<size_t, size_t>> stack{{s, 0}};
            color[s] = 1;
            while (!stack.empty()) {
                auto& [i, k] = stack.back();
                if (k == p.nodes[i].premises.size()) {
                    color[i] = 2;
                    stack.pop_back();
                    continue;
                }
                size_t q = p.nodes[i].premises[k++];
                if (q >= p.nodes.size())
                    throw CheckError(i, "premise id " + std::to_string(q) + " out of range");
                if (color[q] == 1) throw CheckError(i, "premise cycle through node " +
                                                           std::to_string(q));
                if (color[q] == 0) {
                    color[q] = 1;
                    stack.emplace_back(q, 0);
                }
            }
        }
    }
    for (size_t i = 0; i < p.nodes.size(); ++i) {
        const ProofNode& n = p.nodes[i];
        if (n.rule == Rule::Cut && !allow_cut)
            throw CheckError(i, "cut is not permitted here");
        auto want = premises_of(i, n.concl, n.rule, n.data);
        if (want.size() != n.premises.size())
            throw CheckError(i, std::string(rule_name(n.rule)) + " expects " +
                                    std::to_string(want.size()) + " premises, got " +
                                    std::to_string(n.premises.size()));
        for (size_t k = 0; k < want.size(); ++k) {
            size_t q = n.premises[k];
            if (p.nodes[q].concl != want[k])
                throw CheckError(i, std::string("premise ") + std::to_string(k) +
                                        " mismatch: expected [" + print(want[k]) +
                                        "], premise node proves [" + print(p.nodes[q].concl) +
                                        "]");
        }
    }
}

inline bool uses_cut(const Proof& p) {
    for (auto& n : p.nodes)
        if (n.rule == Rule::Cut) return true;
    return false;
}

// ------------------------------------------------------------ construction

// Appends nodes with structural de-duplication, so repeated subproofs are
// shared instead of copied.
class ProofBuilder {
  public:
    size_t add(Hypersequent concl, Rule rule, RuleData data, std::vector<size_t> premises) {
        std::string key = node_key(concl, rule, data, premises);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        size_t id = p_.nodes.size();
        p_.nodes.push_back({std::move(concl), rule, std::move(data), std::move(premises)});
        index_.emplace(std::move(key), id);
        return id;
    }

    const ProofNode& node(size_t id) const { return p_.nodes.at(id); }
    const Hypersequent& concl(size_t id) const { return p_.nodes.at(id).concl; }

    Proof finish(size_t root) && {
        p_.root = root;
        return std::move(p_);
    }

    // Convenience constructors for the common rule shapes.
    size_t id_axiom(const Formula& A) {
        RuleData d;
        d.A = A;
        return add(Hypersequent({Sequent({A}, {A})}), Rule::Id, std::move(d), {});
    }
    size_t empty_axiom() { return add(Hypersequent({Sequent({}, {})}), Rule::EmptySeq, {}, {}); }
    size_t bot_left(const Formula& A) {
        RuleData d;
        d.A = A;
        return add(Hypersequent({Sequent({f_bot()}, {A})}), Rule::BotLeft, std::move(d), {});
    }
    size_t ew(size_t prem, const Sequent& s) {
        RuleData d;
        d.s = s;
        return add(with_component(concl(prem), s), Rule::EW, std::move(d), {prem});
    }
    size_t ec(size_t prem, const Sequent& s) {
        RuleData d;
        d.s = s;
        return add(detail::context_minus(p_.nodes.size(), concl(prem), s), Rule::EC,
                   std::move(d), {prem});
    }

  private:
    static std::string node_key(const Hypersequent& concl, Rule rule, const RuleData& d,
                                const std::vector<size_t>& premises) {
        std::string k = print(concl);
        k += '\x01';
        k += rule_name(rule);
        k += '\x01';
        k += print(d.A) + '\x01' + print(d.B) + '\x01' + print(Sequent(d.g0, d.d0)) + '\x01' +
             print(Sequent(d.g1, d.d1)) + '\x01' + print(d.s) + '\x01' + print(d.t) + '\x01' +
             d.x;
        for (size_t q : premises) k += '\x01' + std::to_string(q);
        return k;
    }

    Proof p_;
    std::map<std::string, size_t> index_;
};

// ----------------------------------------------------------------- stats

struct ProofStats {
    size_t dag_size = 0;          // unique nodes reachable from the root
    BigInt tree_size = 0;         // nodes after expanding all sharing
    size_t depth = 0;             // longest root-to-axiom path, in nodes
    std::map<std::string, size_t> rule_counts;  // over reachable nodes
};

inline ProofStats stats(const Proof& p) {
    std::vector<char> seen(p.nodes.size(), 0);
    std::vector<BigInt> tsize(p.nodes.size());
    std::vector<size_t> dep(p.nodes.size());
    ProofStats st;
    // Nodes are topologically ordered (premises precede conclusions).
    std::function<void(size_t)> visit = [&](size_t i) {
        if (seen[i]) return;
        seen[i] = 1;
        BigInt t = 1;
        size_t d = 1;
        for (size_t q : p.nodes[i].premises) {
            visit(q);
            t += tsize[q];
            d = std::max(d, dep[q] + 1);
        }
        tsize[i] = t;
        dep[i] = d;
        ++st.dag_size;
        ++st.rule_counts[rule_name(p.nodes[i].rule)];
    };
    visit(p.root);
    st.tree_size = tsize[p.root];
    st.depth = dep[p.root];
    return st;
}

// Replaces a ground term (or variable) everywhere in the proof: conclusions
// and every piece of rule data. The caller is responsible for re-checking.
inline Proof replace_term_in_proof(const Proof& p, const Term& from, const Term& to) {
    auto fix_ms = [&](const FormulaMultiset& ms) {
        FormulaMultiset out;
        for (auto& f : ms) out.push_back(replace_subterm(f, from, to));
        normalize(out);
        return out;
    };
    Proof q = p;
    for (auto& n : q.nodes) {
        std::vector<Sequent> cs;
        for (auto& s : n.concl.comps) cs.emplace_back(fix_ms(s.ante), fix_ms(s.succ));
        n.concl = Hypersequent(std::move(cs));
        n.data.A = replace_subterm(n.data.A, from, to);
        n.data.B = replace_subterm(n.data.B, from, to);
        n.data.g0 = fix_ms(n.data.g0);
        n.data.d0 = fix_ms(n.data.d0);
        n.data.g1 = fix_ms(n.data.g1);
        n.data.d1 = fix_ms(n.data.d1);
        n.data.s = Sequent(fix_ms(n.data.s.ante), fix_ms(n.data.s.succ));
        n.data.t = replace_subterm(n.data.t, from, to);
    }
    return q;
}

// ---------------------------------------------------------- serialization

// Proof exchange format "glv-proof/1": a JSON object with the format tag,
// the root id, and a node array; formulas, sequents and terms are stored in
// their printed syntax. Each node also lists its free variable names
// ("vars"), since printed syntax alone cannot distinguish a free variable
// from a constant.

namespace detail {

using VarSet = std::set<std::string>;

inline Parser seeded_parser(const std::string& s, const VarSet& vars) {
    Parser p(s);
    p.bound.assign(vars.begin(), vars.end());
    return p;
}

inline Formula parse_formula_exact(const std::string& s, const VarSet& vars = {}) {
    Parser p = seeded_parser(s, vars);
    Formula f = p.parse_formula();
    p.expect_end();
    return f;
}

inline Term parse_term_exact(const std::string& s, const VarSet& vars = {}) {
    Parser p = seeded_parser(s, vars);
    Term t = p.parse_term();
    p.expect_end();
    return t;
}

inline Sequent parse_sequent_exact(const std::string& s, const VarSet& vars = {}) {
    Parser p = seeded_parser(s, vars);
    Sequent q = p.parse_sequent();
    p.expect_end();
    return q;
}

inline Hypersequent parse_hypersequent_exact(const std::string& s, const VarSet& vars = {}) {
    Parser p = seeded_parser(s, vars);
    Hypersequent h = p.parse_hypersequent();
    p.expect_end();
    return h;
}

inline void node_vars(const ProofNode& n, VarSet& vs) {
    auto add = [&](const std::set<std::string>& s) { vs.insert(s.begin(), s.end()); };
    auto add_ms = [&](const FormulaMultiset& ms) {
        for (auto& f : ms) add(free_vars(f));
    };
    for (auto& c : n.concl.comps) {
        add_ms(c.ante);
        add_ms(c.succ);
    }
    add(free_vars(n.data.A));
    add(free_vars(n.data.B));
    add_ms(n.data.g0);
    add_ms(n.data.d0);
    add_ms(n.data.g1);
    add_ms(n.data.d1);
    add_ms(n.data.s.ante);
    add_ms(n.data.s.succ);
    collect_vars(n.data.t, vs);
    if (!n.data.x.empty()) vs.insert(n.data.x);
}

}  // namespace detail

inline nlohmann::json to_json(const Proof& p) {
    nlohmann::json nodes = nlohmann::json::array();
    for (size_t i = 0; i < p.nodes.size(); ++i) {
        const ProofNode& n = p.nodes[i];
        nlohmann::json d;
        switch (n.rule) {
            case Rule::EmptySeq:
                break;
            case Rule::Id:
            case Rule::BotLeft:
                d["A"] = print(n.data.A);
                break;
            case Rule::EW:
            case Rule::EC:
                d["S"] = print(n.data.s);
                break;
            case Rule::Split:
            case Rule::Mix:
                d["left"] = print(Sequent(n.data.g0, n.data.d0));
                d["right"] = print(Sequent(n.data.g1, n.data.d1));
                break;
            case Rule::WL:
                d["A"] = print(n.data.A);
                d["context"] = print(Sequent(n.data.g0, n.data.d0));
                break;
            case Rule::ImpLeft:
            case Rule::ImpRight:
                d["A"] = print(n.data.A);
                d["B"] = print(n.data.B);
                d["context"] = print(Sequent(n.data.g0, n.data.d0));
                break;
            case Rule::Cut:
                d["A"] = print(n.data.A);
                d["context"] = print(Sequent(n.data.g0, n.data.d0));
                break;
            case Rule::ExistsLeft:
            case Rule::ExistsRight:
                d["A"] = print(n.data.A);
                d["x"] = n.data.x;
                d["t"] = print(n.data.t);
                d["context"] = print(Sequent(n.data.g0, n.data.d0));
                break;
        }
        detail::VarSet vs;
        detail::node_vars(n, vs);
        nodes.push_back({{"id", i},
                         {"conclusion", print(n.concl)},
                         {"rule", rule_name(n.rule)},
                         {"data", std::move(d)},
                         {"vars", vs},
                         {"premises", n.premises}});
    }
    return {{"format", "glv-proof/1"}, {"root", p.root}, {"nodes", std::move(nodes)}};
}

inline Proof proof_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != std::string("glv-proof/1"))
        throw std::invalid_argument("not a glv-proof/1 document");
    Proof p;
    p.root = j.at("root").get<size_t>();
    const auto& nodes = j.at("nodes");
    p.nodes.resize(nodes.size());
    for (const auto& jn : nodes) {
        size_t id = jn.at("id").get<size_t>();
        if (id >= p.nodes.size()) throw std::invalid_argument("node id out of range");
        ProofNode n;
        detail::VarSet vars;
        if (jn.contains("vars"))
            for (auto& v : jn.at("vars")) vars.insert(v.get<std::string>());
        n.concl = detail::parse_hypersequent_exact(jn.at("conclusion").get<std::string>(), vars);
        std::string rn = jn.at("rule").get<std::string>();
        const auto& d = jn.at("data");
        auto ctx = [&](const char* key) {
            Sequent s = detail::parse_sequent_exact(d.at(key).get<std::string>(), vars);
            n.data.g0 = s.ante;
            n.data.d0 = s.succ;
        };
        if (rn == "id" || rn == "bot_left") {
            n.rule = rn == "id" ? Rule::Id : Rule::BotLeft;
            n.data.A = detail::parse_formula_exact(d.at("A").get<std::string>(), vars);
        } else if (rn == "empty") {
            n.rule = Rule::EmptySeq;
        } else if (rn == "ew" || rn == "ec") {
            n.rule = rn == "ew" ? Rule::EW : Rule::EC;
            n.data.s = detail::parse_sequent_exact(d.at("S").get<std::string>(), vars);
        } else if (rn == "split" || rn == "mix") {
            n.rule = rn == "split" ? Rule::Split : Rule::Mix;
            Sequent l = detail::parse_sequent_exact(d.at("left").get<std::string>(), vars);
            Sequent r = detail::parse_sequent_exact(d.at("right").get<std::string>(), vars);
            n.data.g0 = l.ante;
            n.data.d0 = l.succ;
            n.data.g1 = r.ante;
            n.data.d1 = r.succ;
        } else if (rn == "wl") {
            n.rule = Rule::WL;
            n.data.A = detail::parse_formula_exact(d.at("A").get<std::string>(), vars);
            ctx("context");
        } else if (rn == "imp_left" || rn == "imp_right") {
            n.rule = rn == "imp_left" ? Rule::ImpLeft : Rule::ImpRight;
            n.data.A = detail::parse_formula_exact(d.at("A").get<std::string>(), vars);
            n.data.B = detail::parse_formula_exact(d.at("B").get<std::string>(), vars);
            ctx("context");
        } else if (rn == "cut") {
            n.rule = Rule::Cut;
            n.data.A = detail::parse_formula_exact(d.at("A").get<std::string>(), vars);
            ctx("context");
        } else if (rn == "exists_left" || rn == "exists_right") {
            n.rule = rn == "exists_left" ? Rule::ExistsLeft : Rule::ExistsRight;
            n.data.A = detail::parse_formula_exact(d.at("A").get<std::string>(), vars);
            n.data.x = d.at("x").get<std::string>();
            n.data.t = detail::parse_term_exact(d.at("t").get<std::string>(), vars);
            ctx("context");
        } else {
            throw std::invalid_argument("unknown rule name: " + rn);
        }
        n.premises = jn.at("premises").get<std::vector<size_t>>();
        p.nodes[id] = std::move(n);
    }
    return p;
}

}  // namespace glv
