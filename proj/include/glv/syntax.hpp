#pragma once

// Core syntax: terms, formulas, sequents, hypersequents as canonical
// multiset-based values, plus substitution and the 1/n approximation
// transform. Connectives are kept in core form (bot, ->, exists, atoms);
// everything else is sugar expanded by the parser.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace glv {

// ---------------------------------------------------------------- terms

struct Term {
    bool is_var = false;
    std::string name;
    std::vector<Term> args;  // empty for variables and constants

    static Term var(std::string n) {
        Term t;
        t.is_var = true;
        t.name = std::move(n);
        return t;
    }
    static Term app(std::string n, std::vector<Term> as = {}) {
        Term t;
        t.is_var = false;
        t.name = std::move(n);
        t.args = std::move(as);
        return t;
    }
};

inline int compare(const Term& a, const Term& b) {
    if (a.is_var != b.is_var) return a.is_var ? -1 : 1;
    if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i])) return c;
    return 0;
}
inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

inline std::string print(const Term& t) {
    std::string s = t.name;
    if (!t.args.empty()) {
        s += '(';
        for (size_t i = 0; i < t.args.size(); ++i) {
            if (i) s += ',';
            s += print(t.args[i]);
        }
        s += ')';
    }
    return s;
}

inline void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_var) out.insert(t.name);
    for (auto& a : t.args) collect_vars(a, out);
}

inline bool contains_subterm(const Term& t, const Term& sub) {
    if (t == sub) return true;
    for (auto& a : t.args)
        if (contains_subterm(a, sub)) return true;
    return false;
}

inline bool is_proper_subterm(const Term& sub, const Term& t) {
    if (sub == t) return false;
    return contains_subterm(t, sub);
}

inline Term replace_subterm(const Term& t, const Term& from, const Term& to) {
    if (t == from) return to;
    Term r = t;
    for (auto& a : r.args) a = replace_subterm(a, from, to);
    return r;
}

inline Term subst_term(const Term& t, const std::map<std::string, Term>& m) {
    if (t.is_var) {
        auto it = m.find(t.name);
        return it == m.end() ? t : it->second;
    }
    Term r = t;
    for (auto& a : r.args) a = subst_term(a, m);
    return r;
}

// ------------------------------------------------------------- formulas

enum class FKind { Bot, Atom, Imp, Exists };

struct Formula {
    FKind kind = FKind::Bot;
    std::string name;            // Atom: predicate symbol; Exists: bound variable
    std::vector<Term> args;      // Atom only
    std::vector<Formula> kids;   // Imp: {lhs, rhs}; Exists: {body}
};

inline Formula f_bot() { return Formula{}; }
inline Formula f_atom(std::string p, std::vector<Term> as = {}) {
    Formula f;
    f.kind = FKind::Atom;
    f.name = std::move(p);
    f.args = std::move(as);
    return f;
}
inline Formula f_imp(Formula a, Formula b) {
    Formula f;
    f.kind = FKind::Imp;
    f.kids = {std::move(a), std::move(b)};
    return f;
}
inline Formula f_exists(std::string x, Formula body) {
    Formula f;
    f.kind = FKind::Exists;
    f.name = std::move(x);
    f.kids = {std::move(body)};
    return f;
}

// Derived connectives, expanded per their definitions from bot and ->.
inline Formula f_neg(Formula a) { return f_imp(std::move(a), f_bot()); }
inline Formula f_top() { return f_neg(f_bot()); }
inline Formula f_oplus(Formula a, Formula b) { return f_imp(f_neg(std::move(a)), std::move(b)); }
inline Formula f_odot(Formula a, Formula b) {
    return f_neg(f_oplus(f_neg(std::move(a)), f_neg(std::move(b))));
}
inline Formula f_or(Formula a, Formula b) {
    Formula ab = f_imp(a, b);
    return f_imp(std::move(ab), std::move(b));
}
inline Formula f_and(Formula a, Formula b) {
    return f_neg(f_or(f_neg(std::move(a)), f_neg(std::move(b))));
}
inline Formula f_nmul(long n, const Formula& a) {
    Formula r = f_bot();  // 0.A := bot
    for (long i = 0; i < n; ++i) r = f_oplus(a, std::move(r));
    return r;
}
inline Formula f_pow(const Formula& a, long n) {
    Formula r = f_top();  // A^0 := top
    for (long i = 0; i < n; ++i) r = f_odot(a, std::move(r));
    return r;
}
inline Formula f_forall(std::string x, Formula body) {
    return f_neg(f_exists(std::move(x), f_neg(std::move(body))));
}

inline int compare(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
    if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i])) return c;
    if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size() ? -1 : 1;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (int c = compare(a.kids[i], b.kids[i])) return c;
    return 0;
}
inline bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
inline bool operator!=(const Formula& a, const Formula& b) { return compare(a, b) != 0; }
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

inline bool is_atomic(const Formula& f) { return f.kind == FKind::Bot || f.kind == FKind::Atom; }

inline std::string print(const Formula& f) {
    switch (f.kind) {
        case FKind::Bot:
            return "bot";
        case FKind::Atom: {
            std::string s = f.name;
            if (!f.args.empty()) {
                s += '(';
                for (size_t i = 0; i < f.args.size(); ++i) {
                    if (i) s += ',';
                    s += print(f.args[i]);
                }
                s += ')';
            }
            return s;
        }
        case FKind::Imp: {
            const Formula& l = f.kids[0];
            std::string ls = print(l);
            if (l.kind == FKind::Imp || l.kind == FKind::Exists) ls = "(" + ls + ")";
            return ls + " -> " + print(f.kids[1]);
        }
        case FKind::Exists:
            return "exists " + f.name + ". " + print(f.kids[0]);
    }
    return "?";
}

inline void free_vars(const Formula& f, std::set<std::string>& out,
                      std::set<std::string>& bound) {
    switch (f.kind) {
        case FKind::Bot:
            break;
        case FKind::Atom: {
            std::set<std::string> vs;
            for (auto& t : f.args) collect_vars(t, vs);
            for (auto& v : vs)
                if (!bound.count(v)) out.insert(v);
            break;
        }
        case FKind::Imp:
            free_vars(f.kids[0], out, bound);
            free_vars(f.kids[1], out, bound);
            break;
        case FKind::Exists: {
            bool was = bound.count(f.name) > 0;
            bound.insert(f.name);
            free_vars(f.kids[0], out, bound);
            if (!was) bound.erase(f.name);
            break;
        }
    }
}

inline std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> out, bound;
    free_vars(f, out, bound);
    return out;
}

inline bool has_quantifier(const Formula& f) {
    if (f.kind == FKind::Exists) return true;
    for (auto& k : f.kids)
        if (has_quantifier(k)) return true;
    return false;
}

inline bool has_implication(const Formula& f) {
    if (f.kind == FKind::Imp) return true;
    for (auto& k : f.kids)
        if (has_implication(k)) return true;
    return false;
}

// A free-standing (not bound-variable shadowed) occurrence of `sub` somewhere
// in the formula's terms.
inline bool contains_subterm(const Formula& f, const Term& sub) {
    if (f.kind == FKind::Atom) {
        for (auto& t : f.args)
            if (contains_subterm(t, sub)) return true;
    }
    for (auto& k : f.kids)
        if (contains_subterm(k, sub)) return true;
    return false;
}

inline Formula replace_subterm(const Formula& f, const Term& from, const Term& to) {
    Formula r = f;
    if (r.kind == FKind::Atom)
        for (auto& t : r.args) t = replace_subterm(t, from, to);
    for (auto& k : r.kids) k = replace_subterm(k, from, to);
    return r;
}

// Capture-avoiding simultaneous substitution of free variables.
inline Formula substitute(const Formula& f, const std::map<std::string, Term>& m) {
    switch (f.kind) {
        case FKind::Bot:
            return f;
        case FKind::Atom: {
            Formula r = f;
            for (auto& t : r.args) t = subst_term(t, m);
            return r;
        }
        case FKind::Imp:
            return f_imp(substitute(f.kids[0], m), substitute(f.kids[1], m));
        case FKind::Exists: {
            std::map<std::string, Term> inner = m;
            inner.erase(f.name);
            if (inner.empty()) return f;
            // Rename the bound variable when some replacement term would be
            // captured by it.
            bool capture = false;
            std::set<std::string> body_free = free_vars(f.kids[0]);
            for (auto& [v, t] : inner) {
                if (!body_free.count(v)) continue;
                std::set<std::string> tv;
                collect_vars(t, tv);
                if (tv.count(f.name)) capture = true;
            }
            std::string bv = f.name;
            Formula body = f.kids[0];
            if (capture) {
                std::set<std::string> avoid = body_free;
                for (auto& [v, t] : inner) collect_vars(t, avoid);
                std::string fresh = bv;
                do {
                    fresh += '\'';
                } while (avoid.count(fresh));
                std::map<std::string, Term> ren{{bv, Term::var(fresh)}};
                body = substitute(body, ren);
                bv = fresh;
            }
            return f_exists(bv, substitute(body, inner));
        }
    }
    return f;
}

// ------------------------------------------------- sequents, hypersequents

// Finite multisets of formulas; kept sorted for canonical equality.
using FormulaMultiset = std::vector<Formula>;

inline void normalize(FormulaMultiset& ms) { std::sort(ms.begin(), ms.end()); }

inline bool erase_one(FormulaMultiset& ms, const Formula& f) {
    auto it = std::find(ms.begin(), ms.end(), f);
    if (it == ms.end()) return false;
    ms.erase(it);
    return true;
}

inline size_t count_of(const FormulaMultiset& ms, const Formula& f) {
    return std::count(ms.begin(), ms.end(), f);
}

struct Sequent {
    FormulaMultiset ante, succ;

    Sequent() = default;
    Sequent(FormulaMultiset a, FormulaMultiset s) : ante(std::move(a)), succ(std::move(s)) {
        normalize(ante);
        normalize(succ);
    }
};

inline int compare(const Sequent& a, const Sequent& b) {
    if (a.ante.size() != b.ante.size()) return a.ante.size() < b.ante.size() ? -1 : 1;
    if (a.succ.size() != b.succ.size()) return a.succ.size() < b.succ.size() ? -1 : 1;
    for (size_t i = 0; i < a.ante.size(); ++i)
        if (int c = compare(a.ante[i], b.ante[i])) return c;
    for (size_t i = 0; i < a.succ.size(); ++i)
        if (int c = compare(a.succ[i], b.succ[i])) return c;
    return 0;
}
inline bool operator==(const Sequent& a, const Sequent& b) { return compare(a, b) == 0; }
inline bool operator!=(const Sequent& a, const Sequent& b) { return compare(a, b) != 0; }
inline bool operator<(const Sequent& a, const Sequent& b) { return compare(a, b) < 0; }

inline std::string print(const Sequent& s) {
    std::string out;
    for (size_t i = 0; i < s.ante.size(); ++i) {
        if (i) out += ", ";
        out += print(s.ante[i]);
    }
    out += s.ante.empty() ? "=>" : " =>";
    for (size_t i = 0; i < s.succ.size(); ++i) {
        out += i ? ", " : " ";
        out += print(s.succ[i]);
    }
    return out;
}

struct Hypersequent {
    std::vector<Sequent> comps;  // sorted multiset of sequents

    Hypersequent() = default;
    explicit Hypersequent(std::vector<Sequent> cs) : comps(std::move(cs)) {
        std::sort(comps.begin(), comps.end());
    }
};

inline int compare(const Hypersequent& a, const Hypersequent& b) {
    if (a.comps.size() != b.comps.size()) return a.comps.size() < b.comps.size() ? -1 : 1;
    for (size_t i = 0; i < a.comps.size(); ++i)
        if (int c = compare(a.comps[i], b.comps[i])) return c;
    return 0;
}
inline bool operator==(const Hypersequent& a, const Hypersequent& b) { return compare(a, b) == 0; }
inline bool operator!=(const Hypersequent& a, const Hypersequent& b) { return compare(a, b) != 0; }
inline bool operator<(const Hypersequent& a, const Hypersequent& b) { return compare(a, b) < 0; }

inline std::string print(const Hypersequent& h) {
    std::string out;
    for (size_t i = 0; i < h.comps.size(); ++i) {
        if (i) out += " | ";
        out += print(h.comps[i]);
    }
    return out;
}

inline bool erase_one(std::vector<Sequent>& cs, const Sequent& s) {
    auto it = std::find(cs.begin(), cs.end(), s);
    if (it == cs.end()) return false;
    cs.erase(it);
    return true;
}

// Multiset union of components.
inline Hypersequent merge(const Hypersequent& a, const Hypersequent& b) {
    std::vector<Sequent> cs = a.comps;
    cs.insert(cs.end(), b.comps.begin(), b.comps.end());
    return Hypersequent(std::move(cs));
}

inline Hypersequent with_component(const Hypersequent& h, const Sequent& s) {
    std::vector<Sequent> cs = h.comps;
    cs.push_back(s);
    return Hypersequent(std::move(cs));
}

inline Sequent substitute(const Sequent& s, const std::map<std::string, Term>& m) {
    FormulaMultiset a, c;
    for (auto& f : s.ante) a.push_back(substitute(f, m));
    for (auto& f : s.succ) c.push_back(substitute(f, m));
    return Sequent(std::move(a), std::move(c));
}

inline Hypersequent substitute(const Hypersequent& h, const std::map<std::string, Term>& m) {
    std::vector<Sequent> cs;
    for (auto& s : h.comps) cs.push_back(substitute(s, m));
    return Hypersequent(std::move(cs));
}

inline std::set<std::string> free_vars(const Sequent& s) {
    std::set<std::string> out, bound;
    for (auto& f : s.ante) free_vars(f, out, bound);
    for (auto& f : s.succ) free_vars(f, out, bound);
    return out;
}

inline std::set<std::string> free_vars(const Hypersequent& h) {
    std::set<std::string> out;
    for (auto& s : h.comps) {
        auto fv = free_vars(s);
        out.insert(fv.begin(), fv.end());
    }
    return out;
}

inline bool has_quantifier(const Hypersequent& h) {
    for (auto& s : h.comps) {
        for (auto& f : s.ante)
            if (has_quantifier(f)) return true;
        for (auto& f : s.succ)
            if (has_quantifier(f)) return true;
    }
    return false;
}

inline bool is_atomic(const Sequent& s) {
    for (auto& f : s.ante)
        if (!is_atomic(f)) return false;
    for (auto& f : s.succ)
        if (!is_atomic(f)) return false;
    return true;
}

inline bool is_atomic(const Hypersequent& h) {
    for (auto& s : h.comps)
        if (!is_atomic(s)) return false;
    return true;
}

// The sequent Gamma =>_{1/n} Delta, i.e. bot, n*Gamma => n*Delta.
inline Sequent to_approx(const Sequent& s, long n) {
    if (n < 1) throw std::invalid_argument("to_approx: n must be >= 1");
    FormulaMultiset a, c;
    a.push_back(f_bot());
    for (auto& f : s.ante)
        for (long i = 0; i < n; ++i) a.push_back(f);
    for (auto& f : s.succ)
        for (long i = 0; i < n; ++i) c.push_back(f);
    return Sequent(std::move(a), std::move(c));
}

inline Hypersequent to_approx(const Hypersequent& h, long n) {
    std::vector<Sequent> cs;
    for (auto& s : h.comps) cs.push_back(to_approx(s, n));
    return Hypersequent(std::move(cs));
}

// ------------------------------------------------------------- signature

// Function/predicate arities plus the fresh-symbol counter. User identifiers
// may not contain '#', so generated names never collide.
struct Signature {
    std::map<std::string, int> funcs;
    std::map<std::string, int> preds;
    long fresh_counter = 0;

    void add_func(const std::string& n, int arity) {
        auto [it, fresh] = funcs.emplace(n, arity);
        if (!fresh && it->second != arity)
            throw std::invalid_argument("arity conflict for function symbol '" + n + "'");
    }
    void add_pred(const std::string& n, int arity) {
        auto [it, fresh] = preds.emplace(n, arity);
        if (!fresh && it->second != arity)
            throw std::invalid_argument("arity conflict for predicate symbol '" + n + "'");
    }

    std::string fresh_var() { return "x#" + std::to_string(++fresh_counter); }
    std::string fresh_func(int arity) {
        std::string n = "sk#" + std::to_string(++fresh_counter);
        add_func(n, arity);
        return n;
    }

    // The Herbrand universe needs at least one ground term.
    std::string ensure_constant() {
        for (auto& [n, a] : funcs)
            if (a == 0) return n;
        add_func("c0", 0);
        return "c0";
    }

    void scan(const Term& t) {
        if (!t.is_var) add_func(t.name, static_cast<int>(t.args.size()));
        for (auto& a : t.args) scan(a);
    }
    void scan(const Formula& f) {
        if (f.kind == FKind::Atom) {
            add_pred(f.name, static_cast<int>(f.args.size()));
            for (auto& t : f.args) scan(t);
        }
        for (auto& k : f.kids) scan(k);
    }
    void scan(const Hypersequent& h) {
        for (auto& s : h.comps) {
            for (auto& f : s.ante) scan(f);
            for (auto& f : s.succ) scan(f);
        }
    }
};

}  // namespace glv
