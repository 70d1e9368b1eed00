#pragma once

// Exact-rational semantics. Value conventions follow the inverted reading
// where bot evaluates to 1 and a hypersequent is valid when its value is
// <= 0 under every interpretation.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "glv/rational.hpp"
#include "glv/syntax.hpp"

namespace glv {

// ------------------------------------------------------------ valuations

// Assigns [0,1] rationals to ground atoms (keyed by their printed form).
struct Valuation {
    std::map<std::string, Rational> v;

    Rational at(const Formula& atom) const {
        auto it = v.find(print(atom));
        if (it == v.end()) throw std::invalid_argument("unbound atom: " + print(atom));
        return it->second;
    }
    void set(const Formula& atom, Rational r) {
        if (r < Rational(0) || r > Rational(1))
            throw std::invalid_argument("valuation outside [0,1]");
        v[print(atom)] = std::move(r);
    }
};

inline void collect_atoms(const Formula& f, std::set<Formula>& out) {
    if (f.kind == FKind::Atom) out.insert(f);
    for (auto& k : f.kids) collect_atoms(k, out);
}

inline std::set<Formula> collect_atoms(const Hypersequent& h) {
    std::set<Formula> out;
    for (auto& s : h.comps) {
        for (auto& f : s.ante) collect_atoms(f, out);
        for (auto& f : s.succ) collect_atoms(f, out);
    }
    return out;
}

inline Rational eval_formula(const Valuation& env, const Formula& f) {
    switch (f.kind) {
        case FKind::Bot:
            return Rational(1);
        case FKind::Atom:
            return env.at(f);
        case FKind::Imp: {
            Rational d = eval_formula(env, f.kids[1]) - eval_formula(env, f.kids[0]);
            return d > Rational(0) ? d : Rational(0);
        }
        case FKind::Exists:
            throw std::invalid_argument("valuation semantics is quantifier-free");
    }
    return Rational(0);
}

inline Rational eval_sequent(const Valuation& env, const Sequent& s) {
    Rational val(0);
    for (auto& f : s.succ) val += eval_formula(env, f);
    for (auto& f : s.ante) val -= eval_formula(env, f);
    return val;
}

inline Rational eval_hypersequent(const Valuation& env, const Hypersequent& h) {
    if (h.comps.empty()) throw std::invalid_argument("empty hypersequent");
    Rational best = eval_sequent(env, h.comps[0]);
    for (size_t i = 1; i < h.comps.size(); ++i) {
        Rational v = eval_sequent(env, h.comps[i]);
        if (v < best) best = v;
    }
    return best;
}

// ------------------------------------------------------ finite structures

// A finite [0,1]-structure: total function tables over {0..size-1} and
// relation tables with rational values in [0,1].
struct FiniteStructure {
    int size = 1;
    std::map<std::string, std::vector<int>> funcs;       // name -> table, row-major
    std::map<std::string, std::vector<Rational>> rels;   // name -> table

    size_t index(const std::vector<int>& args) const {
        size_t ix = 0;
        for (int a : args) {
            if (a < 0 || a >= size) throw std::invalid_argument("element out of range");
            ix = ix * static_cast<size_t>(size) + static_cast<size_t>(a);
        }
        return ix;
    }
};

using Assignment = std::map<std::string, int>;

inline int eval_term(const FiniteStructure& m, const Assignment& env, const Term& t) {
    if (t.is_var) {
        auto it = env.find(t.name);
        if (it == env.end()) throw std::invalid_argument("unbound variable: " + t.name);
        return it->second;
    }
    std::vector<int> args;
    args.reserve(t.args.size());
    for (auto& a : t.args) args.push_back(eval_term(m, env, a));
    auto it = m.funcs.find(t.name);
    if (it == m.funcs.end()) throw std::invalid_argument("uninterpreted function: " + t.name);
    return it->second.at(m.index(args));
}

inline Rational eval_formula(const FiniteStructure& m, const Assignment& env, const Formula& f) {
    switch (f.kind) {
        case FKind::Bot:
            return Rational(1);
        case FKind::Atom: {
            std::vector<int> args;
            args.reserve(f.args.size());
            for (auto& t : f.args) args.push_back(eval_term(m, env, t));
            auto it = m.rels.find(f.name);
            if (it == m.rels.end())
                throw std::invalid_argument("uninterpreted predicate: " + f.name);
            return it->second.at(m.index(args));
        }
        case FKind::Imp: {
            Rational d = eval_formula(m, env, f.kids[1]) - eval_formula(m, env, f.kids[0]);
            return d > Rational(0) ? d : Rational(0);
        }
        case FKind::Exists: {
            Assignment inner = env;
            Rational best(2);
            for (int e = 0; e < m.size; ++e) {
                inner[f.name] = e;
                Rational v = eval_formula(m, inner, f.kids[0]);
                if (v < best) best = v;
            }
            return best;
        }
    }
    return Rational(0);
}

inline Rational eval_sequent(const FiniteStructure& m, const Assignment& env, const Sequent& s) {
    Rational val(0);
    for (auto& f : s.succ) val += eval_formula(m, env, f);
    for (auto& f : s.ante) val -= eval_formula(m, env, f);
    return val;
}

inline Rational eval_hypersequent(const FiniteStructure& m, const Assignment& env,
                                  const Hypersequent& h) {
    if (h.comps.empty()) throw std::invalid_argument("empty hypersequent");
    Rational best = eval_sequent(m, env, h.comps[0]);
    for (size_t i = 1; i < h.comps.size(); ++i) {
        Rational v = eval_sequent(m, env, h.comps[i]);
        if (v < best) best = v;
    }
    return best;
}

// A second route for the quantifier case, used as a cross-check: expands the
// existential by explicit substitution of reserved element constants instead
// of threading an assignment.
inline Rational eval_formula_naive(const FiniteStructure& m, const Formula& f) {
    switch (f.kind) {
        case FKind::Bot:
            return Rational(1);
        case FKind::Atom: {
            Assignment none;
            return eval_formula(m, none, f);
        }
        case FKind::Imp: {
            Rational d = eval_formula_naive(m, f.kids[1]) - eval_formula_naive(m, f.kids[0]);
            return d > Rational(0) ? d : Rational(0);
        }
        case FKind::Exists: {
            Rational best(2);
            for (int e = 0; e < m.size; ++e) {
                std::map<std::string, Term> sub{{f.name, Term::app("#e" + std::to_string(e))}};
                FiniteStructure m2 = m;
                m2.funcs["#e" + std::to_string(e)] = {e};
                Rational v = eval_formula_naive(m2, substitute(f.kids[0], sub));
                if (v < best) best = v;
            }
            return best;
        }
    }
    return Rational(0);
}

// ------------------------------------------------------------- refutation

// Random-sampling refuter for quantifier-free ground hypersequents. Samples
// a mix of {0,1} vertex points and rationals with denominator <= 64; any hit
// is re-verified by exact evaluation before being returned.
inline std::optional<Valuation> sample_refute(const Hypersequent& h, int trials,
                                              unsigned long seed) {
    auto atoms = collect_atoms(h);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> den_d(1, 64);
    for (int i = 0; i < trials; ++i) {
        Valuation v;
        for (auto& a : atoms) {
            Rational r;
            if (i == 0 || coin(rng)) {
                // First trial is the all-ones vertex; linear pieces peak at vertices.
                r = Rational(i == 0 ? 1 : coin(rng));
            } else {
                int den = den_d(rng);
                std::uniform_int_distribution<int> num_d(0, den);
                r = Rational(num_d(rng), den);
            }
            v.set(a, r);
        }
        if (eval_hypersequent(v, h) > Rational(0)) return v;
    }
    return std::nullopt;
}

// -------------------------------------------- structure space enumeration

// Enumerates every finite structure over the symbols of `h` with domain size
// up to max_size and relation values drawn from `grid`. Callback returns
// false to stop. Also used by soundness audits.
inline void enumerate_structures(const Hypersequent& h, int max_size,
                                 const std::vector<Rational>& grid,
                                 const std::function<bool(const FiniteStructure&)>& cb) {
    Signature sig;
    sig.scan(h);
    sig.ensure_constant();

    for (int size = 1; size <= max_size; ++size) {
        std::vector<std::pair<std::string, size_t>> fslots;  // function name, table size
        for (auto& [n, ar] : sig.funcs) {
            size_t cells = 1;
            for (int i = 0; i < ar; ++i) cells *= static_cast<size_t>(size);
            fslots.emplace_back(n, cells);
        }
        std::vector<std::pair<std::string, size_t>> rslots;
        for (auto& [n, ar] : sig.preds) {
            size_t cells = 1;
            for (int i = 0; i < ar; ++i) cells *= static_cast<size_t>(size);
            rslots.emplace_back(n, cells);
        }

        FiniteStructure m;
        m.size = size;
        for (auto& [n, cells] : fslots) m.funcs[n] = std::vector<int>(cells, 0);
        for (auto& [n, cells] : rslots) m.rels[n] = std::vector<Rational>(cells, grid.at(0));

        // Odometer over all function entries (base `size`) and relation
        // entries (base |grid|).
        std::function<bool(size_t)> go_rel = [&](size_t slot) -> bool {
            if (slot >= rslots.size()) return cb(m);
            auto& tbl = m.rels[rslots[slot].first];
            std::function<bool(size_t)> fill = [&](size_t cell) -> bool {
                if (cell >= tbl.size()) return go_rel(slot + 1);
                for (auto& g : grid) {
                    tbl[cell] = g;
                    if (!fill(cell + 1)) return false;
                }
                return true;
            };
            return fill(0);
        };
        std::function<bool(size_t)> go_fn = [&](size_t slot) -> bool {
            if (slot >= fslots.size()) return go_rel(0);
            auto& tbl = m.funcs[fslots[slot].first];
            std::function<bool(size_t)> fill = [&](size_t cell) -> bool {
                if (cell >= tbl.size()) return go_fn(slot + 1);
                for (int e = 0; e < size; ++e) {
                    tbl[cell] = e;
                    if (!fill(cell + 1)) return false;
                }
                return true;
            };
            return fill(0);
        };
        if (!go_fn(0)) return;
    }
}

// Exhaustive check over small structures: value <= 0 under every structure of
// size up to max_size (grid-restricted relations) and every assignment of the
// free variables. Returns a witness structure/assignment on failure.
struct StructureCounter {
    FiniteStructure m;
    Assignment env;
    Rational value;
};

inline std::optional<StructureCounter> refute_on_structures(const Hypersequent& h, int max_size,
                                                            const std::vector<Rational>& grid) {
    auto fv = free_vars(h);
    std::optional<StructureCounter> found;
    enumerate_structures(h, max_size, grid, [&](const FiniteStructure& m) {
        std::vector<std::string> vars(fv.begin(), fv.end());
        std::vector<int> vals(vars.size(), 0);
        while (true) {
            Assignment env;
            for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = vals[i];
            Rational v = eval_hypersequent(m, env, h);
            if (v > Rational(0)) {
                found = StructureCounter{m, env, v};
                return false;
            }
            size_t i = 0;
            for (; i < vals.size(); ++i) {
                if (++vals[i] < m.size) break;
                vals[i] = 0;
            }
            if (i == vals.size()) break;
        }
        return true;
    });
    return found;
}

}  // namespace glv
