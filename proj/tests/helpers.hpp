#pragma once

// Deterministic random generators shared by the test suites.

#include <random>
#include <string>
#include <vector>

#include "glv/farkas.hpp"
#include "glv/syntax.hpp"

namespace testgen {

using namespace glv;
using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational rand_rational(Rng& rng, int max_num = 8, int max_den = 8) {
    int d = pick(rng, 1, max_den);
    int n = pick(rng, -max_num, max_num);
    return Rational(n, d);
}

// Quantifier-free formula over a small atom pool; includes sugar so parsing
// and expansion get exercised.
inline Formula rand_prop_formula(Rng& rng, int depth, int atoms = 4) {
    if (depth == 0 || pick(rng, 0, 3) == 0) {
        int c = pick(rng, 0, atoms);
        if (c == atoms) return f_bot();
        return f_atom(std::string(1, static_cast<char>('A' + c)));
    }
    switch (pick(rng, 0, 5)) {
        case 0: return f_imp(rand_prop_formula(rng, depth - 1, atoms),
                             rand_prop_formula(rng, depth - 1, atoms));
        case 1: return f_neg(rand_prop_formula(rng, depth - 1, atoms));
        case 2: return f_oplus(rand_prop_formula(rng, depth - 1, atoms),
                               rand_prop_formula(rng, depth - 1, atoms));
        case 3: return f_odot(rand_prop_formula(rng, depth - 1, atoms),
                              rand_prop_formula(rng, depth - 1, atoms));
        case 4: return f_or(rand_prop_formula(rng, depth - 1, atoms),
                            rand_prop_formula(rng, depth - 1, atoms));
        default: return f_and(rand_prop_formula(rng, depth - 1, atoms),
                              rand_prop_formula(rng, depth - 1, atoms));
    }
}

inline size_t imp_count(const Formula& f) {
    size_t n = f.kind == FKind::Imp ? 1 : 0;
    for (auto& k : f.kids) n += imp_count(k);
    return n;
}

// Decomposition cost is exponential in the number of core implications, so
// keep each formula's expanded size small.
inline Formula rand_small_formula(Rng& rng, int depth, int atoms = 4, size_t max_imps = 3) {
    while (true) {
        Formula f = rand_prop_formula(rng, depth, atoms);
        if (imp_count(f) <= max_imps) return f;
    }
}

inline Hypersequent rand_prop_hypersequent(Rng& rng, int max_comps = 3, int max_side = 3,
                                           int depth = 2, int atoms = 4) {
    std::vector<Sequent> cs;
    int nc = pick(rng, 1, max_comps);
    // Left implications duplicate their component on decomposition, so cost is
    // exponential in the implication count; keep the total small.
    size_t budget = 6;
    auto draw = [&]() {
        Formula f = rand_small_formula(rng, depth, atoms, std::min<size_t>(2, budget));
        budget -= imp_count(f);
        return f;
    };
    for (int i = 0; i < nc; ++i) {
        FormulaMultiset a, s;
        int na = pick(rng, 0, max_side), ns = pick(rng, 0, max_side);
        for (int j = 0; j < na; ++j) a.push_back(draw());
        for (int j = 0; j < ns; ++j) s.push_back(draw());
        cs.emplace_back(std::move(a), std::move(s));
    }
    return Hypersequent(std::move(cs));
}

// Closed first-order formula: unary predicates P,Q, constant c, unary f.
// The budget caps non-atomic connectives across a whole hypersequent; the
// removal tree grows exponentially in their number.
inline Formula rand_fo_formula(Rng& rng, int depth, std::vector<std::string>& scope, int& next,
                               size_t& budget) {
    if (budget == 0) depth = 0;
    auto term = [&]() -> Term {
        if (!scope.empty() && pick(rng, 0, 1) == 0)
            return Term::var(scope[static_cast<size_t>(pick(rng, 0, static_cast<int>(scope.size()) - 1))]);
        if (pick(rng, 0, 1) == 0) return Term::app("c");
        return Term::app("f", {Term::app("c")});
    };
    if (depth == 0 || pick(rng, 0, 3) == 0) {
        if (pick(rng, 0, 4) == 0) return f_bot();
        return f_atom(pick(rng, 0, 1) ? "P" : "Q", {term()});
    }
    --budget;
    switch (pick(rng, 0, 3)) {
        case 0: return f_imp(rand_fo_formula(rng, depth - 1, scope, next, budget),
                             rand_fo_formula(rng, depth - 1, scope, next, budget));
        case 1: {
            std::string v = "v" + std::to_string(next++);
            scope.push_back(v);
            Formula body = rand_fo_formula(rng, depth - 1, scope, next, budget);
            scope.pop_back();
            return f_exists(v, std::move(body));
        }
        case 2: {
            std::string v = "v" + std::to_string(next++);
            scope.push_back(v);
            Formula body = rand_fo_formula(rng, depth - 1, scope, next, budget);
            scope.pop_back();
            // forall costs two implications once desugared
            if (budget) --budget;
            return f_forall(v, std::move(body));
        }
        default: return f_neg(rand_fo_formula(rng, depth - 1, scope, next, budget));
    }
}

inline Hypersequent rand_closed_hypersequent(Rng& rng, int max_comps = 2, int max_side = 2,
                                             int depth = 3, size_t budget = 6) {
    std::vector<Sequent> cs;
    int nc = pick(rng, 1, max_comps);
    int next = 1;
    std::vector<std::string> scope;
    for (int i = 0; i < nc; ++i) {
        FormulaMultiset a, s;
        int na = pick(rng, 0, max_side), ns = pick(rng, 0, max_side);
        for (int j = 0; j < na; ++j)
            a.push_back(rand_fo_formula(rng, depth, scope, next, budget));
        for (int j = 0; j < ns; ++j)
            s.push_back(rand_fo_formula(rng, depth, scope, next, budget));
        cs.emplace_back(std::move(a), std::move(s));
    }
    return Hypersequent(std::move(cs));
}

inline FarkasInstance rand_farkas(Rng& rng, int max_vars = 4, int max_rows = 6) {
    FarkasInstance in;
    in.dim = static_cast<size_t>(pick(rng, 1, max_vars));
    int rows = pick(rng, 1, max_rows);
    int m2 = pick(rng, 0, rows);
    int m1 = rows - m2;
    auto row = [&]() {
        Vec r(in.dim);
        for (auto& x : r) x = rand_rational(rng, 4, 4);
        return r;
    };
    for (int i = 0; i < m1; ++i) {
        in.M.push_back(row());
        in.a.push_back(rand_rational(rng, 6, 4));
    }
    for (int i = 0; i < m2; ++i) {
        in.N.push_back(row());
        in.b.push_back(rand_rational(rng, 6, 4));
    }
    return in;
}

}  // namespace testgen
