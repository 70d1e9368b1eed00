#pragma once

// Quantifier and implication removal tree for closed hypersequents, level
// sets, ground-term enumeration, and the bounded search for approximate
// Herbrand witnesses.
//
// Each tree level applies one globally chosen step, determined by the
// leftmost leaf: the first component holding a non-atomic formula, succedent
// before antecedent, least such formula. All other leaves follow the same
// step at the corresponding position when they can, and are attached to
// themselves otherwise, so every path has the same length. Components carry
// stable position ids so "the corresponding position" survives reordering:
//
//   right ->      two children; the component loses A->B and gains (A => B)
//                 on the left child, nothing on the right child
//   left ->       one child; the component trades A->B for B => A, and a new
//                 component Gamma => Delta is appended under a fresh id
//   right exists  one child; the quantifier is instantiated at a globally
//                 fresh variable
//   left exists   one child; instantiated at f(xbar) for a fresh Skolem
//                 function over all variables alive at this stage

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "glv/prover_prop.hpp"
#include "glv/syntax.hpp"

namespace glv {

enum class StepKind { RightImp, LeftImp, RightExists, LeftExists };

// The step taken between consecutive levels.
struct SkolemStep {
    StepKind kind;
    size_t pos = 0;                   // position id of the principal component
    Formula A, B;                     // RightImp / LeftImp principals
    Formula body;                     // exists body, bound variable below
    std::string bound;
    std::string var;                  // RightExists fresh variable
    std::string skfn;                 // LeftExists Skolem function
    std::vector<std::string> skargs;  // its argument variables
    size_t new_pos = 0;               // LeftImp appended position id
};

enum class Derive { Root, SelfLoop, Applied, AppliedLeft, AppliedRight };

struct SkolemNode {
    std::vector<Sequent> seqs;  // ordered; parallel to pos
    std::vector<size_t> pos;    // stable position ids
    size_t parent = 0;          // index into the previous level
    Derive how = Derive::Root;

    Hypersequent hyp() const { return Hypersequent(seqs); }
};

struct SkolemTree {
    std::vector<std::vector<SkolemNode>> levels;  // levels[0] = {root}
    std::vector<SkolemStep> steps;                // steps[i]: level i -> i+1
    std::vector<std::string> xbar;                // fresh variables, creation order
    Signature sig;                                // extended by Skolemization

    size_t height() const { return levels.size(); }
};

namespace detail {

inline bool is_clean(const Hypersequent& h) {
    for (auto& s : h.comps) {
        for (auto& f : s.ante)
            if (!is_atomic(f)) return false;
        for (auto& f : s.succ)
            if (!is_atomic(f)) return false;
    }
    return true;
}

// Position index of id `p` in node, if still present.
inline std::optional<size_t> find_pos(const SkolemNode& n, size_t p) {
    for (size_t i = 0; i < n.pos.size(); ++i)
        if (n.pos[i] == p) return i;
    return std::nullopt;
}

}  // namespace detail

inline SkolemTree build_tree(const Hypersequent& h, Signature sig) {
    if (!free_vars(h).empty())
        throw std::invalid_argument("tree construction requires a closed hypersequent");
    sig.scan(h);

    SkolemTree t;
    t.sig = std::move(sig);
    SkolemNode root;
    root.seqs = h.comps;
    for (size_t i = 0; i < root.seqs.size(); ++i) root.pos.push_back(i);
    size_t next_pos = root.seqs.size();
    t.levels.push_back({root});

    while (true) {
        const SkolemNode& lead = t.levels.back()[0];
        // Choose the step from the leftmost leaf.
        std::optional<SkolemStep> step;
        for (size_t ci = 0; ci < lead.seqs.size() && !step; ++ci) {
            const Sequent& s = lead.seqs[ci];
            for (auto& f : s.succ) {
                if (is_atomic(f)) continue;
                SkolemStep st;
                st.pos = lead.pos[ci];
                if (f.kind == FKind::Imp) {
                    st.kind = StepKind::RightImp;
                    st.A = f.kids[0];
                    st.B = f.kids[1];
                } else {
                    st.kind = StepKind::RightExists;
                    st.bound = f.name;
                    st.body = f.kids[0];
                    st.var = t.sig.fresh_var();
                }
                step = std::move(st);
                break;
            }
            if (step) break;
            for (auto& f : s.ante) {
                if (is_atomic(f)) continue;
                SkolemStep st;
                st.pos = lead.pos[ci];
                if (f.kind == FKind::Imp) {
                    st.kind = StepKind::LeftImp;
                    st.A = f.kids[0];
                    st.B = f.kids[1];
                    st.new_pos = next_pos++;
                } else {
                    st.kind = StepKind::LeftExists;
                    st.bound = f.name;
                    st.body = f.kids[0];
                    // All variables alive anywhere at this stage, in creation
                    // order.
                    std::set<std::string> alive;
                    for (auto& node : t.levels.back()) {
                        auto fv = free_vars(node.hyp());
                        alive.insert(fv.begin(), fv.end());
                    }
                    for (auto& v : t.xbar)
                        if (alive.count(v)) st.skargs.push_back(v);
                    st.skfn = t.sig.fresh_func(static_cast<int>(st.skargs.size()));
                }
                step = std::move(st);
                break;
            }
        }
        if (!step) break;

        if (step->kind == StepKind::RightExists) t.xbar.push_back(step->var);

        std::vector<SkolemNode> next;
        for (size_t ni = 0; ni < t.levels.back().size(); ++ni) {
            const SkolemNode& node = t.levels.back()[ni];
            auto px = detail::find_pos(node, step->pos);

            auto self_loop = [&]() {
                SkolemNode c = node;
                c.parent = ni;
                c.how = Derive::SelfLoop;
                next.push_back(std::move(c));
            };

            if (!px) {
                self_loop();
                continue;
            }
            const Sequent& s = node.seqs[*px];

            switch (step->kind) {
                case StepKind::RightImp: {
                    Formula imp = f_imp(step->A, step->B);
                    if (!count_of(s.succ, imp)) {
                        self_loop();
                        break;
                    }
                    FormulaMultiset d0 = s.succ;
                    erase_one(d0, imp);
                    SkolemNode l = node, r = node;
                    l.parent = r.parent = ni;
                    l.how = Derive::AppliedLeft;
                    r.how = Derive::AppliedRight;
                    l.seqs[*px] = Sequent(detail::cat(s.ante, step->A),
                                          detail::cat(d0, step->B));
                    r.seqs[*px] = Sequent(s.ante, d0);
                    next.push_back(std::move(l));
                    next.push_back(std::move(r));
                    break;
                }
                case StepKind::LeftImp: {
                    Formula imp = f_imp(step->A, step->B);
                    if (!count_of(s.ante, imp)) {
                        self_loop();
                        break;
                    }
                    FormulaMultiset g0 = s.ante;
                    erase_one(g0, imp);
                    SkolemNode c = node;
                    c.parent = ni;
                    c.how = Derive::Applied;
                    c.seqs[*px] =
                        Sequent(detail::cat(g0, step->B), detail::cat(s.succ, step->A));
                    c.seqs.push_back(Sequent(g0, s.succ));
                    c.pos.push_back(step->new_pos);
                    next.push_back(std::move(c));
                    break;
                }
                case StepKind::RightExists: {
                    Formula ex = f_exists(step->bound, step->body);
                    if (!count_of(s.succ, ex)) {
                        self_loop();
                        break;
                    }
                    FormulaMultiset d0 = s.succ;
                    erase_one(d0, ex);
                    std::map<std::string, Term> sub{{step->bound, Term::var(step->var)}};
                    SkolemNode c = node;
                    c.parent = ni;
                    c.how = Derive::Applied;
                    c.seqs[*px] =
                        Sequent(s.ante, detail::cat(d0, substitute(step->body, sub)));
                    next.push_back(std::move(c));
                    break;
                }
                case StepKind::LeftExists: {
                    Formula ex = f_exists(step->bound, step->body);
                    if (!count_of(s.ante, ex)) {
                        self_loop();
                        break;
                    }
                    FormulaMultiset g0 = s.ante;
                    erase_one(g0, ex);
                    std::vector<Term> args;
                    for (auto& v : step->skargs) args.push_back(Term::var(v));
                    std::map<std::string, Term> sub{
                        {step->bound, Term::app(step->skfn, std::move(args))}};
                    SkolemNode c = node;
                    c.parent = ni;
                    c.how = Derive::Applied;
                    c.seqs[*px] =
                        Sequent(detail::cat(g0, substitute(step->body, sub)), s.succ);
                    next.push_back(std::move(c));
                    break;
                }
            }
        }
        t.steps.push_back(std::move(*step));
        t.levels.push_back(std::move(next));
    }
    return t;
}

// X_i for 1-based i: the distinct hypersequents at depth i.
inline std::vector<Hypersequent> level_set(const SkolemTree& t, size_t i) {
    if (i < 1 || i > t.height()) throw std::invalid_argument("level index out of range");
    std::set<Hypersequent> seen;
    std::vector<Hypersequent> out;
    for (auto& n : t.levels[i - 1]) {
        Hypersequent h = n.hyp();
        if (seen.insert(h).second) out.push_back(std::move(h));
    }
    return out;
}

struct SyncReport {
    bool ok = true;
    std::string message;
};

// Structural sanity of the finished tree: the leftmost leaf is free of
// quantifiers and implications, and every formula in any node also occurs in
// the leftmost node of its level.
inline SyncReport check_sync(const SkolemTree& t) {
    SyncReport r;
    auto fail = [&](std::string m) {
        r.ok = false;
        r.message = std::move(m);
        return r;
    };
    if (t.levels.empty() || t.levels[0].size() != 1) return fail("malformed root level");
    if (!detail::is_clean(t.levels.back()[0].hyp()))
        return fail("leftmost leaf still holds a quantifier or implication");
    for (size_t i = 0; i < t.height(); ++i) {
        if (i > 0 && t.levels[i][0].parent != 0)
            return fail("leftmost node of level " + std::to_string(i + 1) +
                        " is not on the leftmost path");
        std::set<Formula> lead;
        for (auto& s : t.levels[i][0].seqs) {
            for (auto& f : s.ante) lead.insert(f);
            for (auto& f : s.succ) lead.insert(f);
        }
        for (auto& n : t.levels[i]) {
            for (auto& s : n.seqs) {
                for (auto& f : s.ante)
                    if (!lead.count(f))
                        return fail("formula " + print(f) + " at level " +
                                    std::to_string(i + 1) + " is absent from the leftmost node");
                for (auto& f : s.succ)
                    if (!lead.count(f))
                        return fail("formula " + print(f) + " at level " +
                                    std::to_string(i + 1) + " is absent from the leftmost node");
            }
        }
    }
    return r;
}

// ------------------------------------------------------- term enumeration

inline int term_depth(const Term& t) {
    int d = 0;
    for (auto& a : t.args) d = std::max(d, term_depth(a) + 1);
    return d;
}

// All ground terms of depth <= depth, ordered by depth then term order.
inline std::vector<Term> enumerate_terms(const Signature& sig, int depth) {
    std::vector<Term> all;
    std::vector<Term> layer;
    for (auto& [n, ar] : sig.funcs)
        if (ar == 0) layer.push_back(Term::app(n));
    std::sort(layer.begin(), layer.end());
    all = layer;
    for (int d = 1; d <= depth; ++d) {
        std::vector<Term> next;
        for (auto& [n, ar] : sig.funcs) {
            if (ar == 0) continue;
            // All argument vectors from terms of depth < d, at least one of
            // depth d-1.
            std::vector<Term> pool;
            for (auto& t : all)
                if (term_depth(t) < d) pool.push_back(t);
            std::vector<size_t> ix(static_cast<size_t>(ar), 0);
            while (true) {
                std::vector<Term> args;
                int mx = 0;
                for (size_t i = 0; i < ix.size(); ++i) {
                    args.push_back(pool[ix[i]]);
                    mx = std::max(mx, term_depth(pool[ix[i]]));
                }
                if (mx == d - 1) next.push_back(Term::app(n, args));
                size_t i = 0;
                for (; i < ix.size(); ++i) {
                    if (++ix[i] < pool.size()) break;
                    ix[i] = 0;
                }
                if (i == ix.size()) break;
            }
        }
        std::sort(next.begin(), next.end());
        all.insert(all.end(), next.begin(), next.end());
    }
    return all;
}

// --------------------------------------------------------- witness search

struct WitnessSet {
    long k = 0;
    long n = 1;
    std::vector<std::vector<Term>> tuples;  // k tuples, each of length |xbar|
};

struct WitnessSearch {
    bool found = false;
    WitnessSet witnesses;
    bool budget_exhausted = false;
    long max_k_tried = 0;
    int max_depth_tried = -1;
    size_t lp_calls = 0;
};

namespace detail {

// The hypersequent whose validity certifies a candidate witness list: every
// choice of one leaf per witness slot, each leaf taken to 1/n-form and
// instantiated at its slot's tuple, joined into one hypersequent.
inline bool witnesses_work(const std::vector<Hypersequent>& leaves,
                           const std::vector<std::string>& xbar, long n,
                           const std::vector<std::vector<Term>>& tuples, size_t budget,
                           size_t& lp_calls) {
    size_t k = tuples.size();
    std::vector<size_t> choice(k, 0);
    // Precompute each leaf instantiated at each slot's tuple.
    std::vector<std::vector<Hypersequent>> leaf_at(k);
    for (size_t j = 0; j < k; ++j) {
        std::map<std::string, Term> sub;
        for (size_t v = 0; v < xbar.size(); ++v) sub[xbar[v]] = tuples[j][v];
        for (auto& l : leaves) leaf_at[j].push_back(substitute(to_approx(l, n), sub));
    }
    while (true) {
        std::vector<Sequent> comps;
        for (size_t j = 0; j < k; ++j) {
            auto& h = leaf_at[j][choice[j]];
            comps.insert(comps.end(), h.comps.begin(), h.comps.end());
        }
        if (lp_calls >= budget) return false;
        auto res = decide_prop(Hypersequent(std::move(comps)), &lp_calls);
        if (!res.valid) return false;
        size_t j = 0;
        for (; j < k; ++j) {
            if (++choice[j] < leaves.size()) break;
            choice[j] = 0;
        }
        if (j == k) return true;
    }
}

}  // namespace detail

// Iterative-deepening search, k-major then term depth; every candidate that
// passes is accepted as-is (the acceptance test is the definition).
inline WitnessSearch find_witnesses(const SkolemTree& t, long n, long max_k, int max_depth,
                                    size_t lp_budget) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    WitnessSearch out;
    auto leaves = level_set(t, t.height());
    Signature sig = t.sig;
    sig.ensure_constant();
    size_t nv = t.xbar.size();

    for (long k = 1; k <= max_k; ++k) {
        out.max_k_tried = k;
        for (int depth = 0; depth <= max_depth; ++depth) {
            out.max_depth_tried = std::max(out.max_depth_tried, depth);
            auto terms = enumerate_terms(sig, depth);
            // All tuples over the enumerated terms.
            std::vector<std::vector<Term>> tuples;
            std::vector<size_t> ix(nv, 0);
            while (true) {
                std::vector<Term> tup;
                for (size_t v = 0; v < nv; ++v) tup.push_back(terms[ix[v]]);
                tuples.push_back(std::move(tup));
                size_t i = 0;
                for (; i < nv; ++i) {
                    if (++ix[i] < terms.size()) break;
                    ix[i] = 0;
                }
                if (i == nv || nv == 0) break;
            }
            // Combinations with repetition of k tuples.
            std::vector<size_t> pick(static_cast<size_t>(k), 0);
            while (true) {
                std::vector<std::vector<Term>> cand;
                for (size_t j = 0; j < pick.size(); ++j) cand.push_back(tuples[pick[j]]);
                if (detail::witnesses_work(leaves, t.xbar, n, cand, lp_budget,
                                           out.lp_calls)) {
                    out.found = true;
                    out.witnesses.k = k;
                    out.witnesses.n = n;
                    out.witnesses.tuples = std::move(cand);
                    return out;
                }
                if (out.lp_calls >= lp_budget) {
                    out.budget_exhausted = true;
                    return out;
                }
                // Next nondecreasing index vector.
                size_t j = pick.size();
                while (j > 0 && pick[j - 1] == tuples.size() - 1) --j;
                if (j == 0) break;
                size_t v = ++pick[j - 1];
                for (size_t l = j; l < pick.size(); ++l) pick[l] = v;
            }
        }
    }
    return out;
}

}  // namespace glv
