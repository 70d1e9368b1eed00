#pragma once

// Rebuilds a proof of the 1/n-approximation of a closed hypersequent from
// approximate Herbrand witnesses, by walking the removal tree bottom-up.
//
// State: a set of elements. Each element has one slot per witness; slot j
// points at a tree node, and its content is that node's hypersequent in
// 1/n-form instantiated at tuple j. Every element carries a checked proof of
// the union of its slot contents. Initially each slot sits at a leaf (all
// leaf combinations, proofs from the quantifier-free decision procedure) and
// the run ends with every slot at the root, where the single surviving
// element proves k copies of the goal; contraction finishes the job.
//
// One reduction step moves a single slot one level up in every element at
// once, keyed on the step that produced that level:
//
//   left ->        rebuild with the approximate left implication rule
//   right exists   rebuild with the approximate right exists rule
//   right ->       elements pair up (left child / right child, all other
//                  slots equal) and merge through the approximate right
//                  implication rule
//   left exists    the slot whose instantiated Skolem term is subterm-maximal
//                  is reduced: identical sibling slots are contracted away,
//                  the approximate left exists rule fires (its eigencondition
//                  is what the maximality argument guarantees), and the
//                  siblings are weakened back in
//
// Slots whose node self-looped at that level just move up unchanged. Each
// step shrinks the leftmost element's total stage, so the run terminates.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "glv/macros.hpp"
#include "glv/prover_prop.hpp"
#include "glv/skolem.hpp"

namespace glv {

struct ReconstructError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Reconstructor {
  public:
    Reconstructor(const SkolemTree& tree, const WitnessSet& ws,
                  std::function<void(const std::string&)> trace = nullptr)
        : t_(tree), ws_(ws), sig_(tree.sig), trace_(std::move(trace)) {
        k_ = static_cast<size_t>(ws.k);
        stage_.assign(k_, t_.height() - 1);
    }

    // Runs the full reduction and returns a checked proof of H_{1/n}.
    Proof run() {
        init();
        while (!done()) step();
        finish_check();

        std::vector<size_t> rootkey(k_, 0);
        auto it = elems_.find(rootkey);
        if (it == elems_.end())
            throw ReconstructError("no all-root element at the fixpoint");
        Proof p = it->second;
        Hypersequent goal = to_approx(Hypersequent(t_.levels[0][0].seqs), ws_.n);
        // The surviving proof concludes k copies of the goal; contract the
        // extras away one sequent at a time.
        for (size_t i = 1; i < k_; ++i) {
            for (auto& comp : goal.comps) {
                ProofBuilder b;
                size_t r = detail::embed(b, p);
                r = b.ec(r, comp);
                p = std::move(b).finish(r);
            }
        }
        check(p);
        if (p.conclusion() != goal)
            throw ReconstructError("reconstruction produced the wrong goal");
        return p;
    }

  private:
    using Key = std::vector<size_t>;  // node index per slot; level is stage_

    const SkolemTree& t_;
    const WitnessSet& ws_;
    Signature sig_;
    std::function<void(const std::string&)> trace_;
    size_t k_ = 0;
    std::vector<size_t> stage_;
    std::map<Key, Proof> elems_;

    void say(const std::string& m) {
        if (trace_) trace_(m);
    }

    size_t mu() const {
        size_t s = 0;
        for (size_t v : stage_) s += v + 1;
        return s;
    }

    const SkolemNode& node_at(size_t slot, size_t ix) const {
        return t_.levels[stage_[slot]][ix];
    }

    std::map<std::string, Term> sub_for(size_t slot) const {
        std::map<std::string, Term> sub;
        for (size_t v = 0; v < t_.xbar.size(); ++v)
            sub[t_.xbar[v]] = ws_.tuples[slot][v];
        return sub;
    }

    Hypersequent content(size_t slot, size_t ix) const {
        return substitute(to_approx(node_at(slot, ix).hyp(), ws_.n), sub_for(slot));
    }

    Hypersequent expected(const Key& key) const {
        std::vector<Sequent> comps;
        for (size_t j = 0; j < k_; ++j) {
            Hypersequent h = content(j, key[j]);
            comps.insert(comps.end(), h.comps.begin(), h.comps.end());
        }
        return Hypersequent(std::move(comps));
    }

    void insert_checked(Key key, Proof p) {
        if (p.conclusion() != expected(key))
            throw ReconstructError("element proof concludes [" + print(p.conclusion()) +
                                   "] but its slots demand [" + print(expected(key)) + "]");
        elems_.emplace(std::move(key), std::move(p));
    }

    void init() {
        size_t leaves = t_.levels.back().size();
        Key key(k_, 0);
        while (true) {
            auto res = decide_prop(expected(key));
            if (!res.valid)
                throw ReconstructError(
                    "witness acceptance lied: leaf combination is invalid: " +
                    print(expected(key)));
            insert_checked(key, std::move(res.proof));
            size_t j = 0;
            for (; j < k_; ++j) {
                if (++key[j] < leaves) break;
                key[j] = 0;
            }
            if (j == k_) break;
        }
        say("start: " + std::to_string(elems_.size()) + " elements, size " +
            std::to_string(mu()));
    }

    bool done() const {
        for (size_t v : stage_)
            if (v > 0) return false;
        return true;
    }

    void finish_check() {
        if (elems_.size() != 1)
            say("note: " + std::to_string(elems_.size()) + " elements at fixpoint");
    }

    StepKind kind_of(size_t slot) const { return t_.steps[stage_[slot] - 1].kind; }

    // The acting slot: lowest index whose pending step has the best priority.
    size_t choose_slot() const {
        auto rank = [](StepKind k) {
            switch (k) {
                case StepKind::LeftImp: return 0;
                case StepKind::RightExists: return 1;
                case StepKind::RightImp: return 2;
                case StepKind::LeftExists: return 3;
            }
            return 4;
        };
        std::optional<size_t> best;
        for (size_t j = 0; j < k_; ++j) {
            if (stage_[j] == 0) continue;
            if (!best || rank(kind_of(j)) < rank(kind_of(*best))) best = j;
        }
        if (!best) throw std::logic_error("step on finished state");
        if (kind_of(*best) == StepKind::LeftExists) return choose_skolem_slot();
        return *best;
    }

    Term skolem_term(size_t slot) const {
        const SkolemStep& st = t_.steps[stage_[slot] - 1];
        std::vector<Term> args;
        for (auto& v : st.skargs) args.push_back(Term::var(v));
        return subst_term(Term::app(st.skfn, std::move(args)), sub_for(slot));
    }

    // Subterm-maximal instantiated Skolem term, lowest slot on ties.
    size_t choose_skolem_slot() const {
        std::vector<std::optional<Term>> s(k_);
        for (size_t j = 0; j < k_; ++j)
            if (stage_[j] > 0 && kind_of(j) == StepKind::LeftExists) s[j] = skolem_term(j);
        for (size_t m = 0; m < k_; ++m) {
            if (!s[m]) continue;
            bool maximal = true;
            for (size_t j = 0; j < k_; ++j)
                if (s[j] && is_proper_subterm(*s[m], *s[j])) maximal = false;
            if (maximal) return m;
        }
        throw std::logic_error("no subterm-maximal skolem term");
    }

    // Principal component of the parent node, instantiated at the slot's
    // tuple, with the principal formula already removed from its side.
    struct Active {
        FormulaMultiset g, d;  // side context of the principal component
        size_t parent;         // parent node index
    };

    Active active_of(size_t slot, const SkolemNode& node, const Formula& principal,
                     bool in_succ) const {
        const SkolemStep& st = t_.steps[stage_[slot] - 1];
        const SkolemNode& par = t_.levels[stage_[slot] - 1][node.parent];
        auto px = detail::find_pos(par, st.pos);
        if (!px) throw std::logic_error("principal position missing in parent");
        Sequent s = substitute(par.seqs[*px], sub_for(slot));
        Active a;
        a.parent = node.parent;
        a.g = s.ante;
        a.d = s.succ;
        if (!erase_one(in_succ ? a.d : a.g, principal))
            throw ReconstructError("parent lacks principal formula " + print(principal));
        return a;
    }

    void step() {
        size_t m = choose_slot();
        StepKind kind = kind_of(m);
        const SkolemStep& st = t_.steps[stage_[m] - 1];
        std::map<Key, Proof> next;

        switch (kind) {
            case StepKind::LeftImp: {
                Formula A = substitute(st.A, sub_for(m));
                Formula B = substitute(st.B, sub_for(m));
                for (auto& [key, proof] : elems_) {
                    const SkolemNode& nd = node_at(m, key[m]);
                    Key nk = key;
                    nk[m] = nd.parent;
                    if (next.count(nk)) continue;
                    if (nd.how == Derive::SelfLoop) {
                        next.emplace(std::move(nk), proof);
                        continue;
                    }
                    Active a = active_of(m, nd, f_imp(A, B), false);
                    next.emplace(std::move(nk), imp_left_approx(proof, ws_.n, A, B, a.g, a.d));
                }
                break;
            }
            case StepKind::RightExists: {
                std::map<std::string, Term> subm = sub_for(m);
                Formula body = substitute(st.body, subm);
                Formula ex = f_exists(st.bound, body);
                Term wit = subm.at(st.var);
                for (auto& [key, proof] : elems_) {
                    const SkolemNode& nd = node_at(m, key[m]);
                    Key nk = key;
                    nk[m] = nd.parent;
                    if (next.count(nk)) continue;
                    if (nd.how == Derive::SelfLoop) {
                        next.emplace(std::move(nk), proof);
                        continue;
                    }
                    Active a = active_of(m, nd, ex, true);
                    next.emplace(std::move(nk), exists_right_approx(proof, ws_.n, wit,
                                                                    st.bound, body, a.g, a.d));
                }
                break;
            }
            case StepKind::RightImp: {
                Formula A = substitute(st.A, sub_for(m));
                Formula B = substitute(st.B, sub_for(m));
                size_t level = stage_[m];
                for (auto& [key, proof] : elems_) {
                    const SkolemNode& nd = node_at(m, key[m]);
                    Key nk = key;
                    nk[m] = nd.parent;
                    if (nd.how == Derive::SelfLoop) {
                        if (!next.count(nk)) next.emplace(std::move(nk), proof);
                        continue;
                    }
                    if (nd.how == Derive::AppliedRight) continue;  // consumed by its twin
                    if (nd.how != Derive::AppliedLeft)
                        throw std::logic_error("unexpected derivation tag");
                    // The partner element: identical except this slot holds
                    // the right sibling.
                    std::optional<size_t> sib;
                    for (size_t ix = 0; ix < t_.levels[level].size(); ++ix)
                        if (t_.levels[level][ix].parent == nd.parent &&
                            t_.levels[level][ix].how == Derive::AppliedRight)
                            sib = ix;
                    if (!sib) throw std::logic_error("right sibling missing in tree");
                    Key pk = key;
                    pk[m] = *sib;
                    auto pit = elems_.find(pk);
                    if (pit == elems_.end())
                        throw ReconstructError(
                            "well-formedness broken: right-branch partner absent for " +
                            print(expected(key)));
                    if (next.count(nk)) continue;
                    Active a = active_of(m, nd, f_imp(A, B), true);
                    next.emplace(std::move(nk), imp_right_approx(proof, pit->second, ws_.n, A,
                                                                 B, a.g, a.d));
                }
                // Every right-branch element must have been consumed.
                for (auto& [key, proof] : elems_) {
                    const SkolemNode& nd = node_at(m, key[m]);
                    Key nk = key;
                    nk[m] = nd.parent;
                    if (nd.how == Derive::AppliedRight && !next.count(nk))
                        throw ReconstructError(
                            "well-formedness broken: left-branch partner absent for " +
                            print(expected(key)));
                }
                break;
            }
            case StepKind::LeftExists: {
                std::map<std::string, Term> subm = sub_for(m);
                Formula body = substitute(st.body, subm);
                Term sk = skolem_term(m);
                // Slots sharing the same instantiated Skolem term.
                std::vector<size_t> twins;
                for (size_t j = 0; j < k_; ++j)
                    if (j != m && stage_[j] > 0 && kind_of(j) == StepKind::LeftExists &&
                        skolem_term(j) == sk)
                        twins.push_back(j);
                for (auto& [key, proof] : elems_) {
                    const SkolemNode& nd = node_at(m, key[m]);
                    Key nk = key;
                    nk[m] = nd.parent;
                    if (next.count(nk)) continue;
                    if (nd.how == Derive::SelfLoop) {
                        next.emplace(std::move(nk), proof);
                        continue;
                    }
                    Hypersequent mine = content(m, key[m]);
                    Proof p = proof;
                    std::vector<size_t> removed;
                    for (size_t j : twins) {
                        Hypersequent other = content(j, key[j]);
                        if (other != mine) continue;
                        for (auto& comp : other.comps) {
                            ProofBuilder b;
                            size_t r = detail::embed(b, p);
                            r = b.ec(r, comp);
                            p = std::move(b).finish(r);
                        }
                        removed.push_back(j);
                    }
                    Active a = active_of(m, nd, f_exists(st.bound, body), false);
                    try {
                        p = exists_left_approx(p, ws_.n, sk, st.bound, body, a.g, a.d, sig_);
                    } catch (const CheckError& e) {
                        throw ReconstructError(
                            std::string("eigencondition audit failed while binding ") +
                            print(sk) + ": " + e.what());
                    }
                    for (size_t j : removed) {
                        Hypersequent other = content(j, key[j]);
                        for (auto& comp : other.comps) {
                            ProofBuilder b;
                            size_t r = detail::embed(b, p);
                            r = b.ew(r, comp);
                            p = std::move(b).finish(r);
                        }
                    }
                    next.emplace(std::move(nk), std::move(p));
                }
                break;
            }
        }

        --stage_[m];
        size_t before = elems_.size();
        elems_ = std::move(next);
        const char* names[] = {"left ->", "right exists", "right ->", "left exists"};
        say("slot " + std::to_string(m) + ": " + names[static_cast<int>(kind)] + ", " +
            std::to_string(before) + " -> " + std::to_string(elems_.size()) +
            " elements, size " + std::to_string(mu()));
        for (auto& [key, proof] : elems_)
            if (proof.conclusion() != expected(key))
                throw ReconstructError("element drifted from its slots after a step");
    }
};

// ------------------------------------------------------------- pipeline

struct ProveOptions {
    long n = 1;
    long max_k = 4;
    int max_depth = 4;
    size_t lp_budget = 100000;
    std::function<void(const std::string&)> trace;
};

struct ProveResult {
    enum Status { Proved, Refuted, Exhausted } status = Exhausted;
    Proof proof;             // Proved: a cut-free proof of H_{1/n}
    Valuation countermodel;  // Refuted (quantifier-free input only)
    WitnessSearch search;    // quantified input: the search telemetry
};

// Produces a checked proof of the 1/n-approximation of h, refutes it
// (quantifier-free case), or reports search exhaustion.
inline ProveResult prove_approx(const Hypersequent& h, const ProveOptions& opt) {
    if (opt.n < 1) throw std::invalid_argument("n must be >= 1");
    ProveResult out;

    if (!has_quantifier(h)) {
        if (!free_vars(h).empty())
            throw std::invalid_argument("input must be closed");
        auto res = decide_prop(to_approx(h, opt.n));
        if (res.valid) {
            out.status = ProveResult::Proved;
            out.proof = std::move(res.proof);
        } else {
            out.status = ProveResult::Refuted;
            out.countermodel = std::move(res.countermodel);
        }
        return out;
    }

    Signature sig;
    SkolemTree tree = build_tree(h, sig);
    auto sync = check_sync(tree);
    if (!sync.ok) throw std::logic_error("tree sync violation: " + sync.message);

    out.search = find_witnesses(tree, opt.n, opt.max_k, opt.max_depth, opt.lp_budget);
    if (!out.search.found) {
        out.status = ProveResult::Exhausted;
        return out;
    }
    if (opt.trace) {
        std::string msg = "witnesses: k=" + std::to_string(out.search.witnesses.k);
        for (auto& tp : out.search.witnesses.tuples) {
            msg += " (";
            for (size_t i = 0; i < tp.size(); ++i)
                msg += (i ? "," : "") + print(tp[i]);
            msg += ")";
        }
        opt.trace(msg);
    }

    Reconstructor rec(tree, out.search.witnesses, opt.trace);
    out.proof = rec.run();
    out.status = ProveResult::Proved;
    return out;
}

}  // namespace glv
