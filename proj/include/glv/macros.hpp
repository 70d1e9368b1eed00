#pragma once

// Derived rule families for components in 1/n-approximate form
// (bot, n*Gamma => n*Delta). Each macro expands to a kernel-checkable proof
// fragment built from the primitive rules only:
//
//   mul   G | S            =>*  G | n*S          (n-1 mixes)
//   div   G | n*S          =>*  G | S            (n-1 splits, n-1 ec)
//
//   imp_left_approx
//     G | bot,nG0,nB => nA,nD | bot,nG0 => nD
//       =>*  G | bot,nG0,n(A->B) => nD
//
//   imp_right_approx
//     G | bot,nG0,nA => nB,nD  and  G | bot,nG0 => nD
//       =>*  G | bot,nG0 => n(A->B),nD
//     via the interpolating family D_i = G | bot,nG0,iA => iB,nD and a
//     double recursion on (remaining A's, produced A->B's).
//
//   exists_right_approx
//     G | bot,nG0 => nA[t/x],nD   =>*  G | bot,nG0 => n(exists x.A),nD
//
//   exists_left_approx
//     G | bot,nG0,nA[c/x] => nD   =>*  G | bot,nG0,n(exists x.A) => nD
//     for c a variable or ground term absent from the rest: the premise is
//     replicated at n fresh variables, mixed, divided back down, and the
//     variables are bound one by one.

#include <stdexcept>
#include <vector>

#include "glv/proof.hpp"
#include "glv/syntax.hpp"

namespace glv {

namespace detail {

inline size_t embed(ProofBuilder& b, const Proof& p) {
    std::vector<size_t> remap(p.nodes.size());
    for (size_t i = 0; i < p.nodes.size(); ++i) {
        std::vector<size_t> prem;
        for (size_t q : p.nodes[i].premises) prem.push_back(remap[q]);
        remap[i] = b.add(p.nodes[i].concl, p.nodes[i].rule, p.nodes[i].data, std::move(prem));
    }
    return remap[p.root];
}

inline FormulaMultiset rep(const Formula& f, long k) {
    FormulaMultiset ms;
    for (long i = 0; i < k; ++i) ms.push_back(f);
    return ms;
}

inline FormulaMultiset rep(const FormulaMultiset& ms, long k) {
    FormulaMultiset out;
    for (long i = 0; i < k; ++i) out.insert(out.end(), ms.begin(), ms.end());
    normalize(out);
    return out;
}

inline Sequent times(const Sequent& s, long k) {
    return Sequent(rep(s.ante, k), rep(s.succ, k));
}

inline Hypersequent context_minus_throw(const Hypersequent& h, const Sequent& s) {
    std::vector<Sequent> cs = h.comps;
    if (!erase_one(cs, s))
        throw std::invalid_argument("macro premise lacks component " + print(s));
    return Hypersequent(std::move(cs));
}

// G | S  to  G | k*S by repeated mixing with the original node.
inline size_t mul_at(ProofBuilder& b, size_t node, const Sequent& s, long k) {
    if (k < 1) throw std::invalid_argument("mul: k must be >= 1");
    Hypersequent g = context_minus_throw(b.concl(node), s);
    size_t base = node;
    Sequent cur = s;
    for (long i = 2; i <= k; ++i) {
        RuleData d;
        d.g0 = cur.ante;
        d.d0 = cur.succ;
        d.g1 = s.ante;
        d.d1 = s.succ;
        Sequent merged(cat(d.g0, d.g1), cat(d.d0, d.d1));
        node = b.add(with_component(g, merged), Rule::Mix, std::move(d), {node, base});
        cur = std::move(merged);
    }
    return node;
}

// G | k*S  to  G | S by splitting off copies and contracting.
inline size_t div_at(ProofBuilder& b, size_t node, const Sequent& s, long k) {
    if (k < 1) throw std::invalid_argument("div: k must be >= 1");
    Sequent cur = times(s, k);
    Hypersequent g = context_minus_throw(b.concl(node), cur);
    std::vector<Sequent> done = g.comps;
    for (long i = k; i >= 2; --i) {
        Sequent rest = times(s, i - 1);
        RuleData d;
        d.g0 = s.ante;
        d.d0 = s.succ;
        d.g1 = rest.ante;
        d.d1 = rest.succ;
        std::vector<Sequent> concl = done;
        concl.push_back(s);
        concl.push_back(rest);
        node = b.add(Hypersequent(std::move(concl)), Rule::Split, std::move(d), {node});
        done.push_back(s);
        cur = std::move(rest);
    }
    for (long i = 0; i < k - 1; ++i) node = b.ec(node, s);
    return node;
}

}  // namespace detail

inline Proof mul(const Proof& p, const Sequent& s, long k) {
    ProofBuilder b;
    size_t root = detail::embed(b, p);
    root = detail::mul_at(b, root, s, k);
    return std::move(b).finish(root);
}

inline Proof div(const Proof& p, const Sequent& s, long k) {
    ProofBuilder b;
    size_t root = detail::embed(b, p);
    root = detail::div_at(b, root, s, k);
    return std::move(b).finish(root);
}

namespace detail {

inline size_t imp_left_approx_at(ProofBuilder& b, size_t node, long n, const Formula& A,
                                 const Formula& B, const FormulaMultiset& g0,
                                 const FormulaMultiset& d0) {
    Formula imp = f_imp(A, B);
    FormulaMultiset base_a = cat(rep(g0, n), f_bot());
    FormulaMultiset base_s = rep(d0, n);
    Sequent c1(cat(base_a, rep(B, n)), cat(base_s, rep(A, n)));
    Sequent c2(base_a, base_s);
    Hypersequent g = context_minus_throw(context_minus_throw(b.concl(node), c1), c2);

    // Peel B's into A->B's, one ew + imp_left per copy.
    for (long i = 1; i <= n; ++i) {
        FormulaMultiset ga = cat(cat(base_a, rep(B, n - i)), rep(imp, i - 1));
        FormulaMultiset da = cat(base_s, rep(A, n - i));
        node = b.ew(node, Sequent(ga, da));
        RuleData d;
        d.A = A;
        d.B = B;
        d.g0 = ga;
        d.d0 = da;
        Hypersequent concl = context_minus_throw(
            context_minus_throw(b.concl(node), Sequent(cat(ga, B), cat(da, A))),
            Sequent(ga, da));
        concl = with_component(concl, Sequent(cat(ga, imp), da));
        node = b.add(std::move(concl), Rule::ImpLeft, std::move(d), {node});
    }

    // The untouched second premise component catches up by weakening.
    Sequent target(cat(base_a, rep(imp, n)), base_s);
    Sequent cur = c2;
    for (long i = 0; i < n; ++i) {
        RuleData d;
        d.A = imp;
        d.g0 = cur.ante;
        d.d0 = cur.succ;
        Sequent widened(cat(cur.ante, imp), cur.succ);
        Hypersequent concl = with_component(context_minus_throw(b.concl(node), cur), widened);
        node = b.add(std::move(concl), Rule::WL, std::move(d), {node});
        cur = std::move(widened);
    }
    node = b.ec(node, target);
    if (b.concl(node) != with_component(g, target))
        throw std::logic_error("imp_left_approx missed its target");
    return node;
}

}  // namespace detail

// From G | bot,n*g0,n*B => n*A,n*d0 | bot,n*g0 => n*d0
// to   G | bot,n*g0,n*(A->B) => n*d0.
inline Proof imp_left_approx(const Proof& p, long n, const Formula& A, const Formula& B,
                             const FormulaMultiset& g0, const FormulaMultiset& d0) {
    ProofBuilder b;
    size_t root = detail::embed(b, p);
    root = detail::imp_left_approx_at(b, root, n, A, B, g0, d0);
    return std::move(b).finish(root);
}

namespace detail {

inline size_t imp_right_approx_at(ProofBuilder& b, size_t n1, size_t n2, long n,
                                  const Formula& A, const Formula& B,
                                  const FormulaMultiset& g0, const FormulaMultiset& d0) {
    Formula imp = f_imp(A, B);
    FormulaMultiset base_a = cat(rep(g0, n), f_bot());
    FormulaMultiset base_s = rep(d0, n);
    auto d_comp = [&](long i) {
        return Sequent(cat(base_a, rep(A, i)), cat(base_s, rep(B, i)));
    };
    Hypersequent g = context_minus_throw(b.concl(n1), d_comp(n));
    if (context_minus_throw(b.concl(n2), d_comp(0)) != g)
        throw std::invalid_argument("imp_right_approx premises have different contexts");

    // Interpolating components between the two premises.
    std::vector<size_t> D(static_cast<size_t>(n) + 1);
    D[static_cast<size_t>(n)] = n1;
    D[0] = n2;
    for (long i = 1; i < n; ++i) {
        size_t hi = mul_at(b, n1, d_comp(n), i);
        size_t lo = mul_at(b, n2, d_comp(0), n - i);
        Sequent shi = times(d_comp(n), i), slo = times(d_comp(0), n - i);
        RuleData d;
        d.g0 = shi.ante;
        d.d0 = shi.succ;
        d.g1 = slo.ante;
        d.d1 = slo.succ;
        Sequent merged(cat(d.g0, d.g1), cat(d.d0, d.d1));
        size_t mixed = b.add(with_component(g, merged), Rule::Mix, std::move(d), {hi, lo});
        D[static_cast<size_t>(i)] = div_at(b, mixed, d_comp(i), n);
    }

    // E[i][j] proves G | bot,n*g0,iA => iB,j(A->B),n*d0; i+j <= n.
    auto e_comp = [&](long i, long j) {
        return Sequent(cat(base_a, rep(A, i)), cat(cat(base_s, rep(B, i)), rep(imp, j)));
    };
    std::vector<std::vector<size_t>> E(static_cast<size_t>(n) + 1,
                                       std::vector<size_t>(static_cast<size_t>(n) + 1, 0));
    for (long i = 0; i <= n; ++i) E[static_cast<size_t>(i)][0] = D[static_cast<size_t>(i)];
    for (long j = 0; j < n; ++j) {
        for (long i = 0; i + j < n; ++i) {
            RuleData d;
            d.A = A;
            d.B = B;
            d.g0 = cat(base_a, rep(A, i));
            d.d0 = cat(cat(base_s, rep(B, i)), rep(imp, j));
            size_t node = b.add(with_component(g, e_comp(i, j + 1)), Rule::ImpRight,
                                std::move(d),
                                {E[static_cast<size_t>(i) + 1][static_cast<size_t>(j)],
                                 E[static_cast<size_t>(i)][static_cast<size_t>(j)]});
            E[static_cast<size_t>(i)][static_cast<size_t>(j) + 1] = node;
        }
    }
    return E[0][static_cast<size_t>(n)];
}

}  // namespace detail

// From G | bot,n*g0,n*A => n*B,n*d0  and  G | bot,n*g0 => n*d0
// to   G | bot,n*g0 => n*(A->B),n*d0.
inline Proof imp_right_approx(const Proof& p1, const Proof& p2, long n, const Formula& A,
                              const Formula& B, const FormulaMultiset& g0,
                              const FormulaMultiset& d0) {
    ProofBuilder b;
    size_t n1 = detail::embed(b, p1);
    size_t n2 = detail::embed(b, p2);
    size_t root = detail::imp_right_approx_at(b, n1, n2, n, A, B, g0, d0);
    return std::move(b).finish(root);
}

namespace detail {

inline size_t exists_right_approx_at(ProofBuilder& b, size_t node, long n, const Term& t,
                                     const std::string& x, const Formula& A,
                                     const FormulaMultiset& g0, const FormulaMultiset& d0) {
    Formula ex = f_exists(x, A);
    std::map<std::string, Term> sub{{x, t}};
    Formula inst = substitute(A, sub);
    FormulaMultiset base_a = cat(rep(g0, n), f_bot());
    FormulaMultiset base_s = rep(d0, n);
    for (long i = 1; i <= n; ++i) {
        RuleData d;
        d.A = A;
        d.x = x;
        d.t = t;
        d.g0 = base_a;
        d.d0 = cat(cat(base_s, rep(inst, n - i)), rep(ex, i - 1));
        Sequent concl_comp(base_a, cat(cat(base_s, rep(inst, n - i)), rep(ex, i)));
        Hypersequent concl = with_component(
            context_minus_throw(b.concl(node), Sequent(d.g0, cat(d.d0, inst))), concl_comp);
        node = b.add(std::move(concl), Rule::ExistsRight, std::move(d), {node});
    }
    return node;
}

}  // namespace detail

// From G | bot,n*g0 => n*A[t/x],n*d0  to  G | bot,n*g0 => n*(exists x.A),n*d0.
inline Proof exists_right_approx(const Proof& p, long n, const Term& t, const std::string& x,
                                 const Formula& A, const FormulaMultiset& g0,
                                 const FormulaMultiset& d0) {
    ProofBuilder b;
    size_t root = detail::embed(b, p);
    root = detail::exists_right_approx_at(b, root, n, t, x, A, g0, d0);
    return std::move(b).finish(root);
}

// From G | bot,n*g0,n*A[c/x] => n*d0  to  G | bot,n*g0,n*(exists x.A) => n*d0,
// where c (a variable or a ground term) occurs nowhere else in the premise.
// Fresh variables are drawn from sig.
inline Proof exists_left_approx(const Proof& p, long n, const Term& c, const std::string& x,
                                const Formula& A, const FormulaMultiset& g0,
                                const FormulaMultiset& d0, Signature& sig) {
    Formula ex = f_exists(x, A);
    FormulaMultiset base_a = detail::cat(detail::rep(g0, n), f_bot());
    FormulaMultiset base_s = detail::rep(d0, n);

    std::vector<Term> vars;
    for (long i = 0; i < n; ++i) vars.push_back(Term::var(sig.fresh_var()));
    std::vector<Formula> inst;
    for (auto& v : vars) {
        std::map<std::string, Term> sub{{x, v}};
        inst.push_back(substitute(A, sub));
    }

    ProofBuilder b;
    std::vector<size_t> roots;
    for (auto& v : vars) roots.push_back(detail::embed(b, replace_term_in_proof(p, c, v)));

    auto comp_at = [&](long i) {  // bot,n*g0,n*A[v_i/x] => n*d0
        return Sequent(detail::cat(base_a, detail::rep(inst[static_cast<size_t>(i)], n)),
                       base_s);
    };
    Hypersequent g = detail::context_minus_throw(b.concl(roots[0]), comp_at(0));

    size_t node = roots[0];
    Sequent cur = comp_at(0);
    for (long i = 1; i < n; ++i) {
        RuleData d;
        d.g0 = cur.ante;
        d.d0 = cur.succ;
        d.g1 = comp_at(i).ante;
        d.d1 = comp_at(i).succ;
        Sequent merged(detail::cat(d.g0, d.g1), detail::cat(d.d0, d.d1));
        node = b.add(with_component(g, merged), Rule::Mix, std::move(d),
                     {node, roots[static_cast<size_t>(i)]});
        cur = std::move(merged);
    }

    // cur is n copies of the unit bot,n*g0,A[v_1/x],...,A[v_n/x] => n*d0.
    FormulaMultiset unit_a = base_a;
    for (auto& f : inst) unit_a.push_back(f);
    Sequent unit(unit_a, base_s);
    node = detail::div_at(b, node, unit, n);

    // Bind the fresh variables innermost-first.
    for (long i = n - 1; i >= 0; --i) {
        RuleData d;
        d.A = A;
        d.x = x;
        d.t = vars[static_cast<size_t>(i)];
        FormulaMultiset ga = base_a;
        for (long j = 0; j < i; ++j) ga.push_back(inst[static_cast<size_t>(j)]);
        for (long j = i + 1; j < n; ++j) ga.push_back(ex);
        d.g0 = ga;
        d.d0 = base_s;
        Sequent prem_comp(detail::cat(ga, inst[static_cast<size_t>(i)]), base_s);
        Sequent concl_comp(detail::cat(ga, ex), base_s);
        Hypersequent concl =
            with_component(detail::context_minus_throw(b.concl(node), prem_comp), concl_comp);
        node = b.add(std::move(concl), Rule::ExistsLeft, std::move(d), {node});
    }

    Proof out = std::move(b).finish(node);
    // Term surgery on the premise copies makes a full re-check worthwhile.
    check(out);
    return out;
}

}  // namespace glv
