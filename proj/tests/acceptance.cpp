// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "glv/macros.hpp"
#include "glv/parser.hpp"
#include "glv/reconstruct.hpp"
#include "glv/semantics.hpp"
#include "helpers.hpp"

using namespace glv;

namespace {

const char* kDrinker = "=> exists x. (A(x) -> forall y. A(y))";

// Conclusions of every proof produced while running the gate; re-audited
// semantically by the final criterion.
std::vector<Hypersequent> produced;

void record(const Proof& p) { produced.push_back(p.conclusion()); }

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& m) {
        if (ok) detail = m;
        ok = false;
    }
    void expect(bool cond, const std::string& m) {
        if (!cond) fail(m);
    }
};

std::vector<long> sizes_from(const std::vector<std::string>& lines) {
    std::vector<long> out;
    for (auto& l : lines) {
        auto p = l.rfind("size ");
        if (p != std::string::npos) out.push_back(std::stol(l.substr(p + 5)));
    }
    return out;
}

// ---------------------------------------------------------------- criteria

Check drinker_end_to_end() {
    Check c;
    Hypersequent h = parse_hypersequent(kDrinker);
    for (long n = 1; n <= 3 && c.ok; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        ProveOptions opt;
        opt.n = n;
        auto r = prove_approx(h, opt);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        c.expect(r.status == ProveResult::Proved, "n=" + std::to_string(n) + " not proved");
        if (!c.ok) break;
        try {
            check(r.proof, false);
        } catch (const std::exception& e) {
            c.fail("n=" + std::to_string(n) + " kernel: " + e.what());
            break;
        }
        c.expect(!uses_cut(r.proof), "proof uses cut");
        c.expect(r.proof.conclusion() == to_approx(h, n), "wrong conclusion");
        c.expect(secs <= 60.0, "n=" + std::to_string(n) + " exceeded 60s");
        record(r.proof);
    }
    return c;
}

Check propositional_completeness() {
    Check c;
    testgen::Rng rng(99);
    for (int i = 0; i < 200 && c.ok; ++i) {
        Hypersequent h = testgen::rand_prop_hypersequent(rng, 3, 3, 2, 4);
        PropResult r;
        try {
            r = decide_prop(h);
        } catch (const std::exception& e) {
            c.fail(print(h) + ": " + std::string(e.what()));
            break;
        }
        if (r.valid) {
            try {
                check(r.proof);
            } catch (const std::exception& e) {
                c.fail(print(h) + " kernel: " + e.what());
                break;
            }
            c.expect(r.proof.conclusion() == h, "proved wrong goal: " + print(h));
            c.expect(!sample_refute(h, 10000, 7).has_value(),
                     "sampling refuted a Valid verdict: " + print(h));
            record(r.proof);
        } else {
            c.expect(eval_hypersequent(r.countermodel, h) > Rational(0),
                     "countermodel does not refute: " + print(h));
        }
    }
    return c;
}

Check farkas_exactly_one() {
    Check c;
    testgen::Rng rng(7);
    for (int i = 0; i < 1000 && c.ok; ++i) {
        FarkasInstance in = testgen::rand_farkas(rng, 4, 6);
        FarkasResult r;
        try {
            r = solve_farkas(in);
        } catch (const std::exception& e) {
            c.fail(std::string("solver: ") + e.what());
            break;
        }
        bool fm = fm_feasible(in);
        c.expect(r.feasible == fm, "fm_feasible disagrees on instance " + std::to_string(i));
        if (r.feasible) {
            // independent re-verification of the feasible point
            for (size_t j = 0; j < in.M.size(); ++j) {
                Rational dot(0);
                for (size_t v = 0; v < in.dim; ++v) dot += in.M[j][v] * r.x[v];
                c.expect(dot <= in.a[j], "point violates a non-strict row");
            }
            for (size_t j = 0; j < in.N.size(); ++j) {
                Rational dot(0);
                for (size_t v = 0; v < in.dim; ++v) dot += in.N[j][v] * r.x[v];
                c.expect(dot < in.b[j], "point violates a strict row");
            }
        } else {
            // independent re-verification of the certificate
            bool mu_nonzero = false;
            for (auto& m : r.mu) {
                c.expect(m >= Rational(0), "negative multiplier");
                if (m != Rational(0)) mu_nonzero = true;
            }
            for (auto& l : r.lambda) c.expect(l >= Rational(0), "negative multiplier");
            for (size_t v = 0; v < in.dim; ++v) {
                Rational col(0);
                for (size_t j = 0; j < in.M.size(); ++j) col += r.lambda[j] * in.M[j][v];
                for (size_t j = 0; j < in.N.size(); ++j) col += r.mu[j] * in.N[j][v];
                c.expect(col >= Rational(0), "certificate column sum is negative");
            }
            Rational rhs(0);
            for (size_t j = 0; j < in.M.size(); ++j) rhs += r.lambda[j] * in.a[j];
            for (size_t j = 0; j < in.N.size(); ++j) rhs += r.mu[j] * in.b[j];
            c.expect(rhs < Rational(0) || (rhs == Rational(0) && mu_nonzero),
                     "certificate right-hand side not refuting");
        }
    }
    return c;
}

Check atomic_oracle_agreement() {
    Check c;
    auto side = [&](int ca, int cb, int cbot) {
        FormulaMultiset m;
        for (int i = 0; i < cbot; ++i) m.push_back(f_bot());
        for (int i = 0; i < ca; ++i) m.push_back(f_atom("A"));
        for (int i = 0; i < cb; ++i) m.push_back(f_atom("B"));
        return m;
    };
    auto vertex_valid = [&](const Hypersequent& h) {
        std::set<Formula> atoms = collect_atoms(h);
        std::vector<Formula> as(atoms.begin(), atoms.end());
        for (size_t mask = 0; mask < (size_t(1) << as.size()); ++mask) {
            Valuation v;
            for (size_t i = 0; i < as.size(); ++i)
                v.set(as[i], Rational((mask >> i) & 1));
            if (eval_hypersequent(v, h) > Rational(0)) return false;
        }
        return true;
    };
    int done = 0;
    for (int la = 0; la <= 2 && c.ok; ++la)
        for (int lb = 0; lb <= 2 && c.ok; ++lb)
            for (int lbot = 0; lbot <= 2 && c.ok; ++lbot)
                for (int ra = 0; ra <= 2 && c.ok; ++ra)
                    for (int rb = 0; rb <= 2 && c.ok; ++rb)
                        for (int rbot = 0; rbot <= 2 && c.ok; ++rbot) {
                            Hypersequent h(
                                {Sequent(side(la, lb, lbot), side(ra, rb, rbot))});
                            auto r = decide_prop(h);
                            c.expect(r.valid == vertex_valid(h),
                                     "oracle disagreement on " + print(h));
                            if (r.valid) record(r.proof);
                            ++done;
                        }
    c.expect(done == 729 || !c.ok, "wrong enumeration count");
    return c;
}

Check macro_suite() {
    Check c;
    Sequent guard = parse_sequent("bot =>");
    Formula A = f_atom("A"), B = f_atom("B");
    Formula P = f_atom("P", {Term::var("x")});
    Term tc = Term::app("c"), tw = Term::app("w");
    testgen::Rng rng(43);
    auto prove = [&](const Hypersequent& h) {
        auto r = decide_prop(h);
        if (!r.valid) throw std::logic_error("premise not provable");
        return r.proof;
    };
    try {
        for (long n = 1; n <= 5; ++n) {
            FormulaMultiset g0{f_atom("C")}, d0;
            for (int j = testgen::pick(rng, 0, 2); j > 0; --j) d0.push_back(f_atom("D"));
            FormulaMultiset base_a = detail::cat(detail::rep(g0, n), f_bot());
            FormulaMultiset base_s = detail::rep(d0, n);

            // mul / div
            Proof idp = prove(parse_hypersequent("A => A"));
            Proof m = mul(idp, parse_sequent("A => A"), n);
            check(m);
            c.expect(stats(m).dag_size == stats(idp).dag_size + static_cast<size_t>(n) - 1,
                     "mul dag growth");
            Proof dv = div(m, parse_sequent("A => A"), n);
            check(dv);
            c.expect(dv.conclusion() == idp.conclusion(), "div round-trip");
            record(m);
            record(dv);

            // left implication
            Sequent il1(detail::cat(base_a, detail::rep(B, n)),
                        detail::cat(base_s, detail::rep(A, n)));
            Sequent il2(base_a, base_s);
            Proof il = imp_left_approx(prove(Hypersequent({guard, il1, il2})), n, A, B, g0, d0);
            check(il);
            record(il);

            // right implication with the quadratic bound
            Sequent ir1(detail::cat(base_a, detail::rep(A, n)),
                        detail::cat(base_s, detail::rep(B, n)));
            Proof p1 = prove(Hypersequent({guard, ir1}));
            Proof p2 = prove(Hypersequent({guard, il2}));
            Proof ir = imp_right_approx(p1, p2, n, A, B, g0, d0);
            check(ir);
            c.expect(stats(ir).dag_size <= stats(p1).dag_size + stats(p2).dag_size +
                                               static_cast<size_t>(8 * n * n + 8),
                     "right implication left the quadratic envelope");
            record(ir);

            // right exists
            Formula pinst = f_atom("P", {tc});
            Sequent er(base_a, detail::cat(base_s, detail::rep(pinst, n)));
            Proof er_p = exists_right_approx(prove(Hypersequent({guard, er})), n, tc, "x", P,
                                             g0, d0);
            check(er_p);
            record(er_p);

            // left exists
            Signature sig;
            Formula winst = f_atom("P", {tw});
            Sequent el(detail::cat(base_a, detail::rep(winst, n)), base_s);
            Proof el_p = exists_left_approx(prove(Hypersequent({guard, el})), n, tw, "x", P,
                                            g0, d0, sig);
            check(el_p);
            record(el_p);
        }
        // eigencondition violation: the witness term also occurs in the context
        {
            long n = 2;
            Signature sig;
            FormulaMultiset g0{f_atom("Q", {tw})}, d0{f_atom("Q", {tw})};
            FormulaMultiset base_a = detail::cat(detail::rep(g0, n), f_bot());
            Sequent el(detail::cat(base_a, detail::rep(f_atom("P", {tw}), n)),
                       detail::rep(d0, n));
            Proof p = prove(Hypersequent({guard, el}));
            bool threw = false;
            try {
                exists_left_approx(p, n, tw, "x", P, g0, d0, sig);
            } catch (const std::exception&) {
                threw = true;
            }
            c.expect(threw, "eigencondition violation was accepted");
        }
    } catch (const std::exception& e) {
        c.fail(e.what());
    }
    return c;
}

Check skolem_sync() {
    Check c;
    auto one = [&](const Hypersequent& h) {
        SkolemTree t = build_tree(h, Signature{});
        auto r = check_sync(t);
        c.expect(r.ok, print(h) + ": " + r.message);
        c.expect(detail::is_clean(t.levels.back()[0].hyp()),
                 print(h) + ": leftmost leaf not quantifier-free");
    };
    one(parse_hypersequent(kDrinker));
    testgen::Rng rng(2024);
    for (int i = 0; i < 50 && c.ok; ++i)
        one(testgen::rand_closed_hypersequent(rng, 2, 2, 3));
    return c;
}

Check reconstruction_invariants() {
    Check c;
    auto run_one = [&](const Hypersequent& h, const ProveOptions& base) {
        std::vector<std::string> lines;
        ProveOptions opt = base;
        opt.trace = [&](const std::string& m) { lines.push_back(m); };
        ProveResult r;
        try {
            r = prove_approx(h, opt);
        } catch (const std::exception& e) {
            c.fail(print(h) + ": " + std::string(e.what()));
            return false;
        }
        if (r.status != ProveResult::Proved) return false;
        if (has_quantifier(h)) {
            auto mus = sizes_from(lines);
            c.expect(!mus.empty(), "no measure trace for " + print(h));
            for (size_t i = 1; i < mus.size(); ++i)
                c.expect(mus[i] == mus[i - 1] - 1,
                         "measure did not decrease by one on " + print(h));
        }
        c.expect(r.proof.conclusion() == to_approx(h, opt.n),
                 "final conclusion mismatch on " + print(h));
        record(r.proof);
        return true;
    };

    Hypersequent drinker = parse_hypersequent(kDrinker);
    for (long n = 1; n <= 3 && c.ok; ++n) {
        ProveOptions opt;
        opt.n = n;
        c.expect(run_one(drinker, opt), "drinker run failed at n=" + std::to_string(n));
    }
    testgen::Rng rng(5150);
    int completed = 0;
    for (int i = 0; i < 20 && c.ok; ++i) {
        Hypersequent h = testgen::rand_closed_hypersequent(rng, 2, 2, 2, 4);
        ProveOptions opt;
        opt.n = 1 + i % 2;
        opt.max_k = 2;
        opt.max_depth = 1;
        opt.lp_budget = 3000;
        if (run_one(h, opt)) ++completed;
    }
    c.expect(completed > 0, "no random input completed within bounds");
    return c;
}

Check soundness_regression() {
    Check c;
    std::set<Hypersequent> seen;
    std::vector<Rational> grid{Rational(0), Rational(1, 2), Rational(1)};
    for (auto& h : produced) {
        if (!seen.insert(h).second) continue;
        if (has_quantifier(h) || !free_vars(h).empty()) {
            auto bad = refute_on_structures(h, 2, grid);
            c.expect(!bad.has_value(), "structure refutes " + print(h));
        } else {
            auto bad = sample_refute(h, 10000, 11);
            c.expect(!bad.has_value(), "valuation refutes " + print(h));
        }
        if (!c.ok) break;
    }
    c.expect(!produced.empty(), "no proofs were produced");
    return c;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Check (*fn)();
    };
    const Entry entries[] = {
        {"1 drinker formula end-to-end at n=1,2,3", drinker_end_to_end},
        {"2 propositional completeness on 200 random inputs", propositional_completeness},
        {"3 farkas exactly-one on 1000 random instances", farkas_exactly_one},
        {"4 atomic sequents agree with the vertex oracle", atomic_oracle_agreement},
        {"5 macro suite at n=1..5", macro_suite},
        {"6 removal tree sync on drinker and 50 random inputs", skolem_sync},
        {"7 reconstruction invariants", reconstruction_invariants},
        {"8 soundness regression over all produced proofs", soundness_regression},
    };
    int failures = 0;
    for (auto& e : entries) {
        Check c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.fail(ex.what());
        }
        std::cout << "criterion " << e.name << ": " << (c.ok ? "pass" : "FAIL");
        if (!c.ok) std::cout << " (" << c.detail << ")";
        std::cout << std::endl;
        if (!c.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
