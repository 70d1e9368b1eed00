#pragma once

// Exact-rational linear programming for the mixed strict/non-strict system
//
//   find x >= 0 with  M x <= a  and  N x < b  (componentwise strict),
//
// returning either a feasible point or a nonnegative certificate (lambda, mu)
// with lambda^T M + mu^T N >= 0, lambda^T a + mu^T b <= 0, and additionally
// lambda^T a + mu^T b < 0 or mu != 0. Exactly one of the two exists.
//
// The solver is a dense two-phase primal simplex over big rationals with
// Bland's anti-cycling rule, applied to
//
//   maximize s  subject to  M x <= a,  N x + s*1 <= b,  s <= 1,  x, s >= 0.
//
// Strict feasibility holds iff the optimum is positive; certificates are read
// off the dual values (objective-row entries of the slack columns). Every
// result is re-verified against the defining inequalities before it is
// returned. fm_feasible is an independent Fourier-Motzkin decision procedure
// used to cross-check the simplex answer in tests.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "glv/rational.hpp"

namespace glv {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

struct FarkasInstance {
    size_t dim = 0;  // number of variables
    Mat M;           // non-strict rows, each of length dim
    Vec a;
    Mat N;           // strict rows
    Vec b;
};

struct FarkasResult {
    bool feasible = false;
    Vec x;       // feasible: strictly feasible point, length dim
    Vec lambda;  // infeasible: multipliers for the non-strict rows
    Vec mu;      // infeasible: multipliers for the strict rows
};

inline Rational dot(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("dot: size mismatch");
    Rational s(0);
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline bool verify(const FarkasInstance& in, const FarkasResult& r) {
    if (in.M.size() != in.a.size() || in.N.size() != in.b.size()) return false;
    if (r.feasible) {
        if (r.x.size() != in.dim) return false;
        for (auto& xi : r.x)
            if (xi < Rational(0)) return false;
        for (size_t i = 0; i < in.M.size(); ++i)
            if (dot(in.M[i], r.x) > in.a[i]) return false;
        for (size_t i = 0; i < in.N.size(); ++i)
            if (dot(in.N[i], r.x) >= in.b[i]) return false;
        return true;
    }
    if (r.lambda.size() != in.M.size() || r.mu.size() != in.N.size()) return false;
    for (auto& l : r.lambda)
        if (l < Rational(0)) return false;
    bool mu_pos = false;
    for (auto& m : r.mu) {
        if (m < Rational(0)) return false;
        if (m > Rational(0)) mu_pos = true;
    }
    for (size_t j = 0; j < in.dim; ++j) {
        Rational col(0);
        for (size_t i = 0; i < in.M.size(); ++i) col += r.lambda[i] * in.M[i][j];
        for (size_t i = 0; i < in.N.size(); ++i) col += r.mu[i] * in.N[i][j];
        if (col < Rational(0)) return false;
    }
    Rational t = dot(r.lambda, in.a) + dot(r.mu, in.b);
    if (t > Rational(0)) return false;
    return t < Rational(0) || mu_pos;
}

namespace detail {

// Primal simplex for: maximize c^T z subject to A z <= beta, z >= 0.
// Reports the optimum with primal and dual solutions, or infeasibility with
// dual multipliers y >= 0 satisfying y^T A >= 0 and y^T beta < 0.
struct SimplexResult {
    enum Status { Optimal, Infeasible } status = Optimal;
    Rational opt;
    Vec primal;  // length n (Optimal only)
    Vec dual;    // length m, both outcomes
};

class Simplex {
  public:
    Simplex(const Mat& A, const Vec& beta, const Vec& c)
        : n_(c.size()), m_(A.size()), cost_(c) {
        // Columns: [0,n) structural, [n,n+m) slack, optional artificial,
        // last column is the right-hand side.
        for (size_t i = 0; i < m_; ++i) {
            if (A[i].size() != n_) throw std::invalid_argument("simplex: row size mismatch");
            Vec row(n_ + m_ + 2, Rational(0));
            for (size_t j = 0; j < n_; ++j) row[j] = A[i][j];
            row[n_ + i] = Rational(1);
            row.back() = beta[i];
            rows_.push_back(std::move(row));
            basis_.push_back(n_ + i);
        }
        obj_.assign(n_ + m_ + 2, Rational(0));
    }

    SimplexResult solve() {
        bool need_phase1 = false;
        for (auto& r : rows_)
            if (r.back() < Rational(0)) need_phase1 = true;

        if (need_phase1) {
            art_ = n_ + m_;
            for (auto& r : rows_) r[art_] = Rational(-1);
            std::fill(obj_.begin(), obj_.end(), Rational(0));
            obj_[art_] = Rational(1);  // maximize -artificial
            size_t worst = 0;
            for (size_t i = 1; i < rows_.size(); ++i)
                if (rows_[i].back() < rows_[worst].back()) worst = i;
            pivot(worst, art_);
            run();
            if (obj_.back() < Rational(0)) {
                SimplexResult res;
                res.status = SimplexResult::Infeasible;
                res.opt = obj_.back();
                res.dual = read_dual();
                return res;
            }
            drop_artificial();
        }

        std::fill(obj_.begin(), obj_.end(), Rational(0));
        for (size_t j = 0; j < n_; ++j) obj_[j] = -cost_[j];
        for (size_t i = 0; i < rows_.size(); ++i) {
            Rational coef = obj_[basis_[i]];
            if (coef != Rational(0))
                for (size_t j = 0; j < obj_.size(); ++j) obj_[j] -= coef * rows_[i][j];
        }
        run();

        SimplexResult res;
        res.opt = obj_.back();
        res.primal.assign(n_, Rational(0));
        for (size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] < n_) res.primal[basis_[i]] = rows_[i].back();
        res.dual = read_dual();
        return res;
    }

  private:
    size_t n_, m_;
    size_t art_ = static_cast<size_t>(-1);
    Vec cost_;
    Mat rows_;
    Vec obj_;
    std::vector<size_t> basis_;

    size_t ncols() const { return n_ + m_ + 2; }

    void pivot(size_t r, size_t c) {
        Rational p = rows_[r][c];
        for (auto& v : rows_[r]) v /= p;
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (i == r || rows_[i][c] == Rational(0)) continue;
            Rational f = rows_[i][c];
            for (size_t j = 0; j < ncols(); ++j) rows_[i][j] -= f * rows_[r][j];
        }
        if (obj_[c] != Rational(0)) {
            Rational f = obj_[c];
            for (size_t j = 0; j < ncols(); ++j) obj_[j] -= f * rows_[r][j];
        }
        basis_[r] = c;
    }

    void run() {
        size_t limit = ncols() - 1;
        while (true) {
            size_t enter = limit;
            for (size_t j = 0; j < limit; ++j) {
                if (obj_[j] < Rational(0)) {  // Bland: lowest eligible index
                    enter = j;
                    break;
                }
            }
            if (enter == limit) return;
            size_t leave = rows_.size();
            Rational best(0);
            for (size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][enter] <= Rational(0)) continue;
                Rational ratio = rows_[i].back() / rows_[i][enter];
                if (leave == rows_.size() || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave]))
                    leave = i, best = ratio;
            }
            if (leave == rows_.size())
                throw std::logic_error("simplex: unbounded objective");
            pivot(leave, enter);
        }
    }

    // After a zero-optimum phase 1, pivot the artificial variable out of the
    // basis (or drop its row if that row has become vacuous) and clear its
    // column so phase 2 never re-enters it.
    void drop_artificial() {
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (basis_[i] != art_) continue;
            size_t c = n_ + m_;
            for (size_t j = 0; j < n_ + m_; ++j)
                if (rows_[i][j] != Rational(0)) {
                    c = j;
                    break;
                }
            if (c < n_ + m_) {
                pivot(i, c);
            } else {
                rows_.erase(rows_.begin() + static_cast<long>(i));
                basis_.erase(basis_.begin() + static_cast<long>(i));
            }
            break;
        }
        for (auto& r : rows_) r[art_] = Rational(0);
        art_ = static_cast<size_t>(-1);
    }

    // Dual values live in the objective row under the slack columns.
    Vec read_dual() const {
        Vec y(m_);
        for (size_t i = 0; i < m_; ++i) y[i] = obj_[n_ + i];
        return y;
    }
};

}  // namespace detail

// Scales a nonnegative rational multiplier pair to coprime integers. The
// certificate conditions are homogeneous, so this preserves them.
inline void integerize(Vec& lambda, Vec& mu) {
    BigInt l(1);
    for (auto& v : lambda) l = boost::multiprecision::lcm(l, v.denominator());
    for (auto& v : mu) l = boost::multiprecision::lcm(l, v.denominator());
    BigInt g(0);
    auto scale = [&](Vec& vec) {
        for (auto& v : vec) {
            v *= Rational(l);
            g = boost::multiprecision::gcd(g, v.numerator());
        }
    };
    scale(lambda);
    scale(mu);
    if (g == 0) throw std::invalid_argument("integerize: zero multiplier pair");
    for (auto& v : lambda) v /= Rational(g);
    for (auto& v : mu) v /= Rational(g);
}

inline FarkasResult solve_farkas(const FarkasInstance& in) {
    size_t p = in.M.size(), q = in.N.size();
    if (in.a.size() != p || in.b.size() != q)
        throw std::invalid_argument("farkas: vector/matrix size mismatch");

    // z = (x, s); rows: M x <= a, N x + s <= b, s <= 1.
    Mat A;
    Vec beta;
    for (size_t i = 0; i < p; ++i) {
        Vec row = in.M[i];
        row.push_back(Rational(0));
        A.push_back(std::move(row));
        beta.push_back(in.a[i]);
    }
    for (size_t i = 0; i < q; ++i) {
        Vec row = in.N[i];
        row.push_back(Rational(1));
        A.push_back(std::move(row));
        beta.push_back(in.b[i]);
    }
    Vec cap(in.dim + 1, Rational(0));
    cap[in.dim] = Rational(1);
    A.push_back(std::move(cap));
    beta.push_back(Rational(1));

    Vec c(in.dim + 1, Rational(0));
    c[in.dim] = Rational(1);

    detail::Simplex sx(A, beta, c);
    auto sol = sx.solve();

    FarkasResult r;
    if (sol.status == detail::SimplexResult::Optimal && sol.opt > Rational(0)) {
        r.feasible = true;
        r.x.assign(sol.primal.begin(), sol.primal.begin() + static_cast<long>(in.dim));
    } else {
        r.feasible = false;
        r.lambda.assign(sol.dual.begin(), sol.dual.begin() + static_cast<long>(p));
        r.mu.assign(sol.dual.begin() + static_cast<long>(p),
                    sol.dual.begin() + static_cast<long>(p + q));
        integerize(r.lambda, r.mu);
    }
    if (!verify(in, r))
        throw std::logic_error("farkas: solver produced an unverifiable result");
    return r;
}

// ------------------------------------------- Fourier-Motzkin cross-check

namespace detail {

struct FMIneq {
    Vec coef;
    Rational rhs;
    bool strict;
};

}  // namespace detail

// Decides feasibility of { x >= 0, M x <= a, N x < b } by variable
// elimination with strictness tracking. Exponential in general; intended for
// small instances as an oracle independent of the simplex code.
inline bool fm_feasible(const FarkasInstance& in) {
    std::vector<detail::FMIneq> sys;
    for (size_t i = 0; i < in.M.size(); ++i) sys.push_back({in.M[i], in.a[i], false});
    for (size_t i = 0; i < in.N.size(); ++i) sys.push_back({in.N[i], in.b[i], true});
    for (size_t j = 0; j < in.dim; ++j) {
        Vec row(in.dim, Rational(0));
        row[j] = Rational(-1);
        sys.push_back({std::move(row), Rational(0), false});
    }

    for (size_t v = in.dim; v-- > 0;) {
        std::vector<detail::FMIneq> pos, neg, rest;
        for (auto& iq : sys) {
            if (iq.coef[v] > Rational(0))
                pos.push_back(iq);
            else if (iq.coef[v] < Rational(0))
                neg.push_back(iq);
            else
                rest.push_back(iq);
        }
        for (auto& pi : pos) {
            for (auto& ni : neg) {
                detail::FMIneq comb;
                comb.coef.assign(in.dim, Rational(0));
                Rational cp = pi.coef[v], cn = -ni.coef[v];
                for (size_t j = 0; j < in.dim; ++j)
                    comb.coef[j] = cn * pi.coef[j] + cp * ni.coef[j];
                comb.rhs = cn * pi.rhs + cp * ni.rhs;
                comb.strict = pi.strict || ni.strict;
                comb.coef[v] = Rational(0);
                rest.push_back(std::move(comb));
            }
        }
        sys = std::move(rest);
    }

    for (auto& iq : sys) {
        if (iq.strict ? (iq.rhs <= Rational(0)) : (iq.rhs < Rational(0))) return false;
    }
    return true;
}

}  // namespace glv
