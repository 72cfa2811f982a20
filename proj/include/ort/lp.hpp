#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ort/errors.hpp"

// Dense two-phase revised simplex for the roof LPs: a handful of equality
// rows (populations, coherences, normalization), one inequality row with a
// configurable sense, and up to ~2e6 nonnegative columns. Row counts are
// tiny, so the basis inverse is recomputed from scratch every iteration;
// the cost is dominated by the pricing pass over the columns. Dantzig
// pricing with a switch to Bland's rule after degenerate stalls.

namespace ort {

struct LinearProgram {
    int num_eq = 0;              // equality rows
    bool ineq_is_le = true;      // sense of the single inequality row
    double ineq_rhs = 0.0;
    std::vector<double> eq_rhs;  // size num_eq
    // column-major storage, stride num_eq+1: eq coefficients then the
    // inequality coefficient
    std::vector<double> cols;
    std::vector<double> cost;

    int stride() const { return num_eq + 1; }
    int num_cols() const { return static_cast<int>(cost.size()); }
    void push_column(const double* coeffs, double c) {
        cols.insert(cols.end(), coeffs, coeffs + stride());
        cost.push_back(c);
    }
};

struct LpResult {
    bool feasible = false;
    double objective = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> weights;  // (column, value), value > 0
    long iterations = 0;
};

namespace detail {

class SimplexTableau {
  public:
    SimplexTableau(const LinearProgram& lp) : lp_(lp), m_(lp.num_eq + 1) {
        n_ = lp.num_cols() + 1;  // one slack column for the inequality row
        b_.assign(lp.eq_rhs.begin(), lp.eq_rhs.end());
        b_.push_back(lp.ineq_rhs);
        row_sign_.assign(m_, 1.0);
        for (int r = 0; r < m_; ++r)
            if (b_[r] < 0.0) {
                row_sign_[r] = -1.0;
                b_[r] = -b_[r];
            }
        basis_.resize(m_);
        for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;  // artificials
    }

    // column entries of the standard-form matrix (after row sign flips)
    double entry(int r, int j) const {
        double v;
        if (j < lp_.num_cols()) {
            v = lp_.cols[static_cast<size_t>(j) * m_ + r];
        } else if (j == lp_.num_cols()) {
            v = (r == m_ - 1) ? (lp_.ineq_is_le ? 1.0 : -1.0) : 0.0;
        } else {
            return (j - n_ == r) ? 1.0 : 0.0;  // artificial
        }
        return v * row_sign_[r];
    }

    double cost_of(int j, bool phase1) const {
        if (phase1) return j >= n_ ? 1.0 : 0.0;
        if (j >= n_) return 0.0;
        return j < lp_.num_cols() ? lp_.cost[j] : 0.0;
    }

    void refactorize() {
        // binv_ = inverse of the basis matrix, Gauss-Jordan with partial pivot
        std::vector<double> mat(static_cast<size_t>(m_) * m_);
        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            binv_[static_cast<size_t>(r) * m_ + r] = 1.0;
            for (int c = 0; c < m_; ++c) mat[static_cast<size_t>(r) * m_ + c] = entry(r, basis_[c]);
        }
        for (int c = 0; c < m_; ++c) {
            int piv = c;
            for (int r = c + 1; r < m_; ++r)
                if (std::abs(mat[static_cast<size_t>(r) * m_ + c]) >
                    std::abs(mat[static_cast<size_t>(piv) * m_ + c]))
                    piv = r;
            if (std::abs(mat[static_cast<size_t>(piv) * m_ + c]) < 1e-13)
                throw NumericalStall("singular simplex basis");
            if (piv != c)
                for (int k = 0; k < m_; ++k) {
                    std::swap(mat[static_cast<size_t>(piv) * m_ + k],
                              mat[static_cast<size_t>(c) * m_ + k]);
                    std::swap(binv_[static_cast<size_t>(piv) * m_ + k],
                              binv_[static_cast<size_t>(c) * m_ + k]);
                }
            const double d = mat[static_cast<size_t>(c) * m_ + c];
            for (int k = 0; k < m_; ++k) {
                mat[static_cast<size_t>(c) * m_ + k] /= d;
                binv_[static_cast<size_t>(c) * m_ + k] /= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == c) continue;
                const double f = mat[static_cast<size_t>(r) * m_ + c];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    mat[static_cast<size_t>(r) * m_ + k] -= f * mat[static_cast<size_t>(c) * m_ + k];
                    binv_[static_cast<size_t>(r) * m_ + k] -= f * binv_[static_cast<size_t>(c) * m_ + k];
                }
            }
        }
    }

    std::vector<double> basic_solution() const {
        std::vector<double> xb(m_, 0.0);
        for (int r = 0; r < m_; ++r)
            for (int k = 0; k < m_; ++k) xb[r] += binv_[static_cast<size_t>(r) * m_ + k] * b_[k];
        return xb;
    }

    // One simplex phase; returns objective value.
    double run_phase(bool phase1, long& iterations) {
        constexpr double kTol = 1e-9;
        const long cap = 200000;
        int stall = 0;
        double last_obj = std::numeric_limits<double>::infinity();
        while (true) {
            if (++iterations > cap) throw NumericalStall("simplex iteration cap reached");
            refactorize();
            std::vector<double> xb = basic_solution();
            double obj = 0.0;
            for (int r = 0; r < m_; ++r) obj += cost_of(basis_[r], phase1) * xb[r];
            if (obj < last_obj - kTol)
                stall = 0;
            else
                ++stall;
            last_obj = obj;
            const bool bland = stall > 30;

            // y = c_B B^{-1}
            std::vector<double> y(m_, 0.0);
            for (int r = 0; r < m_; ++r) {
                const double cb = cost_of(basis_[r], phase1);
                if (cb == 0.0) continue;
                for (int k = 0; k < m_; ++k) y[k] += cb * binv_[static_cast<size_t>(r) * m_ + k];
            }

            int enter = -1;
            double best = -kTol;
            const int scan_end = phase1 ? n_ : n_;  // artificials never re-enter
            for (int j = 0; j < scan_end; ++j) {
                double d = cost_of(j, phase1);
                if (j < lp_.num_cols()) {
                    const double* col = &lp_.cols[static_cast<size_t>(j) * m_];
                    for (int r = 0; r < m_; ++r) d -= y[r] * row_sign_[r] * col[r];
                } else {
                    const int r = m_ - 1;
                    d -= y[r] * row_sign_[r] * (lp_.ineq_is_le ? 1.0 : -1.0);
                }
                if (d < (bland ? -kTol : best)) {
                    enter = j;
                    best = d;
                    if (bland) break;
                }
            }
            if (enter < 0) return last_obj;

            // direction d = B^{-1} A_enter
            std::vector<double> dir(m_, 0.0);
            for (int r = 0; r < m_; ++r)
                for (int k = 0; k < m_; ++k)
                    dir[r] += binv_[static_cast<size_t>(r) * m_ + k] * entry(k, enter);

            // Basic artificials must stay at zero: a nonzero direction entry
            // there forces a degenerate pivot that ejects the artificial.
            int leave = -1;
            if (!phase1) {
                for (int r = 0; r < m_; ++r)
                    if (basis_[r] >= n_ && std::abs(dir[r]) > kTol && xb[r] <= kTol) {
                        leave = r;
                        break;
                    }
            }
            if (leave < 0) {
                double tmin = std::numeric_limits<double>::infinity();
                for (int r = 0; r < m_; ++r) {
                    if (dir[r] > kTol) {
                        const double t = xb[r] / dir[r];
                        if (t < tmin - 1e-12 ||
                            (t < tmin + 1e-12 && (leave < 0 || basis_[r] < basis_[leave]))) {
                            tmin = t;
                            leave = r;
                        }
                    }
                }
                if (leave < 0) {
                    if (phase1) throw NumericalStall("phase-1 direction unbounded");
                    throw Unbounded("roof LP is unbounded; objective construction bug");
                }
            }
            basis_[leave] = enter;
        }
    }

    LpResult solve() {
        LpResult res;
        long iters = 0;
        const double p1 = run_phase(true, iters);
        if (p1 > 1e-9) {
            res.feasible = false;
            res.iterations = iters;
            return res;
        }
        const double obj = run_phase(false, iters);
        res.feasible = true;
        res.objective = obj;
        res.iterations = iters;
        refactorize();
        const std::vector<double> xb = basic_solution();
        for (int r = 0; r < m_; ++r)
            if (basis_[r] < lp_.num_cols() && xb[r] > 1e-12)
                res.weights.push_back({basis_[r], xb[r]});
        return res;
    }

  private:
    const LinearProgram& lp_;
    int m_;
    int n_;
    std::vector<double> b_;
    std::vector<double> row_sign_;
    std::vector<int> basis_;
    std::vector<double> binv_;
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp) {
    detail::SimplexTableau t(lp);
    return t.solve();
}

}  // namespace ort
