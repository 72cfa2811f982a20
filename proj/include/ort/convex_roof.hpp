#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <vector>

#include "ort/eigen.hpp"
#include "ort/errors.hpp"
#include "ort/fock.hpp"
#include "ort/lp.hpp"
#include "ort/measures.hpp"

// Numerical minimization of the roof objective for rank-J mixtures whose
// special basis states are centered at the origin and whose a / a^2 matrix
// elements share one phase. Decomposition candidates
//   |phi> = sum_j x_j e^{i theta_j} |psi_j>,  x_j >= 0, sum x_j^2 = 1
// are sampled on a deterministic grid; weights are then optimized by linear
// programming, once per sign resolution of the witness term (L+ / L-).

namespace ort {

// ---------------------------------------------------------------------------
// Scalar description of the basis and target state.

struct ScalarBasis {
    int J = 0;
    // r[k][j] = |<psi_k|a|psi_j>|; diagonals are zero by assumption.
    std::vector<std::vector<double>> r;
    // s2diag[j] = |<psi_j|a^2|psi_j>|, s2cross[k][j] = |<psi_k|a^2|psi_j>|
    std::vector<double> s2diag;
    std::vector<std::vector<double>> s2cross;
    // cross a^2 elements need the common phase only where the target has
    // coherence; misaligned ones are recorded and rejected in build_lp
    std::vector<std::vector<bool>> s2cross_aligned;
    std::vector<double> ndiag;  // <psi_j|n|psi_j>
    std::optional<std::vector<StateVector>> source;
};

struct RoofTarget {
    ScalarBasis basis;
    std::vector<double> populations;          // p_j, sums to 1
    std::vector<std::vector<double>> coh;     // f_jk >= 0 real, upper triangle used
    double mean_n() const {
        double s = 0.0;
        for (int j = 0; j < basis.J; ++j) s += populations[j] * basis.ndiag[j];
        return s;
    }
    double a2_abs() const {
        double s = 0.0;
        for (int j = 0; j < basis.J; ++j) s += populations[j] * basis.s2diag[j];
        for (int j = 0; j < basis.J; ++j)
            for (int k = 0; k < basis.J; ++k)
                if (j != k) s += coh[std::min(j, k)][std::max(j, k)] * basis.s2cross[k][j];
        return s;
    }
};

/// Builds the scalar basis from source states, verifying the special-basis
/// conditions: orthonormality, <psi_j|a|psi_j> = 0, and one common phase mu
/// across all nonzero a and a^2 matrix elements.
inline ScalarBasis scalar_basis_from_states(const std::vector<StateVector>& states) {
    const int J = static_cast<int>(states.size());
    if (J < 2 || J > 4) throw ConditionViolation("roof solver supports rank 2..4");
    ScalarBasis sb;
    sb.J = J;
    sb.r.assign(J, std::vector<double>(J, 0.0));
    sb.s2diag.assign(J, 0.0);
    sb.s2cross.assign(J, std::vector<double>(J, 0.0));
    sb.ndiag.assign(J, 0.0);

    sb.s2cross_aligned.assign(J, std::vector<bool>(J, true));
    std::vector<StateVector> low(J);
    for (int j = 0; j < J; ++j) low[j] = ladder_annihilate(states[j]);

    std::vector<double> a_args, a2_diag_args;
    std::vector<std::vector<cplx>> a2_cross(J, std::vector<cplx>(J, cplx{0, 0}));
    for (int j = 0; j < J; ++j) {
        for (int k = 0; k < J; ++k) {
            if (j == k) {
                if (std::abs(inner(states[j], low[j])) > 1e-10)
                    throw ConditionViolation("basis state not centered at the origin");
            } else {
                if (std::abs(inner(states[j], states[k])) > 1e-10)
                    throw ConditionViolation("basis states are not orthogonal");
                const cplx a_jk = inner(states[j], low[k]);
                sb.r[j][k] = std::abs(a_jk);
                if (sb.r[j][k] > 1e-12) a_args.push_back(std::arg(a_jk));
            }
            const cplx a2_jk = inner(states[j], ladder_annihilate(low[k]));
            if (j == k) {
                sb.s2diag[j] = std::abs(a2_jk);
                if (sb.s2diag[j] > 1e-12) a2_diag_args.push_back(std::arg(a2_jk));
            } else {
                sb.s2cross[j][k] = std::abs(a2_jk);
                a2_cross[j][k] = a2_jk;
            }
        }
        sb.ndiag[j] = expectations(states[j]).mean_n;
    }
    // One phase mu across every a-element, 2 mu across every a^2 diagonal;
    // zero elements impose nothing. Cross a^2 elements enter the state only
    // through coherences, so misalignment there is recorded per pair and
    // rejected later only if the target carries that coherence.
    const double tau = 2.0 * std::numbers::pi;
    auto angdist = [tau](double a, double b) {
        double d = std::fmod(a - b, tau);
        if (d < 0.0) d += tau;
        return std::min(d, tau - d);
    };
    double mu = 0.0;
    if (!a_args.empty())
        mu = a_args.front();
    else if (!a2_diag_args.empty())
        mu = 0.5 * a2_diag_args.front();
    for (double a : a_args)
        if (angdist(a, mu) > 1e-8)
            throw ConditionViolation("a matrix elements do not share a common phase");
    for (double a : a2_diag_args)
        if (angdist(a, 2.0 * mu) > 1e-8)
            throw ConditionViolation("diagonal a^2 elements do not carry twice the common phase");
    for (int j = 0; j < J; ++j)
        for (int k = 0; k < J; ++k)
            if (j != k && sb.s2cross[j][k] > 1e-12)
                sb.s2cross_aligned[j][k] = angdist(std::arg(a2_cross[j][k]), 2.0 * mu) <= 1e-8;
    sb.source = states;
    return sb;
}

// ---------------------------------------------------------------------------
// Candidate family.

struct Candidate {
    std::vector<double> x;      // amplitudes, sum x^2 = 1
    std::vector<double> theta;  // theta[0] = 0
    bool self_paired = false;   // theta == -theta (mod 2pi)
    double step_x = 0.0;        // grid steps used to place this candidate
    double step_theta = 0.0;
};

struct RoofOptions {
    int grid_x = 0;       // 0: per-rank default (J=2: 41, J=3: 21)
    int grid_theta = 0;   // 0: per-rank default (J=2: 64, J=3: 24)
    int refine_rounds = 3;
    double gap_tol = 1e-3;
    long candidate_cap = 2000000;
};

inline int default_grid_x(int J) { return J <= 2 ? 41 : 21; }
inline int default_grid_theta(int J) { return J <= 2 ? 64 : 24; }

struct CandidateFamily {
    int J = 0;
    std::vector<Candidate> entries;  // each entry represents {theta, -theta}
};

namespace detail {

inline void squared_simplex_grid(int J, int gx, std::vector<std::vector<double>>& out) {
    // all compositions of gx-1 into J parts, as squared amplitudes
    std::vector<int> comp(J, 0);
    std::function<void(int, int)> rec = [&](int idx, int rest) {
        if (idx == J - 1) {
            comp[idx] = rest;
            std::vector<double> t(J);
            for (int j = 0; j < J; ++j) t[j] = static_cast<double>(comp[j]) / (gx - 1);
            out.push_back(std::move(t));
            return;
        }
        for (int k = 0; k <= rest; ++k) {
            comp[idx] = k;
            rec(idx + 1, rest - k);
        }
    };
    rec(0, gx - 1);
}

}  // namespace detail

/// Deterministic product grid over the amplitude simplex and the torus of
/// relative phases, with theta -> -theta symmetry: every generated entry
/// stands for the pair {theta, -theta}; entries whose partner coincides
/// with themselves are flagged self_paired.
inline CandidateFamily sample_candidates(int J, const RoofOptions& opt) {
    if (J < 2 || J > 4) throw ConditionViolation("roof solver supports rank 2..4");
    const int gx = opt.grid_x > 0 ? opt.grid_x : default_grid_x(J);
    const int gt = opt.grid_theta > 0 ? opt.grid_theta : default_grid_theta(J);
    if (gx < 2 || gt < 2) throw InvalidParameter("grid resolutions must be >= 2");

    std::vector<std::vector<double>> ts;
    detail::squared_simplex_grid(J, gx, ts);

    // canonical theta index tuples: keep tuple <= negated tuple
    std::vector<std::pair<std::vector<int>, bool>> thetas;
    std::vector<int> idx(J - 1, 0);
    while (true) {
        std::vector<int> neg(J - 1);
        for (int i = 0; i < J - 1; ++i) neg[i] = (gt - idx[i]) % gt;
        if (idx <= neg) thetas.push_back({idx, idx == neg});
        int i = J - 2;
        while (i >= 0 && ++idx[i] == gt) idx[i--] = 0;
        if (i < 0) break;
    }

    const long total = static_cast<long>(ts.size()) * static_cast<long>(thetas.size());
    if (total > opt.candidate_cap)
        throw GridTooLarge("candidate grid exceeds the configured cap");

    CandidateFamily fam;
    fam.J = J;
    fam.entries.reserve(total);
    const double hx = 1.0 / (gx - 1);
    const double ht = 2.0 * std::numbers::pi / gt;
    for (const auto& t : ts) {
        std::vector<double> x(J);
        for (int j = 0; j < J; ++j) x[j] = std::sqrt(t[j]);
        for (const auto& [ti, selfp] : thetas) {
            Candidate c;
            c.x = x;
            c.theta.resize(J);
            c.theta[0] = 0.0;
            for (int i = 0; i < J - 1; ++i) c.theta[i + 1] = ht * ti[i];
            c.self_paired = selfp;
            c.step_x = hx;
            c.step_theta = ht;
            fam.entries.push_back(std::move(c));
        }
    }
    return fam;
}

enum class RoofBranch { Lplus, Lminus };

namespace detail {

struct ColumnValues {
    double meas;  // |<phi|a|phi>|^2
    double wit;   // Re(e^{-2i mu} <phi|a|phi>^2)
};

inline ColumnValues candidate_values(const Candidate& c, const ScalarBasis& sb) {
    cplx aa{0.0, 0.0};
    for (int j = 0; j < sb.J; ++j)
        for (int k = 0; k < sb.J; ++k)
            if (j != k)
                aa += c.x[j] * c.x[k] * std::exp(cplx{0.0, c.theta[j] - c.theta[k]}) *
                      sb.r[k][j];
    return {std::norm(aa), (aa * aa).real()};
}

}  // namespace detail

/// Assembles the LP for one sign branch: population rows, cos-form
/// coherence rows, the normalization row, and the branch inequality.
inline LinearProgram build_lp(const RoofTarget& target, const CandidateFamily& fam,
                              RoofBranch branch) {
    const int J = target.basis.J;
    if (static_cast<int>(target.populations.size()) != J)
        throw ConditionViolation("population count does not match rank");
    for (int j = 0; j < J; ++j)
        for (int k = j + 1; k < J; ++k)
            if (target.coh[j][k] < 0.0)
                throw ConditionViolation("coherences must be real nonnegative");

    for (int j = 0; j < J; ++j)
        for (int k = 0; k < J; ++k)
            if (j != k && target.coh[std::min(j, k)][std::max(j, k)] > 1e-14 &&
                target.basis.s2cross[j][k] > 1e-12 && !target.basis.s2cross_aligned[j][k])
                throw ConditionViolation(
                    "cross a^2 element lacks the common phase on a coherent pair");

    LinearProgram lp;
    lp.num_eq = J + J * (J - 1) / 2 + 1;
    lp.eq_rhs.assign(target.populations.begin(), target.populations.end());
    for (int j = 0; j < J; ++j)
        for (int k = j + 1; k < J; ++k) lp.eq_rhs.push_back(target.coh[j][k]);
    lp.eq_rhs.push_back(1.0);
    lp.ineq_is_le = branch == RoofBranch::Lplus;
    lp.ineq_rhs = target.a2_abs();

    const int stride = lp.stride();
    std::vector<double> col(stride);
    lp.cols.reserve(static_cast<size_t>(stride) * fam.entries.size());
    lp.cost.reserve(fam.entries.size());
    for (const Candidate& c : fam.entries) {
        int row = 0;
        for (int j = 0; j < J; ++j) col[row++] = c.x[j] * c.x[j];
        for (int j = 0; j < J; ++j)
            for (int k = j + 1; k < J; ++k)
                col[row++] = c.x[j] * c.x[k] * std::cos(c.theta[j] - c.theta[k]);
        col[row++] = 1.0;
        const auto v = detail::candidate_values(c, target.basis);
        col[row] = v.wit;  // inequality row
        const double cost =
            -v.meas + (branch == RoofBranch::Lplus ? -v.wit : v.wit);
        lp.push_column(col.data(), cost);
    }
    return lp;
}

// ---------------------------------------------------------------------------
// Roof solution.

struct RoofSolution {
    double value = 0.0;  // includes the <n> offset
    RoofBranch branch = RoofBranch::Lplus;
    std::vector<std::pair<Candidate, double>> weights;  // (candidate, weight)
    long iterations = 0;
    int rounds = 0;
    std::vector<double> round_values;  // best value after each round
    double witness_part = 0.0;   // |<a^2>| - sum q wit at the optimum
    double measure_part = 0.0;   // <n> - sum q |<a>|^2
    double lplus_value = std::numeric_limits<double>::infinity();
    double lminus_value = std::numeric_limits<double>::infinity();
};

namespace detail {

struct BranchSolve {
    double value = std::numeric_limits<double>::infinity();
    LpResult lp;
};

inline BranchSolve solve_branch(const RoofTarget& target, const CandidateFamily& fam,
                                RoofBranch br) {
    BranchSolve out;
    LinearProgram lp = build_lp(target, fam, br);
    out.lp = solve_lp(lp);
    if (out.lp.feasible) {
        const double a2 = target.a2_abs();
        out.value = out.lp.objective + (br == RoofBranch::Lplus ? a2 : -a2);
    }
    return out;
}

}  // namespace detail

namespace detail {

// Exact eigenvector atoms of the special-basis matrix (populations on the
// diagonal, real coherences off it). The matrix is real symmetric, so the
// eigenvectors are real and each atom is its own theta -> -theta partner.
// Seeding them guarantees the equality rows are satisfiable on any grid
// (weights = eigenvalues), covering pure and near-pure targets exactly.
inline std::vector<Candidate> eigen_seed(const RoofTarget& target, double step_x,
                                         double step_theta) {
    const int J = target.basis.J;
    std::vector<cplx> m(static_cast<size_t>(J) * J, cplx{0, 0});
    for (int j = 0; j < J; ++j) {
        m[static_cast<size_t>(j) * J + j] = target.populations[j];
        for (int k = j + 1; k < J; ++k) {
            m[static_cast<size_t>(j) * J + k] = target.coh[j][k];
            m[static_cast<size_t>(k) * J + j] = target.coh[j][k];
        }
    }
    const EigenSystem es = hermitian_eigensystem(std::move(m), J);
    std::vector<Candidate> out;
    for (int i = 0; i < J; ++i) {
        if (es.values[i] <= 1e-13) continue;
        Candidate c;
        c.x.resize(J);
        c.theta.assign(J, 0.0);
        // phase-fix convention makes the first nonzero component positive
        for (int j = 0; j < J; ++j) {
            const double v = es.vectors[i][j].real();
            c.x[j] = std::abs(v);
            c.theta[j] = v < 0.0 ? std::numbers::pi : 0.0;
        }
        c.self_paired = true;
        c.step_x = step_x;
        c.step_theta = step_theta;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace detail

/// Minimizes the roof objective: solves both sign branches on the sampled
/// grid, then locally refines (half step, +-2 cells in every coordinate)
/// around all support candidates until the improvement drops below 1e-7 or
/// the round budget is exhausted. Support candidates survive each round, so
/// the value is non-increasing.
inline RoofSolution ort_numeric(const RoofTarget& target, const RoofOptions& opt = {}) {
    const int J = target.basis.J;
    CandidateFamily fam = sample_candidates(J, opt);
    {
        const int gx = opt.grid_x > 0 ? opt.grid_x : default_grid_x(J);
        const int gt = opt.grid_theta > 0 ? opt.grid_theta : default_grid_theta(J);
        for (Candidate& c :
             detail::eigen_seed(target, 1.0 / (gx - 1), 2.0 * std::numbers::pi / gt))
            fam.entries.push_back(std::move(c));
    }

    RoofSolution sol;
    double best = std::numeric_limits<double>::infinity();
    double prev_best = std::numeric_limits<double>::infinity();
    const double mean_n = target.mean_n();

    for (int round = 0;; ++round) {
        auto fminus = std::async(std::launch::async, detail::solve_branch,
                                 std::cref(target), std::cref(fam), RoofBranch::Lminus);
        detail::BranchSolve plus = detail::solve_branch(target, fam, RoofBranch::Lplus);
        detail::BranchSolve minus = fminus.get();
        const detail::BranchSolve& win = plus.value <= minus.value ? plus : minus;
        const RoofBranch wbr = plus.value <= minus.value ? RoofBranch::Lplus : RoofBranch::Lminus;
        if (!win.lp.feasible)
            throw ConditionViolation("roof LP infeasible on both branches; grid too coarse "
                                     "or target outside the solvable class");
        sol.iterations += plus.lp.iterations + minus.lp.iterations;
        const double value = mean_n + win.value;
        if (value < best) {
            best = value;
            sol.branch = wbr;
            sol.weights.clear();
            double wit_sum = 0.0, meas_sum = 0.0;
            for (const auto& [cidx, w] : win.lp.weights) {
                sol.weights.push_back({fam.entries[cidx], w});
                const auto v = detail::candidate_values(fam.entries[cidx], target.basis);
                wit_sum += w * v.wit;
                meas_sum += w * v.meas;
            }
            sol.witness_part = std::abs(target.a2_abs() - wit_sum);
            sol.measure_part = mean_n - meas_sum;
        }
        sol.lplus_value = std::min(sol.lplus_value, mean_n + plus.value);
        sol.lminus_value = std::min(sol.lminus_value, mean_n + minus.value);
        sol.rounds = round + 1;
        sol.round_values.push_back(best);

        if (round >= opt.refine_rounds) break;
        if (round > 0 && prev_best - best < 1e-7) break;
        prev_best = best;

        // refine around the union of both branches' supports
        std::vector<const Candidate*> support;
        for (const detail::BranchSolve* bs : {&plus, &minus})
            if (bs->lp.feasible)
                for (const auto& [cidx, w] : bs->lp.weights)
                    support.push_back(&fam.entries[cidx]);
        CandidateFamily next;
        next.J = J;
        for (const Candidate* c : support) next.entries.push_back(*c);
        static constexpr std::array<double, 5> offs{-2.0, -1.0, 0.0, 1.0, 2.0};
        for (const Candidate* c : support) {
            const double hx = c->step_x * 0.5;
            const double ht = c->step_theta * 0.5;
            std::vector<double> t(J);
            for (int j = 0; j < J; ++j) t[j] = c->x[j] * c->x[j];
            // product grid over J-1 free simplex coordinates and J-1 angles
            const int dims = 2 * (J - 1);
            std::vector<int> ix(dims, 0);
            while (true) {
                std::vector<double> tt(J);
                bool ok = true;
                double sum = 0.0;
                for (int j = 0; j < J - 1 && ok; ++j) {
                    tt[j] = t[j] + offs[ix[j]] * hx;
                    if (tt[j] < -1e-13) ok = false;
                    tt[j] = std::max(tt[j], 0.0);
                    sum += tt[j];
                }
                if (ok && sum <= 1.0 + 1e-13) {
                    tt[J - 1] = std::max(1.0 - sum, 0.0);
                    Candidate nc;
                    nc.x.resize(J);
                    for (int j = 0; j < J; ++j) nc.x[j] = std::sqrt(tt[j]);
                    nc.theta.resize(J);
                    nc.theta[0] = 0.0;
                    for (int i = 0; i < J - 1; ++i)
                        nc.theta[i + 1] = c->theta[i + 1] + offs[ix[J - 1 + i]] * ht;
                    nc.step_x = hx;
                    nc.step_theta = ht;
                    next.entries.push_back(std::move(nc));
                }
                int d = dims - 1;
                while (d >= 0 && ++ix[d] == static_cast<int>(offs.size())) ix[d--] = 0;
                if (d < 0) break;
            }
        }
        if (static_cast<long>(next.entries.size()) > opt.candidate_cap)
            throw GridTooLarge("refined candidate set exceeds the cap");
        fam = std::move(next);
    }
    sol.value = best;
    return sol;
}

/// Worst equality-row residual of a solution: how well the returned weights
/// reproduce the populations, coherences and normalization of the target.
inline double roof_reconstruction_residual(const RoofSolution& sol, const RoofTarget& t) {
    const int J = t.basis.J;
    std::vector<double> pops(J, 0.0);
    std::vector<std::vector<double>> coh(J, std::vector<double>(J, 0.0));
    double wsum = 0.0;
    for (const auto& [c, w] : sol.weights) {
        wsum += w;
        for (int j = 0; j < J; ++j) {
            pops[j] += w * c.x[j] * c.x[j];
            for (int k = j + 1; k < J; ++k)
                coh[j][k] += w * c.x[j] * c.x[k] * std::cos(c.theta[j] - c.theta[k]);
        }
    }
    double res = std::abs(wsum - 1.0);
    for (int j = 0; j < J; ++j) {
        res = std::max(res, std::abs(pops[j] - t.populations[j]));
        for (int k = j + 1; k < J; ++k) res = std::max(res, std::abs(coh[j][k] - t.coh[j][k]));
    }
    return res;
}

/// Materializes the solution over source states. Each candidate stands for
/// the symmetric pair {theta, -theta}: both members are emitted with half
/// the weight unless theta is its own mirror image.
inline Decomposition roof_decomposition(const RoofSolution& sol, const RoofTarget& t) {
    if (!t.basis.source)
        throw InvalidParameter("cannot materialize a roof decomposition without source states");
    const auto& basis = *t.basis.source;
    const int J = t.basis.J;
    int dim = 0;
    for (const auto& s : basis) dim = std::max(dim, s.dim);
    Decomposition dec;
    const double tau = 2.0 * std::numbers::pi;
    for (const auto& [c, w] : sol.weights) {
        bool self = true;
        for (int j = 1; j < J && self; ++j) {
            double d = std::fmod(2.0 * c.theta[j], tau);
            if (d < 0.0) d += tau;
            self = std::min(d, tau - d) < 1e-12;
        }
        for (int sgn : {+1, -1}) {
            if (self && sgn < 0) break;
            StateVector v(dim);
            for (int j = 0; j < J; ++j) {
                const cplx ph = std::exp(cplx{0.0, sgn * c.theta[j]});
                for (int n = 0; n < basis[j].dim; ++n)
                    v.amps[n] += c.x[j] * ph * basis[j].amps[n];
            }
            const double nv = std::sqrt(v.norm_sq());
            if (nv < 1e-12) continue;
            for (cplx& a : v.amps) a /= nv;
            dec.entries.push_back({self ? w : 0.5 * w, std::move(v)});
        }
    }
    return dec;
}

}  // namespace ort
