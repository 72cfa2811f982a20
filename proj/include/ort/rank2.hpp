#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ort/errors.hpp"
#include "ort/fock.hpp"
#include "ort/measures.hpp"

// Exact piecewise nonclassicality measure and metrological power for
// rank-2 mixtures spanned by a special basis pair: two orthogonal states
// centered at the origin of phase space whose a and a^2 matrix elements
// share a common phase. Covers both incoherent eigenmixtures and
// partially coherent mixtures with coherence strength f.

namespace ort {

inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kPhaseTol = 1e-8;

// ---------------------------------------------------------------------------
// SpecialBasisPair: scalar bundle of matrix elements. Scalar-first so that
// extreme parameters (huge coherent amplitudes) evaluate without any
// truncated vectors; source states are optional.

struct SpecialBasisPair {
    double r12 = 0.0;  // |<psi1|a|psi2>|
    double r21 = 0.0;  // |<psi2|a|psi1>|
    double s1 = 0.0;   // |<psi1|a^2|psi1>|
    double s2 = 0.0;   // |<psi2|a^2|psi2>|
    double n1 = 0.0;   // <psi1|n|psi1>
    double n2 = 0.0;   // <psi2|n|psi2>
    double mu = 0.0;   // common phase of the matrix elements
    std::optional<std::pair<StateVector, StateVector>> source;
};

struct Rank2State {
    SpecialBasisPair pair;
    double p = 0.5;   // population of psi1
    double f = 0.0;   // coherence strength, 0 incoherent .. 1 pure
    double chi = 0.0; // phase of the coherence
};

struct AssumptionCheck {
    bool ok = true;
    double residual = 0.0;  // measured violation (radians or magnitude)
};

struct AssumptionReport {
    AssumptionCheck centered;      // <psi_i|a|psi_i> = 0
    AssumptionCheck common_phase;  // a^2 diagonals share the phase of a12*a21
    AssumptionCheck coherence_phase;  // 2 chi = arg a12 - arg a21
    AssumptionCheck a2_cross;      // e^{-i chi} <1|a^2|2> + e^{i chi} <2|a^2|1> = 0
    bool all_ok() const {
        return centered.ok && common_phase.ok && coherence_phase.ok && a2_cross.ok;
    }
};

namespace detail {

inline double ang_dist(double a, double b) {
    const double tau = 2.0 * std::numbers::pi;
    double d = std::fmod(a - b, tau);
    if (d < 0.0) d += tau;
    return std::min(d, tau - d);
}

// Largest pairwise angular spread among phase constraints, skipping
// wildcard entries from zero-magnitude matrix elements.
inline AssumptionCheck phase_consistency(const std::vector<std::pair<cplx, bool>>& elems) {
    AssumptionCheck c;
    std::vector<double> args;
    for (const auto& [z, defined] : elems)
        if (defined && std::abs(z) > 1e-12) args.push_back(std::arg(z));
    for (size_t i = 0; i < args.size(); ++i)
        for (size_t j = i + 1; j < args.size(); ++j)
            c.residual = std::max(c.residual, ang_dist(args[i], args[j]));
    c.ok = c.residual <= kPhaseTol;
    return c;
}

}  // namespace detail

/// Builds the scalar bundle from two orthogonal states, verifying that they
/// are centered at the origin and that the a/a^2 matrix elements share one
/// phase (zero elements are treated as wildcards).
inline SpecialBasisPair pair_from_states(const StateVector& psi1, const StateVector& psi2) {
    if (std::abs(inner(psi1, psi2)) > kOrthoTol)
        throw AssumptionViolation("special basis states are not orthogonal");
    const StateVector a1 = ladder_annihilate(psi1);
    const StateVector a2v = ladder_annihilate(psi2);
    const cplx d1 = inner(psi1, a1), d2 = inner(psi2, a2v);
    if (std::abs(d1) > kOrthoTol || std::abs(d2) > kOrthoTol)
        throw AssumptionViolation("special basis states are not centered at the origin");

    const cplx a12 = inner(psi1, a2v);
    const cplx a21 = inner(psi2, a1);
    const cplx sq1 = inner(psi1, ladder_annihilate(a1));
    const cplx sq2 = inner(psi2, ladder_annihilate(a2v));

    // Assumption 2: arg(sq1) = arg(sq2) = arg(a12) + arg(a21) mod 2pi.
    const bool amixed = std::abs(a12) > 1e-12 && std::abs(a21) > 1e-12;
    const cplx prod = amixed ? a12 * a21 : cplx{0.0, 0.0};
    const AssumptionCheck ph = detail::phase_consistency(
        {{sq1, true}, {sq2, true}, {prod, amixed}});
    if (!ph.ok) throw AssumptionViolation("a^2 and a matrix elements do not share a phase");

    SpecialBasisPair pr;
    pr.r12 = std::abs(a12);
    pr.r21 = std::abs(a21);
    pr.s1 = std::abs(sq1);
    pr.s2 = std::abs(sq2);
    pr.n1 = expectations(psi1).mean_n;
    pr.n2 = expectations(psi2).mean_n;
    if (std::abs(sq1) > 1e-12)
        pr.mu = 0.5 * std::arg(sq1);
    else if (std::abs(sq2) > 1e-12)
        pr.mu = 0.5 * std::arg(sq2);
    else if (amixed)
        pr.mu = 0.5 * (std::arg(a12) + std::arg(a21));
    pr.source = std::make_pair(psi1, psi2);
    return pr;
}

/// Per-assumption report with measured residuals; never throws.
inline AssumptionReport verify_assumptions(const SpecialBasisPair& pair, double f,
                                           double chi) {
    AssumptionReport rep;
    if (!pair.source) return rep;  // scalar bundles carry no phase information
    const auto& [psi1, psi2] = *pair.source;
    const StateVector a1 = ladder_annihilate(psi1);
    const StateVector a2v = ladder_annihilate(psi2);

    rep.centered.residual = std::max(std::abs(inner(psi1, a1)), std::abs(inner(psi2, a2v)));
    rep.centered.ok = rep.centered.residual <= kOrthoTol;

    const cplx a12 = inner(psi1, a2v);
    const cplx a21 = inner(psi2, a1);
    const cplx sq1 = inner(psi1, ladder_annihilate(a1));
    const cplx sq2 = inner(psi2, ladder_annihilate(a2v));
    const bool amixed = std::abs(a12) > 1e-12 && std::abs(a21) > 1e-12;
    rep.common_phase = detail::phase_consistency(
        {{sq1, true}, {sq2, true}, {a12 * a21, amixed}});

    // Assumption 3 constrains chi only through elements with definite phase.
    if (f > 0.0 && amixed) {
        rep.coherence_phase.residual =
            detail::ang_dist(2.0 * chi, std::arg(a12) - std::arg(a21));
        rep.coherence_phase.ok = rep.coherence_phase.residual <= kPhaseTol;
    }

    if (f > 0.0) {
        const cplx c12 = inner(psi1, ladder_annihilate(a2v));
        const cplx c21 = inner(psi2, ladder_annihilate(a1));
        rep.a2_cross.residual = std::abs(std::exp(cplx{0.0, -chi}) * c12 +
                                         std::exp(cplx{0.0, chi}) * c21);
        rep.a2_cross.ok = rep.a2_cross.residual <= kOrthoTol;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Piecewise closed forms.

/// Decomposition recipe: atoms (theta, weight); each atom materializes as
/// sqrt(p) psi1 + e^{i(theta-chi)} sqrt(1-p) psi2.
struct ThetaRecipe {
    std::vector<std::pair<double, double>> atoms;  // (theta, weight)
};

struct BranchResult {
    double value = 0.0;
    Branch branch = Branch::OverSqueezed;
    ThetaRecipe recipe;
};

/// eta(f,p) = p(1-p)[(2f^2-1)(r21^2+r12^2) + 2 r21 r12]: the threshold
/// below which the witness term can no longer be nullified. Monotone
/// increasing in f on [0,1].
inline double eta(const SpecialBasisPair& pr, double f, double p) {
    return p * (1.0 - p) *
           ((2.0 * f * f - 1.0) * (pr.r21 * pr.r21 + pr.r12 * pr.r12) +
            2.0 * pr.r21 * pr.r12);
}

namespace detail {

inline double clamp0(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

struct Rank2Scalars {
    double a2;    // |<a^2>| = p s1 + (1-p) s2
    double nbar;  // <n> = p n1 + (1-p) n2
    double over;  // p(1-p)(r21+r12)^2, the branch threshold
};

inline Rank2Scalars rank2_scalars(const SpecialBasisPair& pr, double p) {
    if (p < 0.0 || p > 1.0) throw InvalidParameter("population p must be in [0,1]");
    Rank2Scalars s;
    s.a2 = p * pr.s1 + (1.0 - p) * pr.s2;
    s.nbar = p * pr.n1 + (1.0 - p) * pr.n2;
    const double rr = pr.r21 + pr.r12;
    s.over = p * (1.0 - p) * rr * rr;
    return s;
}

}  // namespace detail

/// Measure of the partially coherent mixture; f = 0 gives the eigenmixture
/// case. Branch boundaries use the half-open convention: equality goes to
/// the over-squeezed branch (the values agree there).
inline BranchResult ort_rank2_coherent(const SpecialBasisPair& pr, double p, double f) {
    if (f < 0.0 || f > 1.0) throw InvalidParameter("coherence strength f must be in [0,1]");
    const auto s = detail::rank2_scalars(pr, p);
    const double pq = p * (1.0 - p);
    BranchResult out;
    if (s.a2 >= s.over) {
        out.branch = Branch::OverSqueezed;
        out.value = s.nbar + s.a2 - 2.0 * s.over;
    } else if (s.a2 >= eta(pr, f, p)) {
        out.branch = Branch::UnderSqueezedA;
        const double r2sum = pr.r21 * pr.r21 + pr.r12 * pr.r12;
        const double rdiff = pr.r21 * pr.r21 - pr.r12 * pr.r12;
        out.value = s.nbar - (2.0 * pr.r21 * pr.r12 * s.a2 + rdiff * rdiff * pq) / r2sum;
    } else {
        out.branch = Branch::UnderSqueezedB;
        const double rd = pr.r21 - pr.r12;
        out.value = s.nbar - s.a2 + (2.0 * f * f - 2.0) * pq * rd * rd;
    }
    out.value = detail::clamp0(out.value);
    return out;
}

/// Eigenmixture measure (no coherence).
inline BranchResult ort_rank2(const SpecialBasisPair& pr, double p) {
    return ort_rank2_coherent(pr, p, 0.0);
}

/// Metrological power of the eigenmixture (two-branch closed form).
inline BranchResult mpower_rank2(const SpecialBasisPair& pr, double p) {
    const auto s = detail::rank2_scalars(pr, p);
    const double pq = p * (1.0 - p);
    BranchResult out;
    if (s.a2 >= 4.0 * pq * pr.r21 * pr.r12) {
        out.branch = Branch::OverSqueezed;
        out.value = std::max(s.nbar + s.a2 - 2.0 * s.over, 0.0);
    } else {
        out.branch = Branch::UnderSqueezedA;
        const double rd = pr.r12 - pr.r21;
        out.value = std::max(s.nbar - s.a2 - 2.0 * pq * rd * rd, 0.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Optimal decompositions.

namespace detail {

// Symmetric theta-distribution with <cos theta> = f and <cos 2theta> = xbar.
// The equal-weight four-angle choice arccos(f +- g) fails when f + g > 1;
// an atom pinned at theta = 0 covers the remainder of the moment range.
inline ThetaRecipe theta_moments_recipe(double f, double xbar) {
    ThetaRecipe rec;
    const double m2 = 0.5 * (xbar + 1.0);  // second moment of cos(theta)
    const double var = m2 - f * f;
    if (var < -1e-12) throw BranchMismatch("moment pair is infeasible");
    const double g = std::sqrt(std::max(var, 0.0));
    if (f + g <= 1.0 + 1e-15) {
        const double cp = std::min(f + g, 1.0), cm = f - g;
        for (double c : {cp, cm}) {
            const double th = std::acos(std::clamp(c, -1.0, 1.0));
            rec.atoms.push_back({th, 0.25});
            rec.atoms.push_back({-th, 0.25});
        }
    } else {
        const double w1 = (m2 - f * f) / (1.0 - 2.0 * f + m2);
        const double c2 = (f - w1) / (1.0 - w1);
        const double th = std::acos(std::clamp(c2, -1.0, 1.0));
        rec.atoms.push_back({0.0, w1});
        rec.atoms.push_back({th, 0.5 * (1.0 - w1)});
        rec.atoms.push_back({-th, 0.5 * (1.0 - w1)});
    }
    // drop zero-weight atoms, merge theta = 0 duplicates
    ThetaRecipe clean;
    for (auto& [th, w] : rec.atoms)
        if (w > 1e-15) clean.atoms.push_back({th, w});
    return clean;
}

}  // namespace detail

/// Builds the decomposition attaining the branch value. When source states
/// are present, returns a materialized Decomposition whose objective equals
/// the analytic value (asserted to 1e-9 by the caller via
/// decomposition_objective).
inline BranchResult optimal_decomposition(const Rank2State& st) {
    const auto& pr = st.pair;
    const double p = st.p, f = st.f;
    BranchResult res = ort_rank2_coherent(pr, p, f);
    const auto s = detail::rank2_scalars(pr, p);
    const double pq = p * (1.0 - p);

    if (f >= 1.0) {
        res.recipe.atoms = {{0.0, 1.0}};
        return res;
    }
    switch (res.branch) {
        case Branch::OverSqueezed:
            res.recipe.atoms = {{0.0, 0.5 * (1.0 + f)}, {std::numbers::pi, 0.5 * (1.0 - f)}};
            break;
        case Branch::UnderSqueezedA: {
            const double r2sum = pr.r21 * pr.r21 + pr.r12 * pr.r12;
            if (pq <= 0.0 || r2sum <= 0.0)
                throw BranchMismatch("under-squeezed recipe needs mixing and ladder coupling");
            const double xbar = (s.a2 - 2.0 * pr.r21 * pr.r12 * pq) / (pq * r2sum);
            if (f == 0.0) {
                // four axis atoms: <cos 2theta> = xbar, <cos theta> = 0
                const double pi = std::numbers::pi;
                res.recipe.atoms = {{0.0, 0.25 * (xbar + 1.0)},
                                    {pi, 0.25 * (xbar + 1.0)},
                                    {pi / 2.0, 0.25 * (1.0 - xbar)},
                                    {-pi / 2.0, 0.25 * (1.0 - xbar)}};
            } else {
                res.recipe = detail::theta_moments_recipe(f, xbar);
            }
            break;
        }
        case Branch::UnderSqueezedB: {
            const double th = std::acos(std::clamp(f, 0.0, 1.0));
            res.recipe.atoms = {{th, 0.5}, {-th, 0.5}};
            break;
        }
    }
    return res;
}

/// Materializes a theta recipe over source states: each atom becomes
/// sqrt(p) psi1 + e^{i(theta-chi)} sqrt(1-p) psi2 with the atom's weight.
inline Decomposition materialize_recipe(const Rank2State& st, const ThetaRecipe& rec) {
    if (!st.pair.source)
        throw InvalidParameter("cannot materialize a recipe without source states");
    const auto& [psi1, psi2] = *st.pair.source;
    const int dim = std::max(psi1.dim, psi2.dim);
    Decomposition dec;
    for (const auto& [th, w] : rec.atoms) {
        StateVector v(dim);
        const cplx ph = std::exp(cplx{0.0, th - st.chi});
        for (int n = 0; n < dim; ++n) {
            cplx a{0.0, 0.0};
            if (n < psi1.dim) a += std::sqrt(st.p) * psi1.amps[n];
            if (n < psi2.dim) a += ph * std::sqrt(1.0 - st.p) * psi2.amps[n];
            v.amps[n] = a;
        }
        dec.entries.push_back({w, std::move(v)});
    }
    return dec;
}

/// Fock-basis density matrix of the partially coherent rank-2 state.
inline DensityMatrix materialize_rank2_density(const Rank2State& st) {
    if (!st.pair.source)
        throw InvalidParameter("cannot materialize a state without source vectors");
    const auto& [psi1, psi2] = *st.pair.source;
    const int dim = std::max(psi1.dim, psi2.dim);
    DensityMatrix rho(dim);
    const cplx coh = st.f * std::sqrt(st.p * (1.0 - st.p)) * std::exp(cplx{0.0, st.chi});
    auto amp = [&](const StateVector& v, int n) -> cplx {
        return n < v.dim ? v.amps[n] : cplx{0.0, 0.0};
    };
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            rho.at(n, m) = st.p * amp(psi1, n) * std::conj(amp(psi1, m)) +
                           (1.0 - st.p) * amp(psi2, n) * std::conj(amp(psi2, m)) +
                           coh * amp(psi1, n) * std::conj(amp(psi2, m)) +
                           std::conj(coh) * amp(psi2, n) * std::conj(amp(psi1, m));
        }
    return rho;
}

// ---------------------------------------------------------------------------
// Interval and threshold finders (bisection).

namespace detail {

inline double squeezing_gap(const SpecialBasisPair& pr, double p) {
    const auto s = rank2_scalars(pr, p);
    return s.a2 - s.over;  // negative inside the under-squeezed interval
}

}  // namespace detail

/// p-interval where the under-squeezed branch holds, located by bisection
/// on the branch condition (1e-10). Returns nullopt when the over-squeezed
/// branch holds for all p.
inline std::optional<std::pair<double, double>> under_squeezed_interval(
    const SpecialBasisPair& pr) {
    // the gap is quadratic in p with positive curvature; its vertex is exact
    const double rsum = pr.r12 + pr.r21;
    const double curv = rsum * rsum;
    if (curv <= 0.0) return std::nullopt;  // no ladder coupling: gap is linear >= 0
    const double pmin = std::clamp(0.5 * (1.0 + (pr.s2 - pr.s1) / curv), 0.0, 1.0);
    const double gmin = detail::squeezing_gap(pr, pmin);
    if (gmin >= 0.0) return std::nullopt;
    auto bisect = [&](double lo, double hi, bool want_neg_at_hi) {
        for (int it = 0; it < 64 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool neg = detail::squeezing_gap(pr, mid) < 0.0;
            if (neg == want_neg_at_hi)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double pl = bisect(0.0, pmin, true);
    const double pr_ = bisect(pmin, 1.0, false);
    return std::make_pair(pl, pr_);
}

/// Positive f where eta(f,p) crosses |<a^2>|; above it the witness term is
/// forced positive. nullopt when the crossing lies beyond f = 1.
inline std::optional<double> f_crit(const SpecialBasisPair& pr, double p) {
    const auto s = detail::rank2_scalars(pr, p);
    if (eta(pr, 1.0, p) <= s.a2) return std::nullopt;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eta(pr, mid, p) > s.a2 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace ort
