#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "ort/channels.hpp"
#include "ort/convex_roof.hpp"
#include "ort/eigen.hpp"
#include "ort/measures.hpp"
#include "ort/probes.hpp"
#include "ort/statespec.hpp"

// Routing from parsed states (optionally dephased by a kernel) to measure
// values: closed forms where a family applies, the roof LP for the
// three-level mixtures, and an eigenbasis fallback for generic mixtures.

namespace ort {

struct ComputeResult {
    double n_value = std::numeric_limits<double>::quiet_NaN();
    double m_value = std::numeric_limits<double>::quiet_NaN();
    double mu_star = std::numeric_limits<double>::quiet_NaN();
    double witness_part = std::numeric_limits<double>::quiet_NaN();
    double q_part = std::numeric_limits<double>::quiet_NaN();
    double mean_n = std::numeric_limits<double>::quiet_NaN();
    double a2_abs = std::numeric_limits<double>::quiet_NaN();
    std::string route;   // analytic:pure | analytic:rank2 | analytic:eigen | numeric:roof
    std::string branch;  // piecewise branch or LP sign branch
};

namespace compute_detail {

inline void fill_from_density(ComputeResult& r, const DensityMatrix& rho) {
    const Expectations e = expectations(rho);
    r.mean_n = e.mean_n;
    r.a2_abs = std::abs(e.mean_a2);
    const MetrologicalPower mp = metrological_power(rho);
    r.m_value = mp.value;
    r.mu_star = mp.mu_star.mu;
}

inline ComputeResult compute_pure(const StateVector& psi) {
    ComputeResult r;
    Expectations e;
    r.n_value = ort_pure(psi, &e);
    r.route = "analytic:pure";
    r.branch = "pure";
    r.q_part = e.mean_n - std::norm(e.mean_a);
    r.witness_part = std::abs(e.mean_a2 - e.mean_a * e.mean_a);
    fill_from_density(r, pure_density(psi));
    return r;
}

inline ComputeResult compute_rank2(const SpecialBasisPair& pr, double p, double f) {
    ComputeResult r;
    const BranchResult br = ort_rank2_coherent(pr, p, f);
    r.n_value = br.value;
    r.route = "analytic:rank2";
    r.branch = to_string(br.branch);
    const double a2 = p * pr.s1 + (1.0 - p) * pr.s2;
    const double rr = pr.r12 + pr.r21;
    const double over = p * (1.0 - p) * rr * rr;
    r.mean_n = p * pr.n1 + (1.0 - p) * pr.n2;
    r.a2_abs = a2;
    switch (br.branch) {
        case Branch::OverSqueezed: r.witness_part = a2 - over; break;
        case Branch::UnderSqueezedA: r.witness_part = 0.0; break;
        case Branch::UnderSqueezedB: r.witness_part = eta(pr, f, p) - a2; break;
    }
    r.q_part = r.n_value - r.witness_part;
    return r;
}

inline ComputeResult compute_family(const Rank2Family& fam) {
    const auto& st = fam.state;
    const auto& pr = st.pair;
    ComputeResult r = compute_rank2(pr, st.p, st.f);
    if (pr.source) {
        const MetrologicalPower mp = metrological_power(materialize_rank2_density(st));
        r.m_value = mp.value;
        r.mu_star = mp.mu_star.mu;
    }
    if (st.f == 0.0) r.m_value = mpower_rank2(pr, st.p).value;  // exact closed form
    return r;
}

inline ComputeResult compute_roof(const RoofTarget& target, const DensityMatrix& rho,
                                  const RoofOptions& opt) {
    ComputeResult r;
    const RoofSolution sol = ort_numeric(target, opt);
    r.n_value = sol.value;
    r.route = "numeric:roof";
    r.branch = sol.branch == RoofBranch::Lplus ? "L+" : "L-";
    r.witness_part = sol.witness_part;
    r.q_part = sol.measure_part;
    fill_from_density(r, rho);
    r.mean_n = target.mean_n();
    r.a2_abs = target.a2_abs();
    return r;
}

inline ComputeResult compute_density(const DensityMatrix& rho, const RoofOptions& opt) {
    ComputeResult r;
    const auto eig = eigendecompose(rho);
    std::vector<StateVector> vecs;
    std::vector<double> lams;
    for (const auto& [lam, v] : eig)
        if (lam > 1e-12) {
            lams.push_back(lam);
            vecs.push_back(v);
        }
    if (lams.size() == 1) {
        r = compute_pure(vecs[0]);
        fill_from_density(r, rho);
        return r;
    }
    if (lams.size() == 2) {
        try {
            const SpecialBasisPair pr = pair_from_states(vecs[0], vecs[1]);
            r = compute_rank2(pr, lams[0] / (lams[0] + lams[1]), 0.0);
            r.route = "analytic:eigen";
            fill_from_density(r, rho);
            return r;
        } catch (const AssumptionViolation&) {
            // fall through to the roof
        }
    }
    if (lams.size() > 4)
        throw ConditionViolation("mixture rank exceeds the roof solver's range");
    RoofTarget t;
    t.basis = scalar_basis_from_states(vecs);  // throws ConditionViolation if unsuitable
    t.populations = lams;
    const double lsum = std::accumulate(lams.begin(), lams.end(), 0.0);
    for (double& p : t.populations) p /= lsum;
    t.coh.assign(t.basis.J, std::vector<double>(t.basis.J, 0.0));
    return compute_roof(t, rho, opt);
}

// kernel factors for a three-level Fock target: returns the rescaled
// coherence factors when the kernel's phases can be absorbed by a definite
// phase shift, nullopt otherwise.
struct ScaledFock3 {
    double f21, f10, f20;
};

inline std::optional<ScaledFock3> scaled_fock3(const DephasingKernel& k, double f21,
                                               double f10, double f20) {
    const cplx k1 = kappa(k, 1), k2 = kappa(k, 2);
    const cplx c21 = f21 * k1, c10 = f10 * k1, c20 = f20 * k2;
    // alignment: some chi rotates all of (c21, c10) e^{i chi}, c20 e^{2i chi}
    // onto the positive real axis
    double chi = 0.0;
    bool chi_fixed = false;
    if (std::abs(c21) > 1e-14) {
        chi = -std::arg(c21);
        chi_fixed = true;
    } else if (std::abs(c10) > 1e-14) {
        chi = -std::arg(c10);
        chi_fixed = true;
    }
    auto aligned = [&](cplx z, double rot) {
        if (std::abs(z) < 1e-14) return true;
        const cplx w = z * std::exp(cplx{0.0, rot});
        return std::abs(std::arg(w)) < 1e-9;
    };
    if (chi_fixed && !aligned(c10, chi)) return std::nullopt;
    if (!chi_fixed && std::abs(c20) > 1e-14) chi = -0.5 * std::arg(c20);
    if (!aligned(c20, 2.0 * chi)) return std::nullopt;
    return ScaledFock3{std::abs(c21), std::abs(c10), std::abs(c20)};
}

}  // namespace compute_detail

/// Measures of a parsed state, optionally after a dephasing kernel. Family
/// states stay on the closed-form route when the kernel acts within the
/// family (two-Fock pairs under any kernel, opposite-parity pairs under the
/// two-point kernel); everything else is materialized and routed through
/// the eigenbasis.
inline ComputeResult compute_measures(const ParsedState& ps,
                                      const std::optional<DephasingKernel>& kernel = {},
                                      const RoofOptions& opt = {}) {
    using compute_detail::compute_density;
    using compute_detail::compute_family;
    using compute_detail::compute_pure;
    using compute_detail::compute_roof;

    if (!kernel) {
        switch (ps.kind) {
            case ParsedState::Kind::Pure:
                return compute_pure(*ps.pure);
            case ParsedState::Kind::Family:
                return compute_family(*ps.family);
            case ParsedState::Kind::RoofFock3: {
                const RoofTarget t = three_fock_target(ps.p_n2, ps.p_n1, ps.p_n, ps.f21,
                                                       ps.f10, ps.f20, ps.n);
                return compute_roof(
                    t, three_fock_density(ps.p_n2, ps.p_n1, ps.p_n, ps.f21, ps.f10, ps.f20, ps.n),
                    opt);
            }
            case ParsedState::Kind::RoofCat3: {
                const RoofTarget t = cat3_target(ps.alpha, ps.p0, ps.p1, ps.p2);
                return compute_roof(t, cat3_density(ps.alpha, ps.p0, ps.p1, ps.p2), opt);
            }
            case ParsedState::Kind::Mixture:
                return compute_density(*ps.density, opt);
        }
    }

    // kernel present: keep closed-form routes where the family is preserved
    if (ps.kind == ParsedState::Kind::Family) {
        const Rank2Family& fam = *ps.family;
        if (fam.name == "two-fock") {
            Rank2Family scaled = fam;
            const cplx k1 = kappa(*kernel, 1);
            scaled.state.f = fam.state.f * std::abs(k1);
            scaled.state.chi = fam.state.chi + std::arg(k1);
            return compute_family(scaled);
        }
        if (kernel->kind == DephasingKernel::Kind::TwoPoint && fam.name != "indefinite-parity") {
            Rank2Family scaled = fam;
            scaled.state.f = fam.state.f * kernel->f_ratio;
            return compute_family(scaled);
        }
    }
    if (ps.kind == ParsedState::Kind::RoofFock3) {
        const auto sc = compute_detail::scaled_fock3(*kernel, ps.f21, ps.f10, ps.f20);
        if (sc) {
            const RoofTarget t = three_fock_target(ps.p_n2, ps.p_n1, ps.p_n, sc->f21,
                                                   sc->f10, sc->f20, ps.n);
            return compute_roof(
                t, three_fock_density(ps.p_n2, ps.p_n1, ps.p_n, sc->f21, sc->f10, sc->f20, ps.n),
                opt);
        }
    }
    const DensityMatrix rho = apply_dephasing(materialize(ps), *kernel);
    return compute_density(rho, opt);
}

}  // namespace ort
