#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ort/channels.hpp"
#include "ort/compute.hpp"
#include "ort/convex_roof.hpp"
#include "ort/families.hpp"
#include "ort/figures.hpp"
#include "ort/probes.hpp"
#include "ort/rng.hpp"

// The verification battery behind `ort verify`: every reproducibility
// criterion is pinned here with its tolerance, one check per entry.

namespace ort {

struct CheckResult {
    std::string name;
    bool pass = false;
    double ms = 0.0;
    std::string detail;
};

struct BatteryOptions {
    std::uint64_t seed = 20250810;
    std::string only;  // substring filter on check names
    RoofOptions roof;
};

namespace battery_detail {

struct Ctx {
    std::ostringstream detail;
    bool pass = true;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "FAIL[" << what << "] ";
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            pass = false;
            detail << "FAIL[" << what << ": got " << got << ", want " << want << " +-" << tol
                   << "] ";
        }
    }
    void note(const std::string& k, double v) { detail << k << "=" << v << " "; }
};

/// Rotates psi2 so the two cross a-elements share one phase; the roof
/// solver requires that form of the basis.
inline std::pair<StateVector, StateVector> common_phase_basis(const StateVector& psi1,
                                                              const StateVector& psi2) {
    const cplx a12 = inner(psi1, ladder_annihilate(psi2));
    const cplx a21 = inner(psi2, ladder_annihilate(psi1));
    if (std::abs(a12) < 1e-12 || std::abs(a21) < 1e-12) return {psi1, psi2};
    const double delta = 0.5 * (std::arg(a21) - std::arg(a12));
    StateVector r2 = psi2;
    for (cplx& a : r2.amps) a *= std::exp(cplx{0.0, delta});
    return {psi1, r2};
}

inline RoofTarget rank2_roof_target(const Rank2Family& fam) {
    if (!fam.state.pair.source)
        throw InvalidParameter("roof cross-check needs source states");
    auto [b1, b2] = common_phase_basis(fam.state.pair.source->first,
                                       fam.state.pair.source->second);
    RoofTarget t;
    t.basis = scalar_basis_from_states({b1, b2});
    t.populations = {fam.state.p, 1.0 - fam.state.p};
    t.coh.assign(2, std::vector<double>(2, 0.0));
    t.coh[0][1] = fam.state.f * std::sqrt(fam.state.p * (1.0 - fam.state.p));
    return t;
}

inline StateVector random_state(Rng& rng, int dim) {
    StateVector v(dim);
    for (int n = 0; n < dim; ++n) v.amps[n] = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    normalize(v);
    return v;
}

inline DensityMatrix random_density(Rng& rng, int dim, int rank) {
    Decomposition d;
    double wsum = 0.0;
    std::vector<double> w(rank);
    for (int k = 0; k < rank; ++k) wsum += w[k] = rng.uniform(0.1, 1.0);
    for (int k = 0; k < rank; ++k) d.entries.push_back({w[k] / wsum, random_state(rng, dim)});
    return density_of(d);
}

inline DephasingKernel random_kernel(Rng& rng) {
    switch (rng.uniform_int(0, 3)) {
        case 0: return total_kernel();
        case 1: return lorentzian_kernel(rng.uniform(0.0, 2.0), rng.uniform(-1.0, 1.0));
        case 2: {
            const int k = rng.uniform_int(1, 3);
            std::vector<std::pair<double, double>> half;
            double wsum = 0.0;
            for (int i = 0; i < k; ++i) {
                half.push_back({rng.uniform(0.0, std::numbers::pi), rng.uniform(0.1, 1.0)});
                wsum += half.back().second;
            }
            for (auto& [phi, ww] : half) ww /= wsum;
            return symmetric_kernel(half);
        }
        default: return two_point_kernel(rng.uniform(0.0, 1.0));
    }
}

using CheckFn = std::function<void(Ctx&, const BatteryOptions&)>;

// ---------------------------------------------------------------------------

inline void check_two_fock(Ctx& c, const BatteryOptions& opt) {
    double worst_exact = 0.0, worst_gap = 0.0;
    for (int n = 0; n < 10; ++n) {
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const Rank2Family fam = two_fock(n, p, 0.0);
            const double want = n + p - p * (1.0 - p) * (n + 1.0);
            const double got = ort_rank2(fam.state.pair, p).value;
            worst_exact = std::max(worst_exact, std::abs(got - want));
            const RoofSolution sol = ort_numeric(rank2_roof_target(fam), opt.roof);
            c.expect(sol.value >= want - 1e-9, "roof below the exact value");
            worst_gap = std::max(worst_gap, sol.value - want);
        }
    }
    c.note("analytic_err", worst_exact);
    c.note("roof_gap", worst_gap);
    c.expect(worst_exact <= 1e-12, "closed form off beyond 1e-12");
    c.expect(worst_gap <= 1e-3, "roof gap beyond 1e-3");
}

inline void check_gamma_crit(Ctx& c, const BatteryOptions&) {
    const double got = sv_gamma_crit();
    c.note("gamma_crit", got);
    c.expect_near(got, std::log(1.0 + 2.0 / std::sqrt(3.0)) / 4.0, 1e-4, "gamma_crit");
}

inline void check_plateau(Ctx& c, const BatteryOptions&) {
    double worst = 0.0, worst_boundary = 0.0;
    for (int n = 0; n <= 5; ++n) {
        for (double p : {0.25, 0.5, 0.75}) {
            const Rank2Family fam = two_fock(n, p, 0.0, 0.0, false);
            const auto& pr = fam.state.pair;
            const double flat = ort_rank2_coherent(pr, p, 0.0).value;
            for (double f = 0.0; f <= 0.70001; f += 0.1)
                worst = std::max(worst, std::abs(ort_rank2_coherent(pr, p, f).value - flat));
            for (double f : {0.75, 0.9, 1.0}) {
                const double want =
                    n + p + (2.0 * f * f - 2.0) * p * (1.0 - p) * (n + 1.0);
                worst = std::max(worst, std::abs(ort_rank2_coherent(pr, p, f).value - want));
            }
            // branch flips from witness-nullable to witness-positive at the
            // plateau edge; locate it by bisection
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                (ort_rank2_coherent(pr, p, mid).branch == Branch::UnderSqueezedB ? hi : lo) =
                    mid;
            }
            worst_boundary =
                std::max(worst_boundary, std::abs(0.5 * (lo + hi) - 1.0 / std::sqrt(2.0)));
        }
    }
    c.note("value_err", worst);
    c.note("boundary_err", worst_boundary);
    c.expect(worst <= 1e-12, "plateau/quadratic values");
    c.expect(worst_boundary <= 1e-6, "plateau boundary vs 1/sqrt(2)");
}

inline void check_cat_zero(Ctx& c, const BatteryOptions&) {
    const double alpha = 0.5;
    const Rank2Family fam = cat_mixture(alpha, 0.5, 0.0, false);
    const double pr_ = cat_p_right(alpha);
    const double n_at_pr = ort_rank2(fam.state.pair, pr_).value;
    c.note("N(p_R)", n_at_pr);
    c.expect(std::abs(n_at_pr) < 1e-9, "measure nonzero at p_R");
    double worst_m = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double p = 0.5 + (pr_ - 0.5) * k / 21.0;
        worst_m = std::max(worst_m, mpower_rank2(fam.state.pair, p).value);
    }
    c.note("max_M_inside", worst_m);
    c.expect(worst_m <= 1e-12, "metrological power inside (1/2, p_R)");
}

inline void check_level_skip(Ctx& c, const BatteryOptions&) {
    const Rank2Family fam = level_skip(1, std::sqrt(0.75), 0.5, false);
    const auto iv = under_squeezed_interval(fam.state.pair);
    c.expect(iv.has_value(), "interval missing");
    if (iv) {
        c.note("p_L", iv->first);
        c.note("p_R", iv->second);
        c.expect_near(iv->first, 0.234823, 1e-5, "p_L");
        c.expect_near(iv->second, 0.890667, 1e-5, "p_R");
    }
}

inline void check_indefinite_parity(Ctx& c, const BatteryOptions&) {
    const Rank2Family fam = indefinite_parity(1, 2.0, 0.5, false);
    const auto iv = under_squeezed_interval(fam.state.pair);
    c.expect(iv.has_value(), "interval missing");
    if (iv) {
        c.note("p_L", iv->first);
        c.note("p_R", iv->second);
        c.expect_near(iv->first, 0.160063, 1e-5, "p_L");
        c.expect_near(iv->second, 0.867715, 1e-5, "p_R");
    }
    double worst = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double p = i / 51.0;
        worst = std::max(worst, std::abs(ort_rank2(fam.state.pair, p).value -
                                         mpower_rank2(fam.state.pair, p).value));
    }
    c.note("max|N-M|", worst);
    c.expect(worst <= 1e-9, "saturation M = N");
}

inline void check_cat_qubit(Ctx& c, const BatteryOptions&) {
    const int dim = default_dim_coherent(1.0);
    const double n0 = ort_pure(cat_qubit_pure(1.0, 0.0, dim));
    const double npi = ort_pure(cat_qubit_pure(1.0, std::numbers::pi, dim));
    const double nhalf = ort_pure(cat_qubit_pure(1.0, 0.5 * std::numbers::pi, dim));
    c.note("N(0)", n0);
    c.note("N(pi)", npi);
    c.note("N(pi/2)", nhalf);
    c.expect(std::abs(n0) <= 1e-10, "N(0)");
    c.expect(std::abs(npi) <= 1e-10, "N(pi)");
    c.expect_near(nhalf, 2.0, 1e-10, "N(pi/2) vs 2|alpha|^2");
}

inline void check_valley(Ctx& c, const BatteryOptions& opt) {
    const RoofSolution a = ort_numeric(three_fock_target(0.4, 0.4, 0.2, 0.2, 0.6, 0.0), opt.roof);
    const RoofSolution b = ort_numeric(three_fock_target(0.4, 0.4, 0.2, 0.0, 0.5, 0.0), opt.roof);
    const double ma = metrological_power(three_fock_density(0.4, 0.4, 0.2, 0.2, 0.6, 0.0)).value;
    const double mb = metrological_power(three_fock_density(0.4, 0.4, 0.2, 0.0, 0.5, 0.0)).value;
    c.note("N(0.2,0.6)", a.value);
    c.note("M(0.2,0.6)", ma);
    c.note("N(0,0.5)", b.value);
    c.note("M(0,0.5)", mb);
    c.expect_near(a.value, 0.511, 5e-3, "N(0.2,0.6)");
    c.expect_near(ma, 0.233, 5e-3, "M(0.2,0.6)");
    c.expect_near(b.value, 0.523, 5e-3, "N(0,0.5)");
    c.expect_near(mb, 0.235, 5e-3, "M(0,0.5)");
    const auto conn = connectivity_check_3fock(three_fock_density(0.4, 0.4, 0.2, 0.2, 0.6, 0.0),
                                               three_fock_density(0.4, 0.4, 0.2, 0.0, 0.5, 0.0));
    c.expect(!conn.connected, "states wrongly declared dephasing-connected");
}

inline void check_three_fock_fcrit(Ctx& c, const BatteryOptions& opt) {
    RoofOptions ro = opt.roof;
    ro.refine_rounds = std::max(ro.refine_rounds, 4);
    auto witness_at = [&](double f) {
        return ort_numeric(three_fock_target(1.0 / 3, 1.0 / 3, 1.0 / 3, f, f, f), ro)
            .witness_part;
    };
    double lo = 0.84, hi = 0.89;
    c.expect(witness_at(lo) < 1e-6, "witness already positive at f=0.84");
    c.expect(witness_at(hi) > 1e-6, "witness still zero at f=0.89");
    for (int it = 0; it < 9; ++it) {
        const double mid = 0.5 * (lo + hi);
        (witness_at(mid) > 1e-6 ? hi : lo) = mid;
    }
    const double fcrit = 0.5 * (lo + hi);
    c.note("f_crit", fcrit);
    c.expect(fcrit > 0.86 && fcrit < 0.87, "f_crit outside (0.86, 0.87)");
    double worst = 0.0;
    for (double f : {0.88, 0.92, 0.96}) {
        const RoofSolution sol =
            ort_numeric(three_fock_target(1.0 / 3, 1.0 / 3, 1.0 / 3, f, f, f), opt.roof);
        const double m =
            metrological_power(three_fock_density(1.0 / 3, 1.0 / 3, 1.0 / 3, f, f, f)).value;
        worst = std::max(worst, std::abs(sol.value - m));
    }
    c.note("max|N-M|", worst);
    c.expect(worst < 2.0 * opt.roof.gap_tol, "N vs M above f_crit");
}

inline void check_cat_fcrit_min(Ctx& c, const BatteryOptions&) {
    const Rank2Family fam = cat_mixture(0.5, 0.5, 0.0, false);
    const auto fc = f_crit(fam.state.pair, 0.5);
    c.expect(fc.has_value(), "f_crit missing");
    if (fc) {
        c.note("f_crit", *fc);
        c.expect_near(*fc, 0.855, 3e-3, "f_crit at p=0.5");
    }
}

inline void check_properties(Ctx& c, const BatteryOptions& opt) {
    Rng rng(opt.seed);

    // (a) phase-shift invariance
    double worst_n = 0.0, worst_m = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double chi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double p = rng.uniform(0.05, 0.95);
        Rank2Family fam;
        switch (rng.uniform_int(0, 3)) {
            case 0: fam = two_fock(rng.uniform_int(0, 4), p, 0.0); break;
            case 1: fam = cat_mixture(rng.uniform(0.3, 1.2), p, 0.0); break;
            case 2: fam = level_skip(rng.uniform_int(1, 4), rng.uniform(0.2, 0.95), p); break;
            default: fam = indefinite_parity(rng.uniform_int(0, 3), rng.uniform(0.7, 3.0), p);
        }
        const auto& [s1, s2] = *fam.state.pair.source;
        const SpecialBasisPair rotated =
            pair_from_states(apply_phase_shift(s1, chi), apply_phase_shift(s2, chi));
        worst_n = std::max(worst_n, std::abs(ort_rank2(rotated, p).value -
                                             ort_rank2(fam.state.pair, p).value));
        const DensityMatrix rho = random_density(rng, 8, rng.uniform_int(1, 3));
        worst_m = std::max(worst_m, std::abs(metrological_power(rho).value -
                                             metrological_power(apply_phase_shift(rho, chi))
                                                 .value));
    }
    c.note("shift_err_N", worst_n);
    c.note("shift_err_M", worst_m);
    c.expect(worst_n <= 1e-8, "phase-shift invariance of the measure");
    c.expect(worst_m <= 1e-8, "phase-shift invariance of the metrological power");

    // (b) dephasing monotonicity
    double worst_up_n = -1.0, worst_up_m = -1.0;
    for (int i = 0; i < 60; ++i) {
        const DephasingKernel k = random_kernel(rng);
        const int n = rng.uniform_int(0, 4);
        const double p = rng.uniform(0.05, 0.95);
        const double f = rng.uniform(0.0, 1.0);
        const Rank2Family fam = two_fock(n, p, f);
        const double fprime = f * std::abs(kappa(k, 1));
        const double n0 = ort_rank2_coherent(fam.state.pair, p, f).value;
        const double n1 = ort_rank2_coherent(fam.state.pair, p, fprime).value;
        worst_up_n = std::max(worst_up_n, n1 - n0);
        const DensityMatrix rho = materialize_rank2_density(fam.state);
        worst_up_m = std::max(worst_up_m, metrological_power(apply_dephasing(rho, k)).value -
                                              metrological_power(rho).value);
    }
    for (int i = 0; i < 40; ++i) {
        const DephasingKernel k = random_kernel(rng);
        const DensityMatrix rho = random_density(rng, 8, rng.uniform_int(1, 3));
        worst_up_m = std::max(worst_up_m, metrological_power(apply_dephasing(rho, k)).value -
                                              metrological_power(rho).value);
    }
    c.note("mono_N", worst_up_n);
    c.note("mono_M", worst_up_m);
    c.expect(worst_up_n <= 1e-8, "dephasing monotonicity of the measure");
    c.expect(worst_up_m <= 1e-8, "dephasing monotonicity of the metrological power");

    // (c) M <= N wherever both are computed
    double worst_mn = -1.0;
    for (int i = 0; i < 40; ++i) {
        const double p = rng.uniform(0.05, 0.95);
        const double f = rng.uniform(0.0, 1.0);
        const Rank2Family fam = cat_mixture(rng.uniform(0.3, 1.0), p, f);
        const double n = ort_rank2_coherent(fam.state.pair, p, f).value;
        const double m = metrological_power(materialize_rank2_density(fam.state)).value;
        worst_mn = std::max(worst_mn, m - n);
    }
    for (int i = 0; i < 30; ++i) {
        const double p = rng.uniform(0.05, 0.95);
        Rank2Family fam;
        switch (rng.uniform_int(0, 2)) {
            case 0: fam = two_fock(rng.uniform_int(0, 4), p, 0.0, 0.0, false); break;
            case 1: fam = sv_mixture(rng.uniform(0.05, 0.4), 0.0, p, false); break;
            default: fam = level_skip(rng.uniform_int(1, 4), rng.uniform(0.2, 0.95), p, false);
        }
        worst_mn = std::max(worst_mn, mpower_rank2(fam.state.pair, p).value -
                                          ort_rank2(fam.state.pair, p).value);
    }
    c.note("max(M-N)", worst_mn);
    c.expect(worst_mn <= 1e-8, "metrological power exceeds the measure");

    // (d) convexity on in-family mixtures
    double worst_conv = -1.0;
    for (int i = 0; i < 50; ++i) {
        Rank2Family fam = rng.uniform_int(0, 1) ? cat_mixture(rng.uniform(0.3, 1.0), 0.5, 0.0, false)
                                                : two_fock(rng.uniform_int(0, 4), 0.5, 0.0, 0.0, false);
        const auto& pr = fam.state.pair;
        const int parts = rng.uniform_int(2, 4);
        std::vector<double> w(parts);
        double wsum = 0.0;
        for (double& x : w) wsum += x = rng.uniform(0.1, 1.0);
        double avg = 0.0, pmix = 0.0, cmix = 0.0;
        for (int kidx = 0; kidx < parts; ++kidx) {
            w[kidx] /= wsum;
            const double pk = rng.uniform(0.05, 0.95);
            const double fk = rng.uniform(0.0, 1.0);
            avg += w[kidx] * ort_rank2_coherent(pr, pk, fk).value;
            pmix += w[kidx] * pk;
            cmix += w[kidx] * fk * std::sqrt(pk * (1.0 - pk));
        }
        const double fmix = cmix / std::sqrt(pmix * (1.0 - pmix));
        const double nmix = ort_rank2_coherent(pr, pmix, std::min(fmix, 1.0)).value;
        worst_conv = std::max(worst_conv, nmix - avg);
    }
    c.note("convexity_slack", worst_conv);
    c.expect(worst_conv <= 1e-6, "convexity violated");

    // (e) roof vs closed form across the rank-2 families
    double worst_gap = 0.0, worst_low = 0.0;
    int seen_over = 0, seen_a = 0, seen_b = 0;
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(0.05, 0.95);
        double f = 0.0;
        Rank2Family fam;
        switch (i % 5) {
            case 0: fam = two_fock(rng.uniform_int(0, 6), p, f = rng.uniform(0.0, 1.0)); break;
            case 1: fam = cat_mixture(rng.uniform(0.3, 1.2), p, f = rng.uniform(0.0, 1.0)); break;
            case 2: fam = sv_mixture(rng.uniform(0.05, 0.4), 0.0, p); break;
            case 3: fam = level_skip(rng.uniform_int(1, 4), rng.uniform(0.2, 0.95), p); break;
            default: fam = indefinite_parity(rng.uniform_int(0, 3), rng.uniform(0.7, 3.0), p);
        }
        fam.state.f = f;
        const BranchResult br = ort_rank2_coherent(fam.state.pair, p, f);
        switch (br.branch) {
            case Branch::OverSqueezed: ++seen_over; break;
            case Branch::UnderSqueezedA: ++seen_a; break;
            case Branch::UnderSqueezedB: ++seen_b; break;
        }
        const RoofSolution sol = ort_numeric(rank2_roof_target(fam), opt.roof);
        worst_gap = std::max(worst_gap, sol.value - br.value);
        worst_low = std::max(worst_low, br.value - sol.value);
    }
    c.note("roof_gap", worst_gap);
    c.note("roof_below", worst_low);
    c.note("branches_over", seen_over);
    c.note("branches_A", seen_a);
    c.note("branches_B", seen_b);
    c.expect(worst_gap <= 1e-3, "roof gap beyond tolerance");
    c.expect(worst_low <= 1e-9, "roof below the exact value");
    c.expect(seen_over > 0 && seen_a > 0 && seen_b > 0, "battery missed a branch");
}

inline void check_dephasing_dynamics(Ctx& c, const BatteryOptions&) {
    const double gamma = 1.0, step = 0.005;
    // m = 1: n = 9, p = 0.5; plateau once e^{-gamma t} drops to 1/sqrt(2)
    const double n_inf = 9.0 + 0.5 - 0.25 * 10.0;
    double t_plateau = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = i * step;
        const double f = std::exp(-gamma * t);
        const double n1 = 9.5 + std::max(-1.0, 2.0 * f * f - 2.0) * 0.25 * 10.0;
        if (t_plateau < 0.0 && std::abs(n1 - n_inf) <= 1e-12) t_plateau = t;
    }
    const double want = std::log(2.0) / (2.0 * gamma);
    c.note("t_plateau", t_plateau);
    c.expect(t_plateau >= 0.0 && std::abs(t_plateau - want) <= step + 1e-12,
             "plateau onset vs ln2/(2 gamma)");

    // m = 2 and m = 3 rows of the dataset against the closed forms
    const CsvTable tab = figure_dephasing_dynamics();
    std::istringstream is(tab.str());
    std::string line;
    std::getline(is, line);  // comment
    std::getline(is, line);  // header
    double worst2 = 0.0, worst3 = 0.0;
    while (std::getline(is, line)) {
        double t, n1, n2, n3;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &n1, &n2, &n3) != 4) continue;
        const double want2 =
            (0.75 * 8 + 0.25 * 6) +
            std::sqrt(0.75 * 0.25) * std::exp(-2.0 * gamma * t) * std::sqrt(8.0 * 7.0);
        worst2 = std::max(worst2, std::abs(n2 - want2));
        worst3 = std::max(worst3, std::abs(n3 - 4.5));
    }
    c.note("m2_err", worst2);
    c.note("m3_err", worst3);
    c.expect(worst2 <= 1e-9, "gap-2 curve vs closed form");
    c.expect(worst3 <= 1e-9, "gap-3 curve not constant");
}

}  // namespace battery_detail

inline std::vector<CheckResult> run_battery(const BatteryOptions& opt = {}) {
    using battery_detail::CheckFn;
    const std::vector<std::pair<std::string, CheckFn>> checks = {
        {"c01_two_fock_closed_form", battery_detail::check_two_fock},
        {"c02_sv_gamma_crit", battery_detail::check_gamma_crit},
        {"c03_rank2_coherence_plateau", battery_detail::check_plateau},
        {"c04_cat_mixture_zeros", battery_detail::check_cat_zero},
        {"c05_level_skip_interval", battery_detail::check_level_skip},
        {"c06_indefinite_parity_saturation", battery_detail::check_indefinite_parity},
        {"c07_cat_qubit_phase_sweep", battery_detail::check_cat_qubit},
        {"c08_coherence_valley", battery_detail::check_valley},
        {"c09_three_fock_fcrit", battery_detail::check_three_fock_fcrit},
        {"c10_cat_fcrit_min", battery_detail::check_cat_fcrit_min},
        {"c11_property_suites", battery_detail::check_properties},
        {"c12_dephasing_dynamics", battery_detail::check_dephasing_dynamics},
    };
    std::vector<CheckResult> results;
    for (const auto& [name, fn] : checks) {
        if (!opt.only.empty() && name.find(opt.only) == std::string::npos) continue;
        CheckResult res;
        res.name = name;
        battery_detail::Ctx ctx;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(ctx, opt);
            res.pass = ctx.pass;
        } catch (const std::exception& e) {
            res.pass = false;
            ctx.detail << "EXCEPTION[" << e.what() << "]";
        }
        res.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
        res.detail = ctx.detail.str();
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace ort
