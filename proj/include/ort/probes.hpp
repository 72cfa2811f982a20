#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "ort/convex_roof.hpp"
#include "ort/errors.hpp"
#include "ort/fock.hpp"
#include "ort/measures.hpp"

// Ready-made roof targets for three-level Fock and three-cat mixtures, and
// closed-form decomposition families that serve as independent upper bounds
// on the roof value (and as the region classifier for the cat mixtures).

namespace ort {

// ---------------------------------------------------------------------------
// Targets.

/// Partially coherent mixture of |n+2>, |n+1>, |n> with real nonnegative
/// coherence factors f21, f10, f20 (matrix entries f_ab sqrt(p_a p_b)).
inline RoofTarget three_fock_target(double p_n2, double p_n1, double p_n, double f21,
                                    double f10, double f20, int n = 0) {
    if (p_n2 < 0 || p_n1 < 0 || p_n < 0 || std::abs(p_n2 + p_n1 + p_n - 1.0) > 1e-10)
        throw InvalidParameter("three_fock_target populations must be nonnegative, sum 1");
    const int dim = n + 4;
    RoofTarget t;
    t.basis = scalar_basis_from_states(
        {make_fock(n + 2, dim), make_fock(n + 1, dim), make_fock(n, dim)});
    t.populations = {p_n2, p_n1, p_n};
    t.coh.assign(3, std::vector<double>(3, 0.0));
    t.coh[0][1] = f21 * std::sqrt(p_n2 * p_n1);
    t.coh[1][2] = f10 * std::sqrt(p_n1 * p_n);
    t.coh[0][2] = f20 * std::sqrt(p_n2 * p_n);
    return t;
}

inline DensityMatrix three_fock_density(double p_n2, double p_n1, double p_n, double f21,
                                        double f10, double f20, int n = 0) {
    const int dim = n + 4;
    DensityMatrix rho(dim);
    rho.at(n + 2, n + 2) = p_n2;
    rho.at(n + 1, n + 1) = p_n1;
    rho.at(n, n) = p_n;
    rho.at(n + 2, n + 1) = f21 * std::sqrt(p_n2 * p_n1);
    rho.at(n + 1, n + 2) = rho.at(n + 2, n + 1);
    rho.at(n + 1, n) = f10 * std::sqrt(p_n1 * p_n);
    rho.at(n, n + 1) = rho.at(n + 1, n);
    rho.at(n + 2, n) = f20 * std::sqrt(p_n2 * p_n);
    rho.at(n, n + 2) = rho.at(n + 2, n);
    return rho;
}

/// Incoherent mixture of the three cyclic cat states.
inline RoofTarget cat3_target(double alpha, double p0, double p1, double p2, int dim = 0) {
    if (p0 < 0 || p1 < 0 || p2 < 0 || std::abs(p0 + p1 + p2 - 1.0) > 1e-10)
        throw InvalidParameter("cat3_target populations must be nonnegative, sum 1");
    if (dim == 0) dim = default_dim_coherent(alpha);
    RoofTarget t;
    t.basis = scalar_basis_from_states(
        {make_cat3(alpha, 0, dim), make_cat3(alpha, 1, dim), make_cat3(alpha, 2, dim)});
    t.populations = {p0, p1, p2};
    t.coh.assign(3, std::vector<double>(3, 0.0));
    return t;
}

inline DensityMatrix cat3_density(double alpha, double p0, double p1, double p2,
                                  int dim = 0) {
    if (dim == 0) dim = default_dim_coherent(alpha);
    Decomposition d;
    if (p0 > 0) d.entries.push_back({p0, make_cat3(alpha, 0, dim)});
    if (p1 > 0) d.entries.push_back({p1, make_cat3(alpha, 1, dim)});
    if (p2 > 0) d.entries.push_back({p2, make_cat3(alpha, 2, dim)});
    return density_of(d);
}

// ---------------------------------------------------------------------------
// Known decomposition families.

/// Four-angle family for the tridiagonal three-Fock mixture (skip coherence
/// zero, nearest-neighbor factor f <= 1/sqrt(2)):
/// |phi> = sqrt(p_n2)|n+2> + e^{i th} sqrt(p_n1)|n+1> + e^{2i th} sqrt(p_n)|n>
/// at angles +-arccos(f +- sqrt(2-4f^2)/2), weights 1/4.
inline MeasureReport four_angle_fock_probe(double p_n2, double p_n1, double p_n, double f,
                                           int n = 0) {
    if (f < 0.0 || f > 1.0 / std::sqrt(2.0) + 1e-12)
        throw InvalidRecipeParameter("four-angle family needs 0 <= f <= 1/sqrt(2)");
    const double g = 0.5 * std::sqrt(std::max(2.0 - 4.0 * f * f, 0.0));
    const int dim = n + 4;
    Decomposition dec;
    for (double c : {f + g, f - g}) {
        const double th = std::acos(std::clamp(c, -1.0, 1.0));
        for (double sgn : {1.0, -1.0}) {
            StateVector v(dim);
            v.amps[n + 2] = std::sqrt(p_n2);
            v.amps[n + 1] = std::exp(cplx{0.0, sgn * th}) * std::sqrt(p_n1);
            v.amps[n] = std::exp(cplx{0.0, 2.0 * sgn * th}) * std::sqrt(p_n);
            dec.entries.push_back({0.25, std::move(v)});
        }
    }
    const DensityMatrix rho = three_fock_density(p_n2, p_n1, p_n, f, f, 0.0, n);
    return decomposition_objective(rho, dec);
}

/// Incoherent-floor value attained by the four-angle family when the
/// populations satisfy its validity conditions.
inline double incoherent_fock_floor(double p_n2, double p_n1, double p_n, int n = 0) {
    const double mean_n = p_n2 * (n + 2.0) + p_n1 * (n + 1.0) + p_n * n;
    const double root =
        std::sqrt(p_n2 * p_n1 * (n + 2.0)) + std::sqrt(p_n1 * p_n * (n + 1.0));
    return mean_n - root * root;
}

namespace detail {

inline MeasureReport cat3_objective(const DensityMatrix& rho, Decomposition dec) {
    return decomposition_objective(rho, dec);
}

// golden-section minimum of fn over [lo, hi]
inline double golden_min(double lo, double hi, const std::function<double(double)>& fn,
                         double tol = 1e-10) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

struct Cat3Probe {
    std::string region;   // "T", "U" or "L"
    double value = 0.0;
    double q = 1.0;       // optimized branching weight (1 for T)
    MeasureReport report;
};

/// Three twisted states with equal weights 1/3.
inline MeasureReport cat3_T_probe(double alpha, double p0, double p1, double p2,
                                  int dim = 0) {
    if (dim == 0) dim = default_dim_coherent(alpha);
    const StateVector c0 = make_cat3(alpha, 0, dim);
    const StateVector c1 = make_cat3(alpha, 1, dim);
    const StateVector c2 = make_cat3(alpha, 2, dim);
    const cplx mu = std::exp(cplx{0.0, 2.0 * std::numbers::pi / 3.0});
    Decomposition dec;
    for (int j = 0; j < 3; ++j) {
        StateVector v(dim);
        const cplx w1 = std::pow(mu, j), w2 = std::pow(mu, 2 * j);
        for (int nn = 0; nn < dim; ++nn)
            v.amps[nn] = std::sqrt(p0) * c0.amps[nn] + std::sqrt(p1) * w1 * c1.amps[nn] +
                         std::sqrt(p2) * w2 * c2.amps[nn];
        dec.entries.push_back({1.0 / 3.0, std::move(v)});
    }
    return decomposition_objective(cat3_density(alpha, p0, p1, p2, dim), dec);
}

/// Mixes cat0 into the twisted pair (cat1, cat2); the branching weight q is
/// optimized by golden section.
inline MeasureReport cat3_U_probe(double alpha, double p0, double p1, double p2, double q,
                                  int dim = 0) {
    if (dim == 0) dim = default_dim_coherent(alpha);
    const double p12 = p1 + p2;
    if (q < p12 - 1e-12 || q > 1.0 + 1e-12)
        throw InvalidRecipeParameter("U-branch weight must lie in [p1+p2, 1]");
    q = std::clamp(q, std::max(p12, 1e-12), 1.0);
    const StateVector c0 = make_cat3(alpha, 0, dim);
    const StateVector c1 = make_cat3(alpha, 1, dim);
    const StateVector c2 = make_cat3(alpha, 2, dim);
    const cplx mu = std::exp(cplx{0.0, 2.0 * std::numbers::pi / 3.0});
    Decomposition dec;
    const double each = p12 / (3.0 * q);
    for (int j = 0; j < 3 && each > 0.0; ++j) {
        StateVector v(dim);
        const cplx w1 = std::pow(mu, j), w2 = std::pow(mu, 2 * j);
        const double a1 = std::sqrt(q * p1 / p12), a2 = std::sqrt(q * p2 / p12);
        for (int nn = 0; nn < dim; ++nn)
            v.amps[nn] = std::sqrt(1.0 - q) * c0.amps[nn] + a1 * w1 * c1.amps[nn] +
                         a2 * w2 * c2.amps[nn];
        dec.entries.push_back({each, std::move(v)});
    }
    const double w0 = 1.0 - p12 / q;
    if (w0 > 1e-15) dec.entries.push_back({w0, c0});
    return decomposition_objective(cat3_density(alpha, p0, p1, p2, dim), dec);
}

/// Mixes cat1 into the twisted pair (cat0, cat2), mirror of the U branch.
inline MeasureReport cat3_L_probe(double alpha, double p0, double p1, double p2, double q,
                                  int dim = 0) {
    if (dim == 0) dim = default_dim_coherent(alpha);
    const double p02 = p0 + p2;
    if (q < p02 - 1e-12 || q > 1.0 + 1e-12)
        throw InvalidRecipeParameter("L-branch weight must lie in [p0+p2, 1]");
    q = std::clamp(q, std::max(p02, 1e-12), 1.0);
    const StateVector c0 = make_cat3(alpha, 0, dim);
    const StateVector c1 = make_cat3(alpha, 1, dim);
    const StateVector c2 = make_cat3(alpha, 2, dim);
    const cplx mu = std::exp(cplx{0.0, 2.0 * std::numbers::pi / 3.0});
    Decomposition dec;
    const double each = p02 / (3.0 * q);
    for (int j = 0; j < 3 && each > 0.0; ++j) {
        StateVector v(dim);
        const cplx w1 = std::pow(mu, j), w2 = std::pow(mu, 2 * j);
        const double a0 = std::sqrt(q * p0 / p02), a2 = std::sqrt(q * p2 / p02);
        for (int nn = 0; nn < dim; ++nn)
            v.amps[nn] = a0 * c0.amps[nn] + a2 * w1 * c2.amps[nn] +
                         std::sqrt(1.0 - q) * w2 * c1.amps[nn];
        dec.entries.push_back({each, std::move(v)});
    }
    const double w1 = 1.0 - p02 / q;
    if (w1 > 1e-15) dec.entries.push_back({w1, c1});
    return decomposition_objective(cat3_density(alpha, p0, p1, p2, dim), dec);
}

/// Picks the best of the three families (optimizing the branching weight of
/// U and L by golden section); the winner labels the region.
inline Cat3Probe classify_cat3(double alpha, double p0, double p1, double p2, int dim = 0) {
    if (dim == 0) dim = default_dim_coherent(alpha);
    Cat3Probe best;
    best.region = "T";
    best.report = cat3_T_probe(alpha, p0, p1, p2, dim);
    best.value = best.report.value;

    if (p1 + p2 < 1.0 - 1e-12 && p1 + p2 > 1e-12) {
        const double lo = std::max(p1 + p2, 1e-9);
        const double q = detail::golden_min(lo, 1.0, [&](double qq) {
            return cat3_U_probe(alpha, p0, p1, p2, qq, dim).value;
        });
        MeasureReport rep = cat3_U_probe(alpha, p0, p1, p2, q, dim);
        if (rep.value < best.value) best = {"U", rep.value, q, rep};
    }
    if (p0 + p2 < 1.0 - 1e-12 && p0 + p2 > 1e-12) {
        const double lo = std::max(p0 + p2, 1e-9);
        const double q = detail::golden_min(lo, 1.0, [&](double qq) {
            return cat3_L_probe(alpha, p0, p1, p2, qq, dim).value;
        });
        MeasureReport rep = cat3_L_probe(alpha, p0, p1, p2, q, dim);
        if (rep.value < best.value) best = {"L", rep.value, q, rep};
    }
    return best;
}

}  // namespace ort
