#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "ort/fock.hpp"
#include "ort/rank2.hpp"

// Scalar constructors for every rank-2 family studied here. Each wrapper
// fills the SpecialBasisPair from the family's closed-form matrix elements
// (so extreme parameters need no truncated vectors) and attaches source
// states when they fit in a reasonable cutoff.

namespace ort {

struct Rank2Family {
    Rank2State state;
    std::string name;
};

// psi1 = |n+1>, psi2 = |n>. Any coherence phase chi is admissible for Fock
// pairs (all phase constraints involve zero elements).
inline Rank2Family two_fock(int n, double p, double f, double chi = 0.0,
                            bool with_source = true) {
    if (n < 0) throw InvalidParameter("two_fock requires n >= 0");
    Rank2Family fam;
    fam.name = "two-fock";
    SpecialBasisPair pr;
    pr.r12 = 0.0;
    pr.r21 = std::sqrt(n + 1.0);
    pr.s1 = pr.s2 = 0.0;
    pr.n1 = n + 1.0;
    pr.n2 = n;
    if (with_source) {
        const int dim = n + 4;
        pr.source = std::make_pair(make_fock(n + 1, dim), make_fock(n, dim));
    }
    fam.state = {pr, p, f, chi};
    return fam;
}

// psi1 = cat_plus, psi2 = cat_minus: r12 = a sqrt(coth a^2), r21 = a sqrt(tanh a^2).
inline Rank2Family cat_mixture(double alpha, double p, double f,
                               bool with_source = true) {
    if (alpha <= 0.0) throw InvalidParameter("cat_mixture requires alpha > 0");
    Rank2Family fam;
    fam.name = "cat-mixture";
    const double a2 = alpha * alpha;
    const double th = std::tanh(a2);
    SpecialBasisPair pr;
    pr.r12 = alpha / std::sqrt(th);
    pr.r21 = alpha * std::sqrt(th);
    pr.s1 = pr.s2 = a2;
    pr.n1 = a2 * th;
    pr.n2 = a2 / th;
    if (with_source) {
        const int dim = default_dim_coherent(alpha);
        pr.source = std::make_pair(make_cat(alpha, Parity::Even, dim),
                                   make_cat(alpha, Parity::Odd, dim));
    }
    fam.state = {pr, p, f, 0.0};
    return fam;
}

inline double cat_p_left(double alpha) { return 0.5 * (1.0 - std::exp(-2.0 * alpha * alpha)); }
inline double cat_p_right(double alpha) { return 0.5 * (1.0 + std::exp(-2.0 * alpha * alpha)); }

// psi1 = squeezed vacuum, psi2 = photon-subtracted squeezed vacuum.
// Eigenmixtures only (the a^2 cross element does not vanish, so partial
// coherence leaves the solvable class).
inline Rank2Family sv_mixture(double gamma, double mu, double p,
                              bool with_source = true) {
    if (gamma <= 0.0) throw InvalidParameter("sv_mixture requires gamma > 0");
    Rank2Family fam;
    fam.name = "sv-mixture";
    const double sh = std::sinh(gamma), ch = std::cosh(gamma);
    SpecialBasisPair pr;
    pr.r12 = ch;
    pr.r21 = sh;
    pr.s1 = sh * ch;
    pr.s2 = 3.0 * sh * ch;
    pr.n1 = sh * sh;
    pr.n2 = 2.0 * sh * sh + ch * ch;
    pr.mu = mu + 0.5 * std::numbers::pi;
    if (with_source) {
        const int dim = default_dim_squeezed(gamma);
        pr.source = std::make_pair(make_squeezed_vacuum(gamma, mu, dim),
                                   make_photon_subtracted_sv(gamma, mu, dim));
    }
    fam.state = {pr, p, 0.0, 0.0};
    return fam;
}

// Level-skipping pair built on |n>, |n+2>.
inline Rank2Family level_skip(int n, cplx beta2, double p, bool with_source = true) {
    const double b = std::abs(beta2);
    if (b >= 1.0 || b <= 0.0 || n < 0)
        throw InvalidParameter("level_skip requires 0 < |beta2| < 1 and n >= 0");
    Rank2Family fam;
    fam.name = "level-skip";
    const double a2c = std::sqrt(1.0 - b * b);
    const double m = n + 2.0 * b * b;
    const double rt = std::sqrt((n + 2.0) * (n + 1.0));
    SpecialBasisPair pr;
    pr.r12 = std::sqrt(m);
    pr.r21 = a2c * b * rt / std::sqrt(m);
    pr.s1 = a2c * b * n * rt / m;
    pr.s2 = a2c * b * rt;
    pr.n1 = n - n / m * a2c * a2c + (n + 2.0) / m * b * b;
    pr.n2 = m;
    pr.mu = 0.5 * std::arg(beta2);
    double chi = -0.5 * std::arg(beta2);
    if (with_source) {
        auto [phi1, phi2] = make_level_skip_pair(n, beta2);
        pr.source = std::make_pair(std::move(phi1), std::move(phi2));
    }
    fam.state = {pr, p, 0.0, chi};
    return fam;
}

// Indefinite-parity pair; r12 = r21, so metrological power saturates the
// measure for every p.
inline Rank2Family indefinite_parity(int n, double y, double p, bool with_source = true) {
    if (y <= 0.0 || n < 0) throw InvalidParameter("indefinite_parity requires y > 0, n >= 0");
    Rank2Family fam;
    fam.name = "indefinite-parity";
    const double z = (2.0 * n + 3.0) / y;
    const double A2 = 1.0 / (2.0 * n + 3.0 + y * y);
    const double B2 = 1.0 / (2.0 * n + 3.0 + z * z);
    const double nn = (n + 1.0) * (n + 2.0);
    SpecialBasisPair pr;
    pr.r12 = std::sqrt(nn * A2 * B2) * (z + y);
    pr.r21 = pr.r12;
    pr.s1 = B2 * nn;
    pr.s2 = A2 * nn;
    pr.n1 = B2 * (2.0 * n * n + 5.0 * n + 2.0 + (n + 1.0) * z * z);
    pr.n2 = A2 * (2.0 * n * n + 5.0 * n + 2.0 + (n + 1.0) * y * y);
    pr.mu = 0.5 * std::numbers::pi;
    if (with_source) {
        const double pi = std::numbers::pi;
        auto [xi1, xi2] = make_indefinite_parity_pair(n, y, pi, 0.0, 1);
        pr.source = std::make_pair(std::move(xi1), std::move(xi2));
    }
    fam.state = {pr, p, 0.0, 0.5 * std::numbers::pi};
    return fam;
}

/// Pure superposition of even and odd cat states tuned so the measure
/// vanishes at chi = 0, pi (the state is then +-alpha coherent). Returns
/// the materialized state; the measure follows from ort_pure.
inline StateVector cat_qubit_pure(double alpha, double chi, int dim = 0) {
    if (alpha <= 0.0) throw InvalidParameter("cat_qubit_pure requires alpha > 0");
    if (dim == 0) dim = default_dim_coherent(alpha);
    const StateVector cp = make_cat(alpha, Parity::Even, dim);
    const StateVector cm = make_cat(alpha, Parity::Odd, dim);
    const double w = std::exp(-2.0 * alpha * alpha);
    const double cp_amp = std::sqrt(0.5 * (1.0 + w));
    const double cm_amp = std::sqrt(0.5 * (1.0 - w));
    StateVector v(dim);
    const cplx ph = std::exp(cplx{0.0, -chi});
    for (int n = 0; n < dim; ++n) v.amps[n] = cp_amp * cp.amps[n] + ph * cm_amp * cm.amps[n];
    normalize(v);
    return v;
}

/// Rank-2 partially coherent mixture of three neighboring Fock states:
/// psi1 = |n+1>, psi2 = (sqrt(p_n2)|n+2> + sqrt(p_n)|n>)/sqrt(p_n2 + p_n),
/// populations p_n1 and p_n2 + p_n, coherence strength f.
inline Rank2Family rank2_three_fock(double p_n2, double p_n1, double p_n, double f,
                                    int n = 0, bool with_source = true) {
    if (p_n2 < 0.0 || p_n1 <= 0.0 || p_n < 0.0 || p_n2 + p_n <= 0.0)
        throw InvalidParameter("rank2_three_fock requires nonnegative populations");
    if (std::abs(p_n2 + p_n1 + p_n - 1.0) > 1e-10)
        throw InvalidParameter("rank2_three_fock populations must sum to 1");
    Rank2Family fam;
    fam.name = "three-fock-rank2";
    const double psum = p_n2 + p_n;
    SpecialBasisPair pr;
    pr.r12 = std::sqrt(p_n2 * (n + 2.0) / psum);
    pr.r21 = std::sqrt(p_n * (n + 1.0) / psum);
    pr.s1 = 0.0;
    pr.s2 = std::sqrt(p_n2 * p_n * (n + 2.0) * (n + 1.0)) / psum;
    pr.n1 = n + 1.0;
    pr.n2 = (p_n2 * (n + 2.0) + p_n * n) / psum;
    if (with_source) {
        const int dim = n + 4;
        StateVector psi2(dim);
        psi2.amps[n + 2] = std::sqrt(p_n2 / psum);
        psi2.amps[n] = std::sqrt(p_n / psum);
        pr.source = std::make_pair(make_fock(n + 1, dim), std::move(psi2));
    }
    fam.state = {pr, p_n1, f, 0.0};
    return fam;
}

/// Critical squeezing strength: above it the under-squeezed interval of the
/// squeezed-vacuum mixture closes. Bisection on interval existence.
inline double sv_gamma_crit() {
    auto exists = [](double g) {
        Rank2Family fam = sv_mixture(g, 0.0, 0.5, /*with_source=*/false);
        return under_squeezed_interval(fam.state.pair).has_value();
    };
    double lo = 0.05, hi = 0.5;  // interval exists at lo, closed at hi
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        (exists(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace ort
