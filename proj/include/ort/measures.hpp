#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ort/eigen.hpp"
#include "ort/errors.hpp"
#include "ort/fock.hpp"

// Decomposition-independent quantities: the pure-state nonclassicality
// measure, the per-decomposition objective value it is the minimum of,
// the quadrature Fisher information, and the metrological power.

namespace ort {

/// Quadrature angle, reduced mod pi: X_mu and X_{mu+pi} share a variance.
struct QuadratureAngle {
    double mu = 0.0;
    static QuadratureAngle reduced(double m) {
        const double pi = std::numbers::pi;
        m = std::fmod(m, pi);
        if (m < 0.0) m += pi;
        return {m};
    }
};

enum class Branch { OverSqueezed, UnderSqueezedA, UnderSqueezedB };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::OverSqueezed: return "over-squeezed";
        case Branch::UnderSqueezedA: return "under-squeezed-a";
        default: return "under-squeezed-b";
    }
}

struct MeasureReport {
    double value = 0.0;
    double witness_part = 0.0;
    double q_part = 0.0;
    std::optional<Branch> branch;
    std::optional<Decomposition> decomposition;
};

/// <n> - |<a>|^2 + |<a^2> - <a>^2| for a normalized pure state.
inline double ort_pure(const StateVector& psi, Expectations* out = nullptr) {
    const Expectations e = expectations(psi);
    if (out) *out = e;
    double v = e.mean_n - std::norm(e.mean_a) + std::abs(e.mean_a2 - e.mean_a * e.mean_a);
    if (v < 0.0 && v > -1e-12) v = 0.0;
    return v;
}

/// Evaluates the roof objective at one fixed decomposition of rho. The
/// result upper-bounds the measure of rho.
inline MeasureReport decomposition_objective(const DensityMatrix& rho,
                                             const Decomposition& d) {
    if (!verify_decomposition(rho, d))
        throw DecompositionMismatch("decomposition does not reconstruct the density matrix");
    const Expectations er = expectations(rho);
    double sum_abs2 = 0.0;
    cplx sum_sq{0.0, 0.0};
    for (const auto& ent : d.entries) {
        const Expectations es = expectations(ent.state);
        sum_abs2 += ent.weight * std::norm(es.mean_a);
        sum_sq += ent.weight * es.mean_a * es.mean_a;
    }
    MeasureReport rep;
    rep.q_part = er.mean_n - sum_abs2;
    rep.witness_part = std::abs(er.mean_a2 - sum_sq);
    rep.value = rep.q_part + rep.witness_part;
    rep.decomposition = d;
    return rep;
}

namespace detail {

// Shared precomputation for the quadrature Fisher information at any angle:
// F(mu) = <n> + 1/2 - Re(e^{2i mu} <a^2>)
//         - sum_{jk} w_jk [ (|A_kj|^2 + |A_jk|^2)/2 - Re(A_kj A_jk e^{2i mu}) ]
// with A_jk = <v_j|a|v_k> and w_jk = 2 l_j l_k / (l_j + l_k). Pairs with
// l_j + l_k below 1e-12 are removable singularities and contribute nothing.
struct FisherData {
    double c0 = 0.0;  // mu-independent part
    cplx z{0.0, 0.0}; // F(mu) = c0 + Re(e^{2i mu} z)
};

inline FisherData fisher_data(const DensityMatrix& rho) {
    const Expectations e = expectations(rho);
    const auto eig = eigendecompose(rho);
    std::vector<int> keep;
    for (int k = 0; k < static_cast<int>(eig.size()); ++k)
        if (eig[k].lambda > 0.0) keep.push_back(k);

    const int m = static_cast<int>(keep.size());
    std::vector<std::vector<cplx>> A(m, std::vector<cplx>(m));
    for (int kk = 0; kk < m; ++kk) {
        const StateVector lowered = ladder_annihilate(eig[keep[kk]].vector);
        for (int jj = 0; jj < m; ++jj)
            A[jj][kk] = inner(eig[keep[jj]].vector, lowered);
    }

    FisherData fd;
    fd.c0 = e.mean_n + 0.5;
    fd.z = -e.mean_a2;
    for (int jj = 0; jj < m; ++jj) {
        const double lj = eig[keep[jj]].lambda;
        for (int kk = 0; kk < m; ++kk) {
            const double lk = eig[keep[kk]].lambda;
            if (lj + lk < 1e-12) continue;
            const double w = 2.0 * lj * lk / (lj + lk);
            fd.c0 -= 0.5 * w * (std::norm(A[kk][jj]) + std::norm(A[jj][kk]));
            fd.z += w * A[kk][jj] * A[jj][kk];
        }
    }
    return fd;
}

inline double fisher_at(const FisherData& fd, double mu) {
    return fd.c0 + (std::exp(cplx{0.0, 2.0 * mu}) * fd.z).real();
}

}  // namespace detail

/// Quadrature Fisher information (one fourth of the QFI) at a fixed angle.
inline double qfi_quadrature(const DensityMatrix& rho, QuadratureAngle mu) {
    return detail::fisher_at(detail::fisher_data(rho), mu.mu);
}

struct MetrologicalPower {
    double value = 0.0;        // max[F - 1/2, 0], clamped at 1e-12
    QuadratureAngle mu_star;   // maximizing quadrature
    double fisher_excess = 0.0;  // raw F_max - 1/2 before clamping
};

/// Maximizes F over the quadrature angle. F(mu) is a degree-2 trigonometric
/// polynomial c0 + c1 cos(2mu) + c2 sin(2mu), so a 3-point fit at angles
/// {0, pi/4, pi/2} recovers it exactly; the fit is cross-checked against a
/// 64-point grid.
inline MetrologicalPower metrological_power(const DensityMatrix& rho) {
    const detail::FisherData fd = detail::fisher_data(rho);
    const double pi = std::numbers::pi;

    const double f0 = detail::fisher_at(fd, 0.0);
    const double f45 = detail::fisher_at(fd, pi / 4.0);
    const double f90 = detail::fisher_at(fd, pi / 2.0);
    const double c0 = 0.5 * (f0 + f90);
    const double c1 = 0.5 * (f0 - f90);
    const double c2 = f45 - c0;

    const double fmax = c0 + std::hypot(c1, c2);
    double mu = 0.5 * std::atan2(c2, c1);

    const double fscale = std::max({1.0, std::abs(f0), std::abs(f90)});
    for (int k = 0; k < 64; ++k) {
        const double g = detail::fisher_at(fd, pi * k / 64.0);
        if (g > fmax + 1e-9 * fscale)
            throw NumericalStall("quadrature trig fit disagrees with grid scan");
    }

    MetrologicalPower mp;
    mp.fisher_excess = fmax - 0.5;
    mp.value = mp.fisher_excess > 1e-12 ? mp.fisher_excess : 0.0;
    mp.mu_star = QuadratureAngle::reduced(mu);
    return mp;
}

}  // namespace ort
