#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ort/errors.hpp"
#include "ort/fock.hpp"

// Bosonic dephasing channels. A channel is a statistical mixture of phase
// rotations e^{-i n phi}; it preserves photon number populations and
// multiplies each coherence rho_{nm} by a characteristic factor kappa(n-m).
// Kernels are represented directly by kappa, evaluated exactly by finite
// sums, never by quadrature.

namespace ort {

struct DephasingKernel {
    enum class Kind { Total, Atoms, Lorentzian, TwoPoint };
    Kind kind = Kind::Total;
    std::vector<std::pair<double, double>> atoms;  // (phi in (-pi,pi], weight>0)
    double gamma_t = 0.0;   // Lorentzian: |kappa(m)| = e^{-|m| gamma t}
    double omega0_t = 0.0;  // Lorentzian: rotation e^{-i m omega0 t}
    double f_ratio = 1.0;   // TwoPoint: odd coherences scaled by f'/f
};

inline DephasingKernel total_kernel() { return {}; }

inline DephasingKernel atoms_kernel(std::vector<std::pair<double, double>> atoms) {
    double wsum = 0.0;
    for (auto& [phi, w] : atoms) {
        if (w <= 0.0) throw InvalidParameter("kernel atom weights must be positive");
        if (phi <= -std::numbers::pi || phi > std::numbers::pi)
            throw InvalidParameter("kernel atom phases must lie in (-pi, pi]");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw InvalidParameter("kernel atom weights must sum to 1");
    DephasingKernel k;
    k.kind = DephasingKernel::Kind::Atoms;
    k.atoms = std::move(atoms);
    return k;
}

inline DephasingKernel lorentzian_kernel(double gamma_t, double omega0_t = 0.0) {
    if (gamma_t < 0.0) throw InvalidParameter("Lorentzian kernel needs gamma t >= 0");
    DephasingKernel k;
    k.kind = DephasingKernel::Kind::Lorentzian;
    k.gamma_t = gamma_t;
    k.omega0_t = omega0_t;
    return k;
}

/// D(rho) = [(1 - r) e^{-i n pi} rho e^{i n pi} + (1 + r) rho] / 2:
/// even coherences untouched, odd ones scaled by r.
inline DephasingKernel two_point_kernel(double f_ratio) {
    if (f_ratio < 0.0 || f_ratio > 1.0)
        throw InvalidParameter("two-point kernel ratio must be in [0,1]");
    DephasingKernel k;
    k.kind = DephasingKernel::Kind::TwoPoint;
    k.f_ratio = f_ratio;
    return k;
}

/// Symmetrizes atoms given on [0, pi]: each (phi, w) splits into
/// (+-phi, w/2), so kappa(m) = sum w cos(m phi) is real.
inline DephasingKernel symmetric_kernel(const std::vector<std::pair<double, double>>& half) {
    std::vector<std::pair<double, double>> atoms;
    double wsum = 0.0;
    for (const auto& [phi, w] : half) {
        if (phi < 0.0 || phi > std::numbers::pi)
            throw InvalidParameter("symmetric kernel atoms must lie in [0, pi]");
        if (w <= 0.0) throw InvalidParameter("kernel atom weights must be positive");
        wsum += w;
        if (phi == 0.0 || phi == std::numbers::pi) {
            atoms.push_back({phi, w});
        } else {
            atoms.push_back({phi, 0.5 * w});
            atoms.push_back({-phi, 0.5 * w});
        }
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw InvalidParameter("kernel atom weights must sum to 1");
    return atoms_kernel(std::move(atoms));
}

/// Characteristic factor kappa(m) multiplying the coherence <n+m|rho|n>.
/// kappa(0) = 1 for every kernel (populations are preserved exactly).
inline cplx kappa(const DephasingKernel& k, int m) {
    switch (k.kind) {
        case DephasingKernel::Kind::Total:
            return m == 0 ? 1.0 : 0.0;
        case DephasingKernel::Kind::Atoms: {
            cplx s{0.0, 0.0};
            for (const auto& [phi, w] : k.atoms) s += w * std::exp(cplx{0.0, -m * phi});
            return s;
        }
        case DephasingKernel::Kind::Lorentzian:
            return std::exp(cplx{0.0, -m * k.omega0_t}) *
                   std::exp(-std::abs(m) * k.gamma_t);
        case DephasingKernel::Kind::TwoPoint:
            return (m % 2 == 0) ? 1.0 : k.f_ratio;
    }
    return 0.0;
}

inline DensityMatrix apply_dephasing(const DensityMatrix& rho, const DephasingKernel& k) {
    DensityMatrix out(rho.dim);
    for (int n = 0; n < rho.dim; ++n) {
        out.at(n, n) = rho.at(n, n);
        for (int m = n + 1; m < rho.dim; ++m) {
            out.at(n, m) = rho.at(n, m) * std::conj(kappa(k, m - n));
            out.at(m, n) = std::conj(out.at(n, m));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dephasing connectivity for partially coherent three-Fock mixtures.
// Two such states (same populations, same coherence phases) are related by
// a symmetric dephasing channel iff both nearest-neighbor coherences shrink
// by one common real factor x and the skip coherence by y, with |x| <= 1,
// |y| <= 1 and 2x^2 - 1 <= y.

struct ConnectivityResult {
    bool connected = false;
    std::optional<double> x;  // nearest-neighbor ratio (empty if unconstrained)
    std::optional<double> y;  // skip ratio
    std::string reason;
};

namespace detail {

struct RatioConstraint {
    bool attainable = true;           // false: dephasing cannot produce rho'
    std::optional<double> ratio;      // empty: both coherences zero, no constraint
};

inline RatioConstraint coherence_ratio(cplx num, cplx den) {
    RatioConstraint rc;
    const double scale = std::max(std::abs(num), std::abs(den));
    if (scale < 1e-14) return rc;  // unconstrained
    if (std::abs(den) < 1e-14 * std::max(scale, 1.0)) {
        rc.attainable = false;  // zero coherence cannot grow back
        return rc;
    }
    const cplx r = num / den;
    if (std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r))) {
        rc.attainable = false;  // a real characteristic factor cannot rotate phases
        return rc;
    }
    rc.ratio = r.real();
    return rc;
}

}  // namespace detail

inline ConnectivityResult connectivity_check_3fock(const DensityMatrix& rho,
                                                   const DensityMatrix& rho_prime) {
    // locate the three-level window
    const int d = std::min(rho.dim, rho_prime.dim);
    int n0 = -1;
    for (int n = 0; n < d; ++n)
        if (rho.at(n, n).real() > 1e-12) {
            n0 = n;
            break;
        }
    if (n0 < 0 || n0 + 2 >= rho.dim || n0 + 2 >= rho_prime.dim)
        throw PreconditionViolation("states are not three-Fock-level mixtures");
    for (int n = 0; n < d; ++n) {
        const double pop = rho.at(n, n).real();
        if ((n < n0 || n > n0 + 2) && pop > 1e-12)
            throw PreconditionViolation("population outside the three-level window");
        if (std::abs(pop - rho_prime.at(n, n).real()) > 1e-10)
            throw PreconditionViolation("photon number populations differ");
    }

    ConnectivityResult res;
    const auto rx1 = detail::coherence_ratio(rho_prime.at(n0 + 2, n0 + 1), rho.at(n0 + 2, n0 + 1));
    const auto rx2 = detail::coherence_ratio(rho_prime.at(n0 + 1, n0), rho.at(n0 + 1, n0));
    const auto ry = detail::coherence_ratio(rho_prime.at(n0 + 2, n0), rho.at(n0 + 2, n0));
    if (!rx1.attainable || !rx2.attainable || !ry.attainable) {
        res.reason = "a coherence cannot be produced by dephasing";
        return res;
    }

    std::optional<double> x;
    if (rx1.ratio && rx2.ratio) {
        const double scale = std::max({std::abs(*rx1.ratio), std::abs(*rx2.ratio), 1e-12});
        if (std::abs(*rx1.ratio - *rx2.ratio) > 1e-9 * scale) {
            res.x = rx1.ratio;
            res.reason = "nearest-neighbor ratios are inconsistent";
            return res;
        }
        x = rx1.ratio;
    } else if (rx1.ratio) {
        x = rx1.ratio;
    } else if (rx2.ratio) {
        x = rx2.ratio;
    }
    res.x = x;
    res.y = ry.ratio;

    if (x && std::abs(*x) > 1.0 + 1e-12) {
        res.reason = "nearest-neighbor coherence would grow";
        return res;
    }
    if (ry.ratio && std::abs(*ry.ratio) > 1.0 + 1e-12) {
        res.reason = "skip coherence would grow";
        return res;
    }
    // cos-moment inequality <cos 2phi> >= 2<cos phi>^2 - 1
    const double xx = x.value_or(0.0);           // unconstrained x can be 0
    const double yy = ry.ratio.value_or(1.0);    // unconstrained y can be 1
    if (2.0 * xx * xx - 1.0 > yy + 1e-12) {
        res.reason = "cos-moment inequality violated";
        return res;
    }
    res.connected = true;
    return res;
}

}  // namespace ort
