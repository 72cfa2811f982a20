#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "ort/errors.hpp"
#include "ort/fock.hpp"

// Dense Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Matrices here are small (Fock cutoffs of a few dozen), so the O(n^3)
// sweeps are cheap and the result is deterministic: eigenvalues sorted
// descending, each eigenvector phase-fixed so its first nonzero component
// is real positive.

namespace ort {

struct EigenSystem {
    std::vector<double> values;             // descending
    std::vector<std::vector<cplx>> vectors; // vectors[k][i] = <i|v_k>
};

inline EigenSystem hermitian_eigensystem(std::vector<cplx> a, int n) {
    std::vector<cplx> v(static_cast<size_t>(n) * n, cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
    auto A = [&](int i, int j) -> cplx& { return a[static_cast<size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> cplx& { return v[static_cast<size_t>(i) * n + j]; };

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(A(i, i)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) scale = std::max(scale, std::abs(A(i, j)));
    const double stop = std::max(scale, 1.0) * 1e-15;

    bool converged = (n <= 1);
    for (int sweep = 0; sweep < 80 && !converged; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(A(i, j)));
        if (off <= stop) {
            converged = true;
            break;
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = A(p, q);
                if (std::abs(apq) <= stop) continue;
                // Unitary 2x2: rows/cols p,q rotated by angle t with phase of apq.
                const double app = A(p, p).real(), aqq = A(q, q).real();
                const cplx phase = apq / std::abs(apq);
                const double tau = (aqq - app) / (2.0 * std::abs(apq));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = t * c * phase;
                for (int k = 0; k < n; ++k) {
                    const cplx akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - std::conj(s) * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = std::conj(s) * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - std::conj(s) * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
            }
        }
    }

    if (!converged) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(A(i, j)));
        if (off > stop) throw NumericalStall("Jacobi eigensolver did not converge");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[i] > diag[j]; });

    EigenSystem out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<cplx>(n));
    for (int k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        for (int i = 0; i < n; ++i) out.vectors[k][i] = V(i, order[k]);
        // phase fix: first component above threshold made real positive
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(out.vectors[k][i]);
            if (m > 1e-12) {
                const cplx ph = std::conj(out.vectors[k][i]) / m;
                for (int j = 0; j < n; ++j) out.vectors[k][j] *= ph;
                break;
            }
        }
    }
    return out;
}

struct EigenPair {
    double lambda;
    StateVector vector;
};

/// Eigendecomposition of a density matrix. Eigenvalues in [-1e-10, 0) are
/// clipped to 0; anything below -1e-10 raises NotPSD.
inline std::vector<EigenPair> eigendecompose(const DensityMatrix& rho) {
    EigenSystem es = hermitian_eigensystem(rho.elems, rho.dim);
    std::vector<EigenPair> out;
    out.reserve(rho.dim);
    for (int k = 0; k < rho.dim; ++k) {
        double lam = es.values[k];
        if (lam < -kPsdTol) throw NotPSD("density matrix has eigenvalue < -1e-10");
        if (lam < 0.0) lam = 0.0;
        StateVector v(rho.dim);
        v.amps = std::move(es.vectors[k]);
        out.push_back({lam, std::move(v)});
    }
    return out;
}

}  // namespace ort
