#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ort/errors.hpp"

// Truncated Fock-space representation of single-mode bosonic states, the
// state families used throughout the library, and expectation-value
// primitives for the annihilation operator and photon number.

namespace ort {

using cplx = std::complex<double>;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTailTol = 1e-12;
inline constexpr double kTruncationWarnTol = 1e-10;

// ---------------------------------------------------------------------------
// StateVector

struct StateVector {
    int dim = 0;                 // Fock cutoff, basis |0..dim-1>
    std::vector<cplx> amps;

    StateVector() = default;
    explicit StateVector(int d) : dim(d), amps(static_cast<size_t>(d), cplx{0.0, 0.0}) {}

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& a : amps) s += std::norm(a);
        return s;
    }
};

inline cplx inner(const StateVector& a, const StateVector& b) {
    cplx s{0.0, 0.0};
    const int d = std::min(a.dim, b.dim);
    for (int n = 0; n < d; ++n) s += std::conj(a.amps[n]) * b.amps[n];
    return s;
}

inline void normalize(StateVector& v) {
    const double n = std::sqrt(v.norm_sq());
    if (n <= 0.0) throw InvalidParameter("cannot normalize a zero vector");
    for (cplx& a : v.amps) a /= n;
}

inline void validate_state(const StateVector& v) {
    if (v.dim < 2) throw InvalidParameter("state dimension must be >= 2");
    if (static_cast<int>(v.amps.size()) != v.dim)
        throw InvalidParameter("amplitude count does not match dim");
    if (std::abs(v.norm_sq() - 1.0) > kNormTol)
        throw InvalidParameter("state vector is not normalized");
}

/// a|psi>, unnormalized: out[n] = sqrt(n+1) amps[n+1], top entry zero.
inline StateVector ladder_annihilate(const StateVector& v) {
    if (v.dim < 2) throw InvalidParameter("need dim >= 2 to apply the ladder operator");
    StateVector out(v.dim);
    for (int n = 0; n + 1 < v.dim; ++n)
        out.amps[n] = std::sqrt(static_cast<double>(n + 1)) * v.amps[n + 1];
    return out;
}

// ---------------------------------------------------------------------------
// DensityMatrix (row-major dim x dim, Hermitian, unit trace)

struct DensityMatrix {
    int dim = 0;
    std::vector<cplx> elems;  // elems[n*dim + m] = <n|rho|m>

    DensityMatrix() = default;
    explicit DensityMatrix(int d)
        : dim(d), elems(static_cast<size_t>(d) * static_cast<size_t>(d), cplx{0.0, 0.0}) {}

    cplx& at(int n, int m) { return elems[static_cast<size_t>(n) * dim + m]; }
    const cplx& at(int n, int m) const { return elems[static_cast<size_t>(n) * dim + m]; }
};

inline void validate_density(const DensityMatrix& rho) {
    if (rho.dim < 1 || static_cast<int>(rho.elems.size()) != rho.dim * rho.dim)
        throw InvalidParameter("density matrix storage does not match dim");
    cplx tr{0.0, 0.0};
    for (int n = 0; n < rho.dim; ++n) {
        tr += rho.at(n, n);
        for (int m = n; m < rho.dim; ++m) {
            if (std::abs(rho.at(n, m) - std::conj(rho.at(m, n))) > 1e-12)
                throw InvalidParameter("density matrix is not Hermitian");
        }
    }
    if (std::abs(tr - 1.0) > 1e-12) throw InvalidParameter("density matrix trace is not 1");
}

inline DensityMatrix pure_density(const StateVector& v) {
    DensityMatrix rho(v.dim);
    for (int n = 0; n < v.dim; ++n)
        for (int m = 0; m < v.dim; ++m) rho.at(n, m) = v.amps[n] * std::conj(v.amps[m]);
    return rho;
}

// ---------------------------------------------------------------------------
// Decomposition: weighted pure states realizing a density matrix.

struct Decomposition {
    struct Entry {
        double weight;
        StateVector state;
    };
    std::vector<Entry> entries;
};

inline DensityMatrix density_of(const Decomposition& d) {
    if (d.entries.empty()) throw InvalidParameter("empty decomposition");
    int dim = 0;
    for (const auto& e : d.entries) dim = std::max(dim, e.state.dim);
    DensityMatrix rho(dim);
    for (const auto& e : d.entries) {
        if (e.weight <= 0.0) throw InvalidParameter("decomposition weights must be positive");
        for (int n = 0; n < e.state.dim; ++n)
            for (int m = 0; m < e.state.dim; ++m)
                rho.at(n, m) += e.weight * e.state.amps[n] * std::conj(e.state.amps[m]);
    }
    return rho;
}

/// Checks weights sum to 1 and that the weighted sum of projectors matches
/// rho elementwise within tol.
inline bool verify_decomposition(const DensityMatrix& rho, const Decomposition& d,
                                 double tol = 1e-8) {
    double wsum = 0.0;
    for (const auto& e : d.entries) {
        if (e.weight <= 0.0) return false;
        wsum += e.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-10) return false;
    const DensityMatrix rec = density_of(d);
    if (rec.dim > rho.dim) {
        // reconstruction may only carry extra all-zero rows
        for (int n = 0; n < rec.dim; ++n)
            for (int m = 0; m < rec.dim; ++m) {
                const cplx want = (n < rho.dim && m < rho.dim) ? rho.at(n, m) : cplx{0.0, 0.0};
                if (std::abs(rec.at(n, m) - want) > tol) return false;
            }
        return true;
    }
    for (int n = 0; n < rho.dim; ++n)
        for (int m = 0; m < rho.dim; ++m) {
            const cplx got = (n < rec.dim && m < rec.dim) ? rec.at(n, m) : cplx{0.0, 0.0};
            if (std::abs(got - rho.at(n, m)) > tol) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Expectation values of n, a, a^2.

struct Expectations {
    double mean_n = 0.0;
    cplx mean_a{0.0, 0.0};
    cplx mean_a2{0.0, 0.0};
    // Population in the top two Fock levels exceeded 1e-10; values may be
    // unreliable because the operators were cut at the basis edge.
    bool truncation_warning = false;
};

inline Expectations expectations(const DensityMatrix& rho) {
    Expectations e;
    const int d = rho.dim;
    for (int n = 0; n < d; ++n) e.mean_n += n * rho.at(n, n).real();
    for (int n = 0; n + 1 < d; ++n)
        e.mean_a += std::sqrt(static_cast<double>(n + 1)) * rho.at(n + 1, n);
    for (int n = 0; n + 2 < d; ++n)
        e.mean_a2 += std::sqrt(static_cast<double>((n + 1) * (n + 2))) * rho.at(n + 2, n);
    double top = 0.0;
    if (d >= 1) top += rho.at(d - 1, d - 1).real();
    if (d >= 2) top += rho.at(d - 2, d - 2).real();
    e.truncation_warning = top > kTruncationWarnTol;
    return e;
}

inline Expectations expectations(const StateVector& v) {
    Expectations e;
    for (int n = 0; n < v.dim; ++n) e.mean_n += n * std::norm(v.amps[n]);
    for (int n = 0; n + 1 < v.dim; ++n)
        e.mean_a += std::conj(v.amps[n]) * std::sqrt(static_cast<double>(n + 1)) * v.amps[n + 1];
    for (int n = 0; n + 2 < v.dim; ++n)
        e.mean_a2 += std::conj(v.amps[n]) *
                     std::sqrt(static_cast<double>((n + 1) * (n + 2))) * v.amps[n + 2];
    double top = std::norm(v.amps[v.dim - 1]);
    if (v.dim >= 2) top += std::norm(v.amps[v.dim - 2]);
    e.truncation_warning = top > kTruncationWarnTol;
    return e;
}

// ---------------------------------------------------------------------------
// Cutoff rules. Tail population neglected by the cutoff must stay below
// 1e-12; constructors verify and raise CutoffTooSmall otherwise.

inline int default_dim_coherent(double alpha_mag) {
    const double d = alpha_mag * alpha_mag + 10.0 * alpha_mag + 20.0;
    return std::max(24, static_cast<int>(std::ceil(d)));
}

inline int default_dim_squeezed(double gamma) {
    const double sh = std::sinh(gamma);
    return std::max(24, static_cast<int>(std::ceil(8.0 * sh * sh + 30.0)));
}

namespace detail {
inline void check_tail(double captured_norm_sq, const char* what) {
    if (1.0 - captured_norm_sq > kTailTol)
        throw CutoffTooSmall(std::string(what) + ": neglected tail exceeds 1e-12, increase dim");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// State constructors.

inline StateVector make_fock(int n, int dim = 0) {
    if (n < 0) throw InvalidParameter("Fock index must be >= 0");
    if (dim == 0) dim = std::max(n + 2, 2);
    if (dim < n + 1) throw CutoffTooSmall("make_fock: dim <= n");
    StateVector v(dim);
    v.amps[n] = 1.0;
    return v;
}

inline StateVector make_coherent(cplx alpha, int dim = 0) {
    if (dim == 0) dim = default_dim_coherent(std::abs(alpha));
    StateVector v(dim);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!)
    cplx c = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        v.amps[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    detail::check_tail(v.norm_sq(), "make_coherent");
    normalize(v);
    return v;
}

enum class Parity { Even, Odd };

/// cat_+- = (2 +- 2 e^{-2|a|^2})^{-1/2} (|a> +- |-a>): even/odd Fock support.
inline StateVector make_cat(cplx alpha, Parity parity, int dim = 0) {
    if (std::abs(alpha) == 0.0 && parity == Parity::Odd)
        throw InvalidParameter("odd cat state undefined at alpha = 0");
    if (dim == 0) dim = default_dim_coherent(std::abs(alpha));
    StateVector v(dim);
    cplx c = std::exp(-0.5 * std::norm(alpha));
    const int want = parity == Parity::Even ? 0 : 1;
    for (int n = 0; n < dim; ++n) {
        if (n % 2 == want) v.amps[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    // exact unnormalized norm of the even/odd restriction is (1 +- e^{-2|a|^2})/2
    const double exact = 0.5 * (1.0 + (parity == Parity::Even ? 1.0 : -1.0) *
                                          std::exp(-2.0 * std::norm(alpha)));
    detail::check_tail(v.norm_sq() / exact, "make_cat");
    normalize(v);
    return v;
}

/// Three-component cat: equal-weight superposition of |a>, |w a>, |w^2 a>
/// with internal phases w^{jk}, w = e^{2 pi i/3}. Fock support on
/// n = -k (mod 3); the annihilation operator cycles k -> k+1 (mod 3).
inline StateVector make_cat3(cplx alpha, int k, int dim = 0) {
    if (k < 0 || k > 2) throw InvalidParameter("cat3 branch k must be 0, 1 or 2");
    if (std::abs(alpha) == 0.0 && k != 0)
        throw InvalidParameter("cat3 branches 1,2 undefined at alpha = 0");
    if (dim == 0) dim = default_dim_coherent(std::abs(alpha));
    StateVector v(dim);
    cplx c = std::exp(-0.5 * std::norm(alpha));
    double total = 0.0;
    for (int n = 0; n < dim; ++n) {
        total += std::norm(c);
        if ((n + k) % 3 == 0) v.amps[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    // the enclosing coherent tail bounds this branch's tail
    detail::check_tail(1.0 - (1.0 - total) / v.norm_sq(), "make_cat3");
    normalize(v);
    return v;
}

/// Squeezed vacuum S|0> with S = exp[(g e^{-2i mu} a^2 - g e^{2i mu} a+^2)/2]:
/// amps on even levels, c_{2m} ~ (-e^{2i mu} tanh g)^m sqrt((2m)!)/(2^m m!).
inline StateVector make_squeezed_vacuum(double gamma, double mu, int dim = 0) {
    if (gamma <= 0.0) throw InvalidParameter("squeezing strength must be > 0");
    if (dim == 0) dim = default_dim_squeezed(gamma);
    StateVector v(dim);
    const cplx z = -std::exp(cplx{0.0, 2.0 * mu}) * std::tanh(gamma);
    cplx c = 1.0 / std::sqrt(std::cosh(gamma));
    for (int m = 0; 2 * m < dim; ++m) {
        v.amps[2 * m] = c;
        // c_{m+1}/c_m = z sqrt((2m+1)(2m+2))/(2m+2)
        c *= z * std::sqrt(static_cast<double>((2 * m + 1) * (2 * m + 2))) /
             static_cast<double>(2 * m + 2);
    }
    detail::check_tail(v.norm_sq(), "make_squeezed_vacuum");
    normalize(v);
    return v;
}

/// Photon-subtracted squeezed vacuum (-i e^{-i mu} csch g) a|SV>, normalized.
inline StateVector make_photon_subtracted_sv(double gamma, double mu, int dim = 0) {
    StateVector sv = make_squeezed_vacuum(gamma, mu, dim);
    StateVector v = ladder_annihilate(sv);
    const cplx pref = cplx{0.0, -1.0} * std::exp(cplx{0.0, -mu}) / std::sinh(gamma);
    for (cplx& a : v.amps) a *= pref;
    detail::check_tail(v.norm_sq(), "make_photon_subtracted_sv");
    normalize(v);
    return v;
}

/// Level-skipping pair: phi2 = a2|n> + b2|n+2> (a2 = sqrt(1-|b2|^2) > 0),
/// phi1 proportional to a phi2. Both are normalized and orthogonal, with
/// vanishing <a> by parity of the two-level support.
inline std::pair<StateVector, StateVector> make_level_skip_pair(int n, cplx beta2,
                                                                int dim = 0) {
    if (n < 0) throw InvalidParameter("level-skip n must be >= 0");
    const double b2 = std::abs(beta2);
    if (b2 >= 1.0) throw InvalidParameter("level-skip requires |beta2| < 1");
    const double m = n + 2.0 * b2 * b2;
    if (m <= 0.0) throw InvalidParameter("level-skip state has no support under a");
    if (dim == 0) dim = std::max(n + 4, 4);
    if (dim < n + 3) throw CutoffTooSmall("make_level_skip_pair: need dim >= n+3");
    const double a2 = std::sqrt(1.0 - b2 * b2);
    StateVector phi2(dim);
    phi2.amps[n] = a2;
    phi2.amps[n + 2] = beta2;
    StateVector phi1 = ladder_annihilate(phi2);
    for (cplx& a : phi1.amps) a /= std::sqrt(m);
    return {phi1, phi2};
}

/// Indefinite-parity pair on {|n>,|n+1>,|n+2>}: orthogonality requires
/// y z = 2n+3 and a - b = k pi with odd k.
inline std::pair<StateVector, StateVector> make_indefinite_parity_pair(
    int n, double y, double a_phase, double b_phase, int k_odd, int dim = 0) {
    if (n < 0) throw InvalidParameter("indefinite-parity n must be >= 0");
    if (y <= 0.0) throw InvalidParameter("indefinite-parity requires y > 0");
    if (k_odd % 2 == 0) throw InvalidParameter("indefinite-parity requires odd k");
    const double pi = std::numbers::pi;
    if (std::abs(a_phase - b_phase - k_odd * pi) > 1e-9)
        throw InvalidParameter("indefinite-parity requires a - b = k pi");
    const double z = (2.0 * n + 3.0) / y;
    if (dim == 0) dim = std::max(n + 4, 4);
    if (dim < n + 3) throw CutoffTooSmall("make_indefinite_parity_pair: need dim >= n+3");
    const double sq1 = std::sqrt(n + 1.0), sq2 = std::sqrt(n + 2.0);
    StateVector xi1(dim), xi2(dim);
    xi1.amps[n + 2] = sq1;
    xi1.amps[n + 1] = z * std::exp(cplx{0.0, b_phase});
    xi1.amps[n] = -sq2 * std::exp(cplx{0.0, 2.0 * b_phase});
    xi2.amps[n + 2] = sq1;
    xi2.amps[n + 1] = y * std::exp(cplx{0.0, a_phase});
    xi2.amps[n] = -sq2 * std::exp(cplx{0.0, 2.0 * a_phase});
    normalize(xi1);
    normalize(xi2);
    return {xi1, xi2};
}

// ---------------------------------------------------------------------------
// Phase shift: rho'_{nm} = e^{-i(n-m)chi} rho_{nm} (diagonal conjugation).

inline DensityMatrix apply_phase_shift(const DensityMatrix& rho, double chi) {
    DensityMatrix out(rho.dim);
    for (int n = 0; n < rho.dim; ++n)
        for (int m = 0; m < rho.dim; ++m)
            out.at(n, m) = std::exp(cplx{0.0, -(n - m) * chi}) * rho.at(n, m);
    return out;
}

inline StateVector apply_phase_shift(const StateVector& v, double chi) {
    StateVector out(v.dim);
    for (int n = 0; n < v.dim; ++n)
        out.amps[n] = std::exp(cplx{0.0, -n * chi}) * v.amps[n];
    return out;
}

}  // namespace ort
