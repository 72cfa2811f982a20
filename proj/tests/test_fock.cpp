#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ort/eigen.hpp"
#include "ort/fock.hpp"
#include "ort/rng.hpp"

using namespace ort;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double rel_err(cplx got, cplx want) {
    const double scale = std::max(std::abs(want), 1e-30);
    return std::abs(got - want) / scale;
}

cplx a_elem(const StateVector& bra, const StateVector& ket) {
    return inner(bra, ladder_annihilate(ket));
}

cplx a2_elem(const StateVector& bra, const StateVector& ket) {
    return inner(bra, ladder_annihilate(ladder_annihilate(ket)));
}
}  // namespace

TEST_CASE("ladder operator on Fock states") {
    const StateVector f1 = make_fock(1, 4);
    const StateVector lowered = ladder_annihilate(f1);
    REQUIRE(lowered.amps[0].real() == Approx(1.0).margin(1e-15));

    const StateVector f4 = make_fock(4, 6);
    REQUIRE(ladder_annihilate(f4).amps[3].real() == Approx(2.0).margin(1e-15));  // sqrt(4)

    const StateVector vac = make_fock(0, 4);
    REQUIRE(ladder_annihilate(vac).norm_sq() == Approx(0.0).margin(1e-30));
}

TEST_CASE("expectation values of basic states") {
    const DensityMatrix one = pure_density(make_fock(1, 5));
    const Expectations e1 = expectations(one);
    REQUIRE(e1.mean_n == Approx(1.0).margin(1e-14));
    REQUIRE(std::abs(e1.mean_a) == Approx(0.0).margin(1e-14));
    REQUIRE(std::abs(e1.mean_a2) == Approx(0.0).margin(1e-14));

    const StateVector coh = make_coherent(0.5);
    const Expectations ec = expectations(coh);
    REQUIRE(ec.mean_n == Approx(0.25).margin(1e-13));
    REQUIRE(ec.mean_a.real() == Approx(0.5).margin(1e-13));
    REQUIRE(ec.mean_a2.real() == Approx(0.25).margin(1e-13));

    // coherent states are annihilation-operator eigenstates
    StateVector lowered = ladder_annihilate(coh);
    for (int n = 0; n + 1 < coh.dim; ++n)
        REQUIRE(std::abs(lowered.amps[n] - 0.5 * coh.amps[n]) < 1e-12);

    const Expectations esv = expectations(make_squeezed_vacuum(0.3, 0.0));
    REQUIRE(esv.mean_n == Approx(std::sinh(0.3) * std::sinh(0.3)).margin(1e-12));
}

TEST_CASE("truncation warning fires when the top levels are occupied") {
    StateVector v(6);
    v.amps[5] = 1.0;
    REQUIRE(expectations(v).truncation_warning);
    REQUIRE_FALSE(expectations(make_coherent(0.5)).truncation_warning);
}

TEST_CASE("cutoff too small raises") {
    REQUIRE_THROWS_AS(make_coherent(3.0, 10), CutoffTooSmall);
    REQUIRE_THROWS_AS(make_squeezed_vacuum(0.3, 0.0, 6), CutoffTooSmall);
    REQUIRE_NOTHROW(make_coherent(3.0));
}

TEST_CASE("cat state photon numbers and orthogonality") {
    const StateVector cp = make_cat(0.5, Parity::Even);
    const StateVector cm = make_cat(0.5, Parity::Odd);
    REQUIRE(expectations(cp).mean_n == Approx(0.25 * std::tanh(0.25)).margin(1e-12));
    REQUIRE(expectations(cm).mean_n == Approx(0.25 / std::tanh(0.25)).margin(1e-12));
    REQUIRE(std::abs(inner(cp, cm)) < 1e-14);
}

TEST_CASE("cat matrix elements match the closed forms") {
    Rng rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = rng.uniform(0.3, 1.5);
        const double a2 = alpha * alpha;
        const StateVector cp = make_cat(alpha, Parity::Even);
        const StateVector cm = make_cat(alpha, Parity::Odd);
        REQUIRE(rel_err(a_elem(cp, cm), alpha * std::sqrt(1.0 / std::tanh(a2))) < 1e-10);
        REQUIRE(rel_err(a_elem(cm, cp), alpha * std::sqrt(std::tanh(a2))) < 1e-10);
        REQUIRE(rel_err(a2_elem(cp, cp), a2) < 1e-10);
        REQUIRE(rel_err(a2_elem(cm, cm), a2) < 1e-10);
        REQUIRE(rel_err(expectations(cp).mean_n, a2 * std::tanh(a2)) < 1e-10);
        REQUIRE(rel_err(expectations(cm).mean_n, a2 / std::tanh(a2)) < 1e-10);
    }
}

TEST_CASE("squeezed vacuum matrix elements match the closed forms") {
    Rng rng(92);
    for (int trial = 0; trial < 20; ++trial) {
        const double g = rng.uniform(0.05, 0.42);
        const double mu = rng.uniform(-kPi, kPi);
        const StateVector sv = make_squeezed_vacuum(g, mu);
        const StateVector svm = make_photon_subtracted_sv(g, mu);
        const cplx phase = std::exp(cplx{0.0, mu});
        const double sh = std::sinh(g), ch = std::cosh(g);
        REQUIRE(std::abs(inner(sv, svm)) < 1e-12);
        REQUIRE(rel_err(a_elem(sv, svm), cplx{0.0, 1.0} * phase * ch) < 1e-10);
        REQUIRE(rel_err(a_elem(svm, sv), cplx{0.0, 1.0} * phase * sh) < 1e-10);
        REQUIRE(rel_err(a2_elem(sv, sv), -phase * phase * sh * ch) < 1e-10);
        REQUIRE(rel_err(a2_elem(svm, svm), -3.0 * phase * phase * sh * ch) < 1e-10);
        REQUIRE(rel_err(expectations(sv).mean_n, sh * sh) < 1e-9);
        REQUIRE(rel_err(expectations(svm).mean_n, 2.0 * sh * sh + ch * ch) < 1e-10);
    }
}

TEST_CASE("level-skipping pair matrix elements") {
    Rng rng(93);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(0, 5);
        const double b = rng.uniform(0.1, 0.95);
        const cplx beta2 = b * std::exp(cplx{0.0, rng.uniform(-kPi, kPi)});
        const auto [phi1, phi2] = make_level_skip_pair(n, beta2);
        const double m = n + 2.0 * b * b;
        const double a2c = std::sqrt(1.0 - b * b);
        const double rt = std::sqrt((n + 2.0) * (n + 1.0));
        REQUIRE(std::abs(inner(phi1, phi2)) < 1e-13);
        REQUIRE(rel_err(a_elem(phi1, phi2), std::sqrt(m)) < 1e-10);
        REQUIRE(rel_err(a_elem(phi2, phi1), a2c * beta2 * rt / std::sqrt(m)) < 1e-10);
        REQUIRE(rel_err(a2_elem(phi1, phi1), a2c * beta2 * static_cast<double>(n) * rt / m) <
                1e-10);
        REQUIRE(rel_err(a2_elem(phi2, phi2), a2c * beta2 * rt) < 1e-10);
        REQUIRE(rel_err(expectations(phi2).mean_n, m) < 1e-10);
        const double n1 = n - n / m * a2c * a2c + (n + 2.0) / m * b * b;
        REQUIRE(rel_err(expectations(phi1).mean_n, n1) < 1e-10);
    }
}

TEST_CASE("indefinite parity pair matrix elements") {
    Rng rng(94);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(0, 4);
        const double y = rng.uniform(0.6, 3.0);
        const double b = rng.uniform(-kPi, kPi);
        const int k = 2 * rng.uniform_int(0, 2) + 1;  // 1, 3, 5
        const double a = b + k * kPi;
        const double z = (2.0 * n + 3.0) / y;
        const auto [xi1, xi2] = make_indefinite_parity_pair(n, y, a, b, k);
        const double A = 1.0 / std::sqrt(2.0 * n + 3.0 + y * y);
        const double B = 1.0 / std::sqrt(2.0 * n + 3.0 + z * z);
        const double nn = (n + 1.0) * (n + 2.0);
        REQUIRE(std::abs(inner(xi1, xi2)) < 1e-12);
        REQUIRE(rel_err(a_elem(xi1, xi2),
                        std::sqrt(nn) * A * B * (z + y) * std::exp(cplx{0.0, -b})) < 1e-10);
        REQUIRE(rel_err(a_elem(xi2, xi1),
                        std::sqrt(nn) * A * B * (z + y) * std::exp(cplx{0.0, -a})) < 1e-10);
        REQUIRE(rel_err(a2_elem(xi1, xi1),
                        B * B * nn * std::exp(cplx{0.0, -(2.0 * b + k * kPi)})) < 1e-10);
        REQUIRE(rel_err(a2_elem(xi2, xi2),
                        A * A * nn * std::exp(cplx{0.0, -(2.0 * a - k * kPi)})) < 1e-10);
        REQUIRE(rel_err(expectations(xi1).mean_n,
                        B * B * (2.0 * n * n + 5 * n + 2 + (n + 1.0) * z * z)) < 1e-10);
        REQUIRE(rel_err(expectations(xi2).mean_n,
                        A * A * (2.0 * n * n + 5 * n + 2 + (n + 1.0) * y * y)) < 1e-10);
    }
    REQUIRE_THROWS_AS(make_indefinite_parity_pair(1, 2.0, 2 * kPi, 0.0, 2), InvalidParameter);
}

TEST_CASE("special-family states are centered at the origin") {
    Rng rng(95);
    auto centered = [](const StateVector& v) {
        return std::abs(inner(v, ladder_annihilate(v)));
    };
    for (int trial = 0; trial < 10; ++trial) {
        const double alpha = rng.uniform(0.3, 1.4);
        REQUIRE(centered(make_cat(alpha, Parity::Even)) < 1e-12);
        REQUIRE(centered(make_cat(alpha, Parity::Odd)) < 1e-12);
        const double g = rng.uniform(0.05, 0.4);
        REQUIRE(centered(make_squeezed_vacuum(g, rng.uniform(0.0, kPi))) < 1e-12);
        REQUIRE(centered(make_photon_subtracted_sv(g, 0.0)) < 1e-12);
        const auto [p1, p2] = make_level_skip_pair(rng.uniform_int(0, 4) + 1,
                                                   rng.uniform(0.1, 0.9));
        REQUIRE(centered(p1) < 1e-12);
        REQUIRE(centered(p2) < 1e-12);
        const auto [x1, x2] =
            make_indefinite_parity_pair(rng.uniform_int(0, 3), rng.uniform(0.7, 3.0), kPi, 0.0, 1);
        REQUIRE(centered(x1) < 1e-12);
        REQUIRE(centered(x2) < 1e-12);
        for (int k = 0; k < 3; ++k) REQUIRE(centered(make_cat3(alpha, k)) < 1e-12);
    }
}

TEST_CASE("three-component cats are orthogonal and cycled by the ladder") {
    const double alpha = 0.5;
    StateVector cats[3] = {make_cat3(alpha, 0), make_cat3(alpha, 1), make_cat3(alpha, 2)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double want = i == j ? 1.0 : 0.0;
            REQUIRE(std::abs(inner(cats[i], cats[j])) == Approx(want).margin(1e-13));
        }
    // Fock support: <n|cat_i> = 0 unless n + i = 0 (mod 3)
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < cats[i].dim; ++n)
            if ((n + i) % 3 != 0) REQUIRE(std::abs(cats[i].amps[n]) < 1e-15);
    // annihilation maps cat_i onto cat_{i+1 mod 3}
    for (int i = 0; i < 3; ++i) {
        const StateVector lowered = ladder_annihilate(cats[i]);
        const double total = std::sqrt(lowered.norm_sq());
        REQUIRE(std::abs(inner(cats[(i + 1) % 3], lowered)) == Approx(total).margin(1e-12));
    }
}

TEST_CASE("phase shift conjugates coherences and keeps eigenvalues") {
    // chi = 0 is the identity
    const StateVector sup = [] {
        StateVector v(4);
        v.amps[0] = v.amps[1] = 1.0 / std::sqrt(2.0);
        return v;
    }();
    const DensityMatrix rho = pure_density(sup);
    const DensityMatrix same = apply_phase_shift(rho, 0.0);
    for (int i = 0; i < rho.dim * rho.dim; ++i)
        REQUIRE(std::abs(rho.elems[i] - same.elems[i]) < 1e-15);

    // chi = pi flips the sign of nearest-neighbor coherences
    const DensityMatrix flipped = apply_phase_shift(rho, kPi);
    REQUIRE(flipped.at(1, 0).real() == Approx(-0.5).margin(1e-12));
    REQUIRE(flipped.at(0, 0).real() == Approx(0.5).margin(1e-15));

    Rng rng(96);
    DensityMatrix r(5);
    Decomposition d;
    for (int k = 0; k < 3; ++k) {
        StateVector v(5);
        for (auto& amp : v.amps) amp = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        normalize(v);
        d.entries.push_back({k == 0 ? 0.5 : 0.25, v});
    }
    const DensityMatrix rnd = density_of(d);
    const DensityMatrix shifted = apply_phase_shift(rnd, rng.uniform(0.0, 2 * kPi));
    const auto e1 = eigendecompose(rnd);
    const auto e2 = eigendecompose(shifted);
    for (size_t i = 0; i < e1.size(); ++i)
        REQUIRE(e1[i].lambda == Approx(e2[i].lambda).margin(1e-12));
}

TEST_CASE("eigendecomposition conventions") {
    DensityMatrix diag(4);
    diag.at(0, 0) = 0.1;
    diag.at(1, 1) = 0.5;
    diag.at(2, 2) = 0.15;
    diag.at(3, 3) = 0.25;
    const auto eig = eigendecompose(diag);
    REQUIRE(eig[0].lambda == Approx(0.5).margin(1e-14));
    REQUIRE(std::abs(eig[0].vector.amps[1]) == Approx(1.0).margin(1e-12));
    REQUIRE(eig[3].lambda == Approx(0.1).margin(1e-14));

    // equal-population three-level state with uniform coherence factor
    const double f = 0.33;
    DensityMatrix rho(4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rho.at(i, j) = (i == j ? 1.0 : f) / 3.0;
    const auto e2 = eigendecompose(rho);
    REQUIRE(e2[0].lambda == Approx((2.0 * f + 1.0) / 3.0).margin(1e-12));
    REQUIRE(e2[1].lambda == Approx((1.0 - f) / 3.0).margin(1e-12));
    REQUIRE(e2[2].lambda == Approx((1.0 - f) / 3.0).margin(1e-12));

    // pure states have a single unit eigenvalue
    const auto e3 = eigendecompose(pure_density(make_coherent(0.7)));
    REQUIRE(e3[0].lambda == Approx(1.0).margin(1e-12));
    REQUIRE(e3[1].lambda == Approx(0.0).margin(1e-12));

    DensityMatrix bad(2);
    bad.at(0, 0) = 1.5;
    bad.at(1, 1) = -0.5;
    REQUIRE_THROWS_AS(eigendecompose(bad), NotPSD);
}

TEST_CASE("random Hermitian eigensystem reproduces its construction") {
    Rng rng(97);
    const int n = 12;
    // build V D V^dagger from a random unitary (Gram-Schmidt) and check
    // recovery of the spectrum
    std::vector<std::vector<cplx>> v(n, std::vector<cplx>(n));
    for (auto& row : v)
        for (auto& x : row) x = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            cplx proj{0, 0};
            for (int k = 0; k < n; ++k) proj += std::conj(v[j][k]) * v[i][k];
            for (int k = 0; k < n; ++k) v[i][k] -= proj * v[j][k];
        }
        double norm = 0.0;
        for (int k = 0; k < n; ++k) norm += std::norm(v[i][k]);
        for (int k = 0; k < n; ++k) v[i][k] /= std::sqrt(norm);
    }
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-2.0, 2.0);
    std::vector<cplx> mat(n * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cplx s{0, 0};
            for (int k = 0; k < n; ++k) s += lam[k] * v[k][r] * std::conj(v[k][c]);
            mat[r * n + c] = s;
        }
    const EigenSystem es = hermitian_eigensystem(mat, n);
    std::vector<double> sorted = lam;
    std::sort(sorted.rbegin(), sorted.rend());
    for (int i = 0; i < n; ++i) REQUIRE(es.values[i] == Approx(sorted[i]).margin(1e-10));
    // residual ||A v - lambda v||
    for (int k = 0; k < n; ++k) {
        double res = 0.0;
        for (int r = 0; r < n; ++r) {
            cplx s{0, 0};
            for (int c = 0; c < n; ++c) s += mat[r * n + c] * es.vectors[k][c];
            res = std::max(res, std::abs(s - es.values[k] * es.vectors[k][r]));
        }
        REQUIRE(res < 1e-10);
    }
}

TEST_CASE("constructor outputs are normalized") {
    Rng rng(98);
    for (int t = 0; t < 10; ++t) {
        REQUIRE_NOTHROW(validate_state(make_coherent(rng.uniform(0.0, 2.0))));
        REQUIRE_NOTHROW(validate_state(make_cat(rng.uniform(0.2, 1.5), Parity::Odd)));
        REQUIRE_NOTHROW(validate_state(make_squeezed_vacuum(rng.uniform(0.05, 0.4), 0.1)));
        REQUIRE_NOTHROW(validate_state(make_cat3(rng.uniform(0.2, 1.2), 2)));
    }
    REQUIRE_THROWS_AS(make_level_skip_pair(1, 1.2), InvalidParameter);
    REQUIRE_THROWS_AS(make_cat3(0.5, 3), InvalidParameter);
}
