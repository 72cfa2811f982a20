#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ort/eigen.hpp"
#include "ort/families.hpp"
#include "ort/measures.hpp"
#include "ort/probes.hpp"
#include "ort/rank2.hpp"
#include "ort/rng.hpp"

using namespace ort;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

Rank2Family random_family(Rng& rng, double p, bool with_source = true) {
    switch (rng.uniform_int(0, 4)) {
        case 0: return two_fock(rng.uniform_int(0, 5), p, 0.0, 0.0, with_source);
        case 1: return cat_mixture(rng.uniform(0.3, 1.3), p, 0.0, with_source);
        case 2: return sv_mixture(rng.uniform(0.05, 0.4), rng.uniform(0.0, kPi), p, with_source);
        case 3: return level_skip(rng.uniform_int(1, 4), rng.uniform(0.15, 0.9), p, with_source);
        default:
            return indefinite_parity(rng.uniform_int(0, 3), rng.uniform(0.7, 2.5), p, with_source);
    }
}

double over_expr(const SpecialBasisPair& pr, double p) {
    const double a2 = p * pr.s1 + (1 - p) * pr.s2;
    const double rr = pr.r12 + pr.r21;
    return p * pr.n1 + (1 - p) * pr.n2 + a2 - 2 * p * (1 - p) * rr * rr;
}

double underA_expr(const SpecialBasisPair& pr, double p) {
    const double a2 = p * pr.s1 + (1 - p) * pr.s2;
    const double r2sum = pr.r12 * pr.r12 + pr.r21 * pr.r21;
    const double rd = pr.r21 * pr.r21 - pr.r12 * pr.r12;
    return p * pr.n1 + (1 - p) * pr.n2 -
           (2 * pr.r12 * pr.r21 * a2 + rd * rd * p * (1 - p)) / r2sum;
}

double underB_expr(const SpecialBasisPair& pr, double p, double f) {
    const double a2 = p * pr.s1 + (1 - p) * pr.s2;
    const double rd = pr.r21 - pr.r12;
    return p * pr.n1 + (1 - p) * pr.n2 - a2 + (2 * f * f - 2) * p * (1 - p) * rd * rd;
}
}  // namespace

TEST_CASE("eigenmixture closed forms on the reference families") {
    // neighboring Fock states
    REQUIRE(ort_rank2(two_fock(0, 0.5, 0).state.pair, 0.5).value == Approx(0.25).margin(1e-14));
    for (int n : {0, 2, 5})
        for (double p : {0.2, 0.5, 0.8}) {
            const auto pr = two_fock(n, p, 0, 0, false).state.pair;
            REQUIRE(ort_rank2(pr, p).value ==
                    Approx(n + p - p * (1 - p) * (n + 1)).margin(1e-13));
            REQUIRE(mpower_rank2(pr, p).value ==
                    Approx(std::max(n + p - 2 * p * (1 - p) * (n + 1), 0.0)).margin(1e-13));
        }

    // cat mixture vanishes exactly at p_R and the power vanishes inside (1/2, p_R)
    const auto cat = cat_mixture(0.5, 0.5, 0, false).state.pair;
    REQUIRE(std::abs(ort_rank2(cat, cat_p_right(0.5)).value) < 1e-12);
    REQUIRE(ort_rank2(cat, cat_p_left(0.5)).value > 0.5);
    for (double p : {0.55, 0.65, 0.75, 0.80})
        REQUIRE(mpower_rank2(cat, p).value == 0.0);

    // squeezed mixtures above the critical squeezing never leave the
    // over-squeezed branch and saturate M = N
    const auto sv = sv_mixture(0.3, 0.0, 0.5, false).state.pair;
    REQUIRE_FALSE(under_squeezed_interval(sv).has_value());
    for (double p : {0.1, 0.5, 0.9}) {
        const auto br = ort_rank2(sv, p);
        REQUIRE(br.branch == Branch::OverSqueezed);
        REQUIRE(mpower_rank2(sv, p).value == Approx(br.value).margin(1e-12));
    }
    REQUIRE(under_squeezed_interval(sv_mixture(0.15, 0.0, 0.5, false).state.pair).has_value());
}

TEST_CASE("partially coherent two-Fock values") {
    const auto pr = two_fock(0, 0.5, 0, 0, false).state.pair;
    REQUIRE(ort_rank2_coherent(pr, 0.5, 0.9).value == Approx(0.405).margin(1e-14));
    for (double f : {0.0, 0.2, 0.5, 0.7})
        REQUIRE(ort_rank2_coherent(pr, 0.5, f).value == Approx(0.25).margin(1e-14));
    // pure limit agrees with the pure-state formula on the superposition
    const auto fam = two_fock(3, 0.35, 1.0);
    const DensityMatrix rho = materialize_rank2_density(fam.state);
    const auto eig = eigendecompose(rho);
    REQUIRE(eig[0].lambda == Approx(1.0).margin(1e-12));
    REQUIRE(ort_rank2_coherent(fam.state.pair, 0.35, 1.0).value ==
            Approx(ort_pure(eig[0].vector)).margin(1e-11));
}

TEST_CASE("eta formula properties") {
    Rng rng(41);
    for (int t = 0; t < 30; ++t) {
        const auto pr = random_family(rng, 0.5, false).state.pair;
        const double p = rng.uniform(0.05, 0.95);
        const double rr = pr.r12 + pr.r21;
        REQUIRE(eta(pr, 1.0, p) == Approx(p * (1 - p) * rr * rr).margin(1e-12));
        REQUIRE(eta(pr, rng.uniform(0, 1), 0.0) == Approx(0.0).margin(1e-15));
        REQUIRE(eta(pr, 1.0 / std::sqrt(2.0), p) ==
                Approx(2 * p * (1 - p) * pr.r12 * pr.r21).margin(1e-12));
        // monotone increasing in f
        double prev = eta(pr, 0.0, p);
        for (double f = 0.1; f <= 1.0; f += 0.1) {
            const double cur = eta(pr, f, p);
            REQUIRE(cur >= prev - 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("assumption reports") {
    const auto fock = two_fock(2, 0.4, 0.5, 1.234);
    const auto rep = verify_assumptions(fock.state.pair, 0.5, 1.234);
    REQUIRE(rep.all_ok());  // Fock pairs leave every phase free

    const auto cat = cat_mixture(0.5, 0.4, 0.5);
    REQUIRE(verify_assumptions(cat.state.pair, 0.5, 0.0).all_ok());
    const auto bad = verify_assumptions(cat.state.pair, 0.5, kPi / 3.0);
    REQUIRE_FALSE(bad.coherence_phase.ok);
    REQUIRE(bad.centered.ok);
    REQUIRE(bad.a2_cross.ok);
}

TEST_CASE("branch boundaries are continuous") {
    Rng rng(42);
    int checked = 0;
    for (int t = 0; t < 100; ++t) {
        const auto pr = random_family(rng, 0.5, false).state.pair;
        const auto iv = under_squeezed_interval(pr);
        if (!iv) continue;
        ++checked;
        for (double pb : {iv->first, iv->second})
            REQUIRE(over_expr(pr, pb) == Approx(underA_expr(pr, pb)).margin(1e-9));
        // A <-> B boundary at f_crit for inner p
        const double p = 0.5 * (iv->first + iv->second);
        const auto fc = f_crit(pr, p);
        if (fc)
            REQUIRE(underA_expr(pr, p) == Approx(underB_expr(pr, p, *fc)).margin(1e-8));
    }
    REQUIRE(checked > 20);
}

TEST_CASE("zero coherence reduces to the eigenmixture formula") {
    Rng rng(43);
    for (int t = 0; t < 100; ++t) {
        const double p = rng.uniform(0.02, 0.98);
        const auto pr = random_family(rng, p, false).state.pair;
        REQUIRE(ort_rank2_coherent(pr, p, 0.0).value == ort_rank2(pr, p).value);
    }
}

TEST_CASE("measure is monotone in the coherence strength") {
    Rng rng(44);
    for (int t = 0; t < 1000; ++t) {
        const double p = rng.uniform(0.02, 0.98);
        const auto pr = random_family(rng, p, false).state.pair;
        const double f1 = rng.uniform(0.0, 1.0), f2 = rng.uniform(0.0, 1.0);
        const double lo = std::min(f1, f2), hi = std::max(f1, f2);
        REQUIRE(ort_rank2_coherent(pr, p, lo).value <=
                ort_rank2_coherent(pr, p, hi).value + 1e-12);
    }
}

TEST_CASE("random decompositions never beat the closed form") {
    Rng rng(45);
    for (int t = 0; t < 10; ++t) {
        const double p = rng.uniform(0.1, 0.9);
        Rank2Family fam = random_family(rng, p);
        fam.state.f = rng.uniform_int(0, 1) ? 0.0 : rng.uniform(0.0, 1.0);
        if (fam.name == "sv-mixture" || fam.name == "indefinite-parity") fam.state.f = 0.0;
        const double exact = ort_rank2_coherent(fam.state.pair, p, fam.state.f).value;
        const DensityMatrix rho = materialize_rank2_density(fam.state);
        const auto eig = eigendecompose(rho);
        std::vector<std::pair<double, StateVector>> kept;
        for (const auto& [lam, v] : eig)
            if (lam > 1e-12) kept.push_back({lam, v});

        for (int d = 0; d < 20; ++d) {
            const int K = rng.uniform_int(2, 5);
            // random isometry: K x rank complex matrix with orthonormal columns
            std::vector<std::vector<cplx>> m(kept.size(), std::vector<cplx>(K));
            for (auto& row : m)
                for (auto& x : row) x = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            // Gram-Schmidt on the rank rows (as vectors over K)
            for (size_t i = 0; i < m.size(); ++i) {
                for (size_t j = 0; j < i; ++j) {
                    cplx proj{0, 0};
                    for (int k = 0; k < K; ++k) proj += std::conj(m[j][k]) * m[i][k];
                    for (int k = 0; k < K; ++k) m[i][k] -= proj * m[j][k];
                }
                double nn = 0.0;
                for (int k = 0; k < K; ++k) nn += std::norm(m[i][k]);
                for (int k = 0; k < K; ++k) m[i][k] /= std::sqrt(nn);
            }
            Decomposition dec;
            for (int k = 0; k < K; ++k) {
                StateVector v(rho.dim);
                for (size_t i = 0; i < kept.size(); ++i)
                    for (int nidx = 0; nidx < rho.dim; ++nidx)
                        v.amps[nidx] += std::sqrt(kept[i].first) * std::conj(m[i][k]) *
                                        kept[i].second.amps[nidx];
                const double w = v.norm_sq();
                if (w < 1e-12) continue;
                for (auto& a : v.amps) a /= std::sqrt(w);
                dec.entries.push_back({w, std::move(v)});
            }
            const MeasureReport rep = decomposition_objective(rho, dec);
            REQUIRE(rep.value >= exact - 1e-8);
        }
    }
}

TEST_CASE("recipe decompositions attain the closed-form value") {
    struct Case {
        Rank2Family fam;
        Branch want;
    };
    std::vector<Case> cases;
    cases.push_back({cat_mixture(0.5, 0.9, 0.3), Branch::OverSqueezed});
    cases.push_back({cat_mixture(0.5, 0.5, 0.0), Branch::UnderSqueezedA});
    cases.push_back({cat_mixture(0.5, 0.5, 0.75), Branch::UnderSqueezedA});  // steep moments
    cases.push_back({cat_mixture(0.5, 0.5, 0.95), Branch::UnderSqueezedB});
    cases.push_back({two_fock(0, 0.5, 0.3), Branch::UnderSqueezedA});
    cases.push_back({two_fock(2, 0.4, 0.9), Branch::UnderSqueezedB});
    cases.push_back({two_fock(1, 0.4, 1.0), Branch::UnderSqueezedB});  // pure limit
    cases.push_back({sv_mixture(0.3, 0.7, 0.4), Branch::OverSqueezed});
    cases.push_back({level_skip(1, std::sqrt(0.75), 0.5), Branch::UnderSqueezedA});
    for (auto& [fam, want] : cases) {
        const BranchResult br = optimal_decomposition(fam.state);
        INFO(fam.name << " p=" << fam.state.p << " f=" << fam.state.f);
        if (fam.state.f < 1.0) REQUIRE(br.branch == want);
        const Decomposition dec = materialize_recipe(fam.state, br.recipe);
        const DensityMatrix rho = materialize_rank2_density(fam.state);
        const MeasureReport rep = decomposition_objective(rho, dec);
        REQUIRE(rep.value == Approx(br.value).margin(1e-9));
    }
}

TEST_CASE("scalar power formula matches the eigendecomposition route") {
    Rng rng(46);
    for (int t = 0; t < 20; ++t) {
        const double p = rng.uniform(0.05, 0.95);
        const Rank2Family fam = random_family(rng, p);
        const double scalar = mpower_rank2(fam.state.pair, p).value;
        const double numeric = metrological_power(materialize_rank2_density(fam.state)).value;
        REQUIRE(scalar == Approx(numeric).margin(1e-8));
    }
}

TEST_CASE("interval finders agree with the stated figures") {
    const auto skip = under_squeezed_interval(level_skip(1, std::sqrt(0.75), 0.5, false).state.pair);
    REQUIRE(skip.has_value());
    REQUIRE(skip->first == Approx(0.234823).margin(1e-5));
    REQUIRE(skip->second == Approx(0.890667).margin(1e-5));

    const auto indef = under_squeezed_interval(indefinite_parity(1, 2.0, 0.5, false).state.pair);
    REQUIRE(indef.has_value());
    REQUIRE(indef->first == Approx(0.160063).margin(1e-5));
    REQUIRE(indef->second == Approx(0.867715).margin(1e-5));

    const auto cat = under_squeezed_interval(cat_mixture(0.5, 0.5, 0, false).state.pair);
    REQUIRE(cat->first == Approx(cat_p_left(0.5)).margin(1e-9));
    REQUIRE(cat->second == Approx(cat_p_right(0.5)).margin(1e-9));
}

TEST_CASE("three-Fock rank-2 family matches its density matrix form") {
    const Rank2Family fam = rank2_three_fock(0.3, 0.45, 0.25, 0.6);
    const DensityMatrix got = materialize_rank2_density(fam.state);
    const DensityMatrix want = three_fock_density(0.3, 0.45, 0.25, 0.6, 0.6, 1.0);
    for (int i = 0; i < want.dim; ++i)
        for (int j = 0; j < want.dim; ++j)
            REQUIRE(std::abs(got.at(i, j) - want.at(i, j)) < 1e-12);
    // rank stays two for partial coherence
    const auto eig = eigendecompose(got);
    REQUIRE(eig[2].lambda < 1e-12);
}

TEST_CASE("cat qubit sweep endpoints") {
    const int dim = default_dim_coherent(1.0);
    REQUIRE(std::abs(ort_pure(cat_qubit_pure(1.0, 0.0, dim))) < 1e-10);
    REQUIRE(std::abs(ort_pure(cat_qubit_pure(1.0, kPi, dim))) < 1e-10);
    REQUIRE(ort_pure(cat_qubit_pure(1.0, kPi / 2.0, dim)) == Approx(2.0).margin(1e-10));
    // the tuned superposition at chi = 0 is the coherent state itself
    const StateVector qb = cat_qubit_pure(1.0, 0.0, dim);
    const StateVector coh = make_coherent(1.0, dim);
    REQUIRE(std::abs(std::abs(inner(qb, coh)) - 1.0) < 1e-12);
}
