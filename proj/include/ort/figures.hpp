#pragma once

#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "ort/compute.hpp"
#include "ort/csv.hpp"
#include "ort/families.hpp"
#include "ort/probes.hpp"

// Reference datasets: one CSV per figure of the accompanying study, with
// the parameters pinned in each generator.

namespace ort {

namespace fig_detail {

// Two-level coherence gap m = (n+m) - n: closed-form measure by gap size.
//   m = 1: plateau formula in the coherence strength f
//   m = 2: <n> + |rho_{n+2,n}| sqrt((n+2)(n+1))
//   m > 2: <n>, independent of the coherence
inline double two_level_skip_measure(int n, int m, double p, double coherence_mag) {
    const double mean_n = p * (n + m) + (1.0 - p) * n;
    if (m == 1) {
        const double f = coherence_mag / std::sqrt(p * (1.0 - p));
        return mean_n + std::max(-1.0, 2.0 * f * f - 2.0) * p * (1.0 - p) * (n + 1.0);
    }
    if (m == 2) return mean_n + coherence_mag * std::sqrt((n + 2.0) * (n + 1.0));
    return mean_n;
}

// ordered parallel map over an index range
inline void parallel_rows(int count, const std::function<void(int)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    for (int base = 0; base < count; base += static_cast<int>(hw)) {
        futs.clear();
        const int hi = std::min(count, base + static_cast<int>(hw));
        for (int i = base; i < hi; ++i)
            futs.push_back(std::async(std::launch::async, fn, i));
        for (auto& f : futs) f.get();
    }
}

}  // namespace fig_detail

/// Lorentzian dephasing of pure two-level superpositions (gaps 1, 2, 3).
inline CsvTable figure_dephasing_dynamics() {
    CsvTable t("Lorentzian dephasing of |n+m>,|n> superpositions; gamma=1, omega0=0; "
               "m=1: n=9 p=0.5, m=2: n=6 p=0.75, m=3: n=3 p=0.5");
    t.columns({"t", "N_m1", "N_m2", "N_m3"});
    const double gamma = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double tt = i * 0.005;
        const double k1 = std::exp(-gamma * tt), k2 = std::exp(-2.0 * gamma * tt);
        const double n1 = fig_detail::two_level_skip_measure(9, 1, 0.5, k1 * std::sqrt(0.25));
        const double n2 =
            fig_detail::two_level_skip_measure(6, 2, 0.75, k2 * std::sqrt(0.75 * 0.25));
        const double n3 = fig_detail::two_level_skip_measure(3, 3, 0.5, 0.0);
        t.row({fmt12(tt), fmt12(n1), fmt12(n2), fmt12(n3)});
    }
    return t;
}

/// Measure and metrological power of even/odd cat mixtures vs population.
inline CsvTable figure_cat_mixture(double alpha) {
    CsvTable t("even/odd cat mixture, alpha=" + fmt12(alpha));
    t.columns({"p", "N", "M"});
    const bool with_source = default_dim_coherent(alpha) <= 4096;
    Rank2Family fam = cat_mixture(alpha, 0.5, 0.0, with_source);
    for (int i = 0; i <= 200; ++i) {
        const double p = i / 200.0;
        const double n = ort_rank2(fam.state.pair, p).value;
        const double m = mpower_rank2(fam.state.pair, p).value;
        t.row({fmt12(p), fmt12(n), fmt12(m)});
    }
    return t;
}

/// Squeezed vacuum + photon-subtracted mixtures below and above the
/// critical squeezing.
inline CsvTable figure_sv_mixture() {
    CsvTable t("squeezed vacuum / photon-subtracted mixtures, gamma=0.1 and 0.3, mu=0");
    t.columns({"p", "N_g0.1", "M_g0.1", "N_g0.3", "M_g0.3"});
    Rank2Family lo = sv_mixture(0.1, 0.0, 0.5, false);
    Rank2Family hi = sv_mixture(0.3, 0.0, 0.5, false);
    for (int i = 0; i <= 200; ++i) {
        const double p = i / 200.0;
        t.row({fmt12(p), fmt12(ort_rank2(lo.state.pair, p).value),
               fmt12(mpower_rank2(lo.state.pair, p).value),
               fmt12(ort_rank2(hi.state.pair, p).value),
               fmt12(mpower_rank2(hi.state.pair, p).value)});
    }
    return t;
}

/// Level-skipping mixture at n=1, |beta2|^2 = 0.75.
inline CsvTable figure_level_skip() {
    CsvTable t("level-skipping mixture, n=1, |beta2|^2=0.75");
    t.columns({"p", "N", "M"});
    Rank2Family fam = level_skip(1, std::sqrt(0.75), 0.5, false);
    for (int i = 0; i <= 200; ++i) {
        const double p = i / 200.0;
        t.row({fmt12(p), fmt12(ort_rank2(fam.state.pair, p).value),
               fmt12(mpower_rank2(fam.state.pair, p).value)});
    }
    return t;
}

/// Variation of the under-squeezed interval with |beta2| at n=1.
inline CsvTable figure_level_skip_interval() {
    CsvTable t("under-squeezed interval of level-skipping mixtures vs |beta2|, n=1");
    t.columns({"b2", "p_L", "p_R"});
    for (int i = 1; i <= 99; ++i) {
        const double b2 = i / 100.0;
        Rank2Family fam = level_skip(1, b2, 0.5, false);
        const auto iv = under_squeezed_interval(fam.state.pair);
        if (iv)
            t.row({fmt12(b2), fmt12(iv->first), fmt12(iv->second)});
        else
            t.row({fmt12(b2), "nan", "nan"});
    }
    return t;
}

/// Indefinite-parity mixture at n=1, y=2.
inline CsvTable figure_indefinite_parity() {
    CsvTable t("indefinite-parity mixture, n=1, y=2");
    t.columns({"p", "N", "M"});
    Rank2Family fam = indefinite_parity(1, 2.0, 0.5, false);
    for (int i = 0; i <= 200; ++i) {
        const double p = i / 200.0;
        t.row({fmt12(p), fmt12(ort_rank2(fam.state.pair, p).value),
               fmt12(mpower_rank2(fam.state.pair, p).value)});
    }
    return t;
}

/// Pure cat-qubit superposition vs the coherence phase chi at alpha=1.
inline CsvTable figure_cat_qubit() {
    CsvTable t("pure even/odd cat superposition tuned to vanish at chi=0, pi; alpha=1");
    t.columns({"chi", "N"});
    const int dim = default_dim_coherent(1.0);
    for (int i = 0; i <= 256; ++i) {
        const double chi = 2.0 * std::numbers::pi * i / 256.0;
        t.row({fmt12(chi), fmt12(ort_pure(cat_qubit_pure(1.0, chi, dim)))});
    }
    return t;
}

/// Partially coherent cat mixtures vs coherence strength.
inline CsvTable figure_cat_coherence() {
    CsvTable t("partially coherent cat mixture, alpha=0.5, p in {0.15, 0.3, 0.5}");
    t.columns({"f", "N_p0.15", "M_p0.15", "N_p0.3", "M_p0.3", "N_p0.5", "M_p0.5"});
    const double ps[3] = {0.15, 0.3, 0.5};
    std::vector<std::array<double, 6>> vals(201);
    fig_detail::parallel_rows(201, [&](int i) {
        const double f = i / 200.0;
        for (int j = 0; j < 3; ++j) {
            Rank2Family fam = cat_mixture(0.5, ps[j], f);
            vals[i][2 * j] = ort_rank2_coherent(fam.state.pair, ps[j], f).value;
            vals[i][2 * j + 1] =
                metrological_power(materialize_rank2_density(fam.state)).value;
        }
    });
    for (int i = 0; i <= 200; ++i) {
        const double f = i / 200.0;
        t.row({fmt12(f), fmt12(vals[i][0]), fmt12(vals[i][1]), fmt12(vals[i][2]),
               fmt12(vals[i][3]), fmt12(vals[i][4]), fmt12(vals[i][5])});
    }
    return t;
}

/// Equal-population three-Fock mixture with uniform coherence factor f:
/// numeric roof value, witness part, and metrological power.
inline CsvTable figure_three_fock_equal(const RoofOptions& opt = {}) {
    CsvTable t("three-Fock mixture |2>,|1>,|0>, equal populations, uniform coherence f");
    t.columns({"f", "N", "M", "witness"});
    const int npts = 51;
    std::vector<std::array<double, 3>> vals(npts);
    fig_detail::parallel_rows(npts, [&](int i) {
        const double f = i / static_cast<double>(npts - 1);
        const RoofTarget tgt = three_fock_target(1.0 / 3, 1.0 / 3, 1.0 / 3, f, f, f);
        const RoofSolution sol = ort_numeric(tgt, opt);
        const MetrologicalPower mp =
            metrological_power(three_fock_density(1.0 / 3, 1.0 / 3, 1.0 / 3, f, f, f));
        vals[i] = {sol.value, mp.value, sol.witness_part};
    });
    for (int i = 0; i < npts; ++i) {
        const double f = i / static_cast<double>(npts - 1);
        t.row({fmt12(f), fmt12(vals[i][0]), fmt12(vals[i][1]), fmt12(vals[i][2])});
    }
    return t;
}

/// Tridiagonal three-Fock mixtures over the (f21, f10) coherence plane with
/// populations (0.4, 0.4, 0.2); rows outside the positivity disk are blank.
inline CsvTable figure_coherence_valley(const RoofOptions& opt = {}) {
    CsvTable t("three-Fock mixture, populations (0.4,0.4,0.2), skip coherence zero");
    t.columns({"f21", "f10", "N", "M"});
    const int g = 21;
    std::vector<std::array<double, 2>> vals(g * g, {NAN, NAN});
    fig_detail::parallel_rows(g * g, [&](int idx) {
        const int i = idx / g, j = idx % g;
        const double f21 = i / static_cast<double>(g - 1);
        const double f10 = j / static_cast<double>(g - 1);
        if (f21 * f21 + f10 * f10 > 1.0 + 1e-12) return;
        const RoofTarget tgt = three_fock_target(0.4, 0.4, 0.2, f21, f10, 0.0);
        const RoofSolution sol = ort_numeric(tgt, opt);
        const MetrologicalPower mp =
            metrological_power(three_fock_density(0.4, 0.4, 0.2, f21, f10, 0.0));
        vals[idx] = {sol.value, mp.value};
    });
    for (int idx = 0; idx < g * g; ++idx) {
        const int i = idx / g, j = idx % g;
        const double f21 = i / static_cast<double>(g - 1);
        const double f10 = j / static_cast<double>(g - 1);
        if (std::isnan(vals[idx][0]))
            t.row({fmt12(f21), fmt12(f10), "nan", "nan"});
        else
            t.row({fmt12(f21), fmt12(f10), fmt12(vals[idx][0]), fmt12(vals[idx][1])});
    }
    return t;
}

/// Three-cat mixtures over the population simplex: best known decomposition
/// family (region label), its value, and the metrological power.
inline CsvTable figure_cat3_regions() {
    CsvTable t("three-cat mixture, alpha=0.5; region = winning decomposition family");
    t.columns({"p1", "p2", "region", "N_family", "q_opt", "M"});
    const double alpha = 0.5;
    const int dim = default_dim_coherent(alpha);
    const int g = 41;
    struct Cell {
        bool valid = false;
        Cat3Probe probe;
        double m = 0.0;
    };
    std::vector<Cell> cells(g * g);
    fig_detail::parallel_rows(g * g, [&](int idx) {
        const int i = idx / g, j = idx % g;
        const double p1 = i / static_cast<double>(g - 1);
        const double p2 = j / static_cast<double>(g - 1);
        if (p1 + p2 > 1.0 + 1e-12) return;
        const double p0 = std::max(1.0 - p1 - p2, 0.0);
        cells[idx].valid = true;
        cells[idx].probe = classify_cat3(alpha, p0, p1, p2, dim);
        cells[idx].m = metrological_power(cat3_density(alpha, p0, p1, p2, dim)).value;
    });
    for (int idx = 0; idx < g * g; ++idx) {
        if (!cells[idx].valid) continue;
        const int i = idx / g, j = idx % g;
        const double p1 = i / static_cast<double>(g - 1);
        const double p2 = j / static_cast<double>(g - 1);
        t.row({fmt12(p1), fmt12(p2), cells[idx].probe.region, fmt12(cells[idx].probe.value),
               fmt12(cells[idx].probe.q), fmt12(cells[idx].m)});
    }
    return t;
}

/// Dispatch by figure id.
inline CsvTable make_figure(const std::string& id, const RoofOptions& opt = {}) {
    if (id == "fig1") return figure_dephasing_dynamics();
    if (id == "fig3a") return figure_cat_mixture(0.5);
    if (id == "fig3b") return figure_cat_mixture(700.0);
    if (id == "fig4") return figure_sv_mixture();
    if (id == "fig5a") return figure_level_skip();
    if (id == "fig5b") return figure_level_skip_interval();
    if (id == "fig6") return figure_indefinite_parity();
    if (id == "fig7") return figure_cat_qubit();
    if (id == "fig8") return figure_cat_coherence();
    if (id == "fig9") return figure_three_fock_equal(opt);
    if (id == "fig10") return figure_coherence_valley(opt);
    if (id == "fig11") return figure_cat3_regions();
    throw ParseError("unknown figure id '" + id + "' (fig1, fig3a, fig3b, fig4, fig5a, "
                     "fig5b, fig6, fig7, fig8, fig9, fig10, fig11)");
}

}  // namespace ort
