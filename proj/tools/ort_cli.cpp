// Command-line interface: compute measures for a state spec, sweep one
// parameter, reproduce the study's figure datasets, or run the
// verification battery.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/parse error,
//             3 numeric/solver failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ort/battery.hpp"
#include "ort/compute.hpp"
#include "ort/csv.hpp"
#include "ort/figures.hpp"
#include "ort/statespec.hpp"

namespace {

struct SweepAxis {
    std::string param;
    double from = 0.0, to = 0.0;
    int steps = 0;
};

SweepAxis parse_sweep(const std::string& text) {
    SweepAxis ax;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) throw ort::ParseError("sweep syntax: param=from:to:steps");
    ax.param = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const size_t c1 = rest.find(':');
    const size_t c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ort::ParseError("sweep syntax: param=from:to:steps");
    try {
        ax.from = std::stod(rest.substr(0, c1));
        ax.to = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
        ax.steps = std::stoi(rest.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ort::ParseError("sweep syntax: param=from:to:steps");
    }
    if (ax.steps < 2) throw ort::ParseError("sweep needs at least 2 steps");
    return ax;
}

// Replace (or append) one key=value inside a state spec string.
std::string override_param(const std::string& spec, const std::string& key, double value) {
    const std::string needle = key + "=";
    size_t pos = std::string::npos;
    for (size_t i = spec.find(needle); i != std::string::npos; i = spec.find(needle, i + 1)) {
        if (i == 0) continue;  // key must follow ':' or ','
        const char before = spec[i - 1];
        if (before == ':' || before == ',' || before == '(') {
            pos = i;
            break;
        }
    }
    if (pos == std::string::npos) {
        if (spec.find(':') == std::string::npos) return spec + ":" + key + "=" + ort::fmt12(value);
        return spec + "," + key + "=" + ort::fmt12(value);
    }
    size_t end = pos + needle.size();
    while (end < spec.size() && spec[end] != ',' && spec[end] != ')' && spec[end] != ']')
        ++end;
    return spec.substr(0, pos + needle.size()) + ort::fmt12(value) + spec.substr(end);
}

ort::RoofOptions parse_opts(const std::string& text) {
    ort::RoofOptions opt;
    if (text.empty()) return opt;
    for (const std::string& tok : ort::spec_detail::split_args(text)) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos) throw ort::ParseError("options syntax: key=val,...");
        const std::string key = tok.substr(0, eq);
        const double val = ort::spec_detail::to_num(tok.substr(eq + 1), "option value");
        if (key == "gx")
            opt.grid_x = static_cast<int>(val);
        else if (key == "gtheta")
            opt.grid_theta = static_cast<int>(val);
        else if (key == "refine")
            opt.refine_rounds = static_cast<int>(val);
        else if (key == "gap")
            opt.gap_tol = val;
        else if (key == "cap")
            opt.candidate_cap = static_cast<long>(val);
        else
            throw ort::ParseError("unknown option '" + key + "' (gx, gtheta, refine, gap, cap)");
    }
    return opt;
}

const std::vector<std::string> kComputeColumns = {
    "state", "route", "branch", "N", "M", "mu_star", "witness", "q_part", "mean_n", "abs_a2"};

std::vector<std::string> result_cells(const std::string& state, const ort::ComputeResult& r) {
    return {state,          r.route,           r.branch,
            ort::fmt12(r.n_value),  ort::fmt12(r.m_value), ort::fmt12(r.mu_star),
            ort::fmt12(r.witness_part), ort::fmt12(r.q_part), ort::fmt12(r.mean_n),
            ort::fmt12(r.a2_abs)};
}

void emit(const ort::CsvTable& table, const std::string& out_path) {
    if (out_path.empty())
        std::fputs(table.str().c_str(), stdout);
    else
        table.write(out_path);
}

int run(int argc, char** argv) {
    CLI::App app{"Nonclassicality measure and metrological power of bosonic states"};
    app.require_subcommand(1);

    std::string state_spec, kernel_spec, out_path, opts_text, sweep_text, only, measure = "all";
    std::uint64_t seed = 20250810;
    std::string figure_id;

    CLI::App* compute = app.add_subcommand("compute", "measures of one state");
    compute->add_option("--state", state_spec, "state spec, e.g. mix2fock:n=0,p=0.5,f=0")
        ->required();
    compute->add_option("--kernel", kernel_spec, "dephasing kernel applied first");
    compute->add_option("--measure", measure, "all|n|m");
    compute->add_option("--out", out_path, "output CSV path (default stdout)");
    compute->add_option("--opts", opts_text, "solver options key=val,...");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one state parameter");
    sweep->add_option("--state", state_spec)->required();
    sweep->add_option("--sweep", sweep_text, "param=from:to:steps")->required();
    sweep->add_option("--kernel", kernel_spec);
    sweep->add_option("--out", out_path);
    sweep->add_option("--opts", opts_text);

    CLI::App* figure = app.add_subcommand("figure", "reproduce a figure dataset");
    figure->add_option("--id", figure_id, "fig1|fig3a|fig3b|fig4|fig5a|fig5b|fig6|fig7|fig8|fig9|fig10|fig11")
        ->required();
    figure->add_option("--out", out_path, "output CSV path (default <id>.csv)");
    figure->add_option("--opts", opts_text);

    CLI::App* verify = app.add_subcommand("verify", "run the verification battery");
    verify->add_option("--only", only, "substring filter on check names");
    verify->add_option("--seed", seed, "seed for the randomized property suites");
    verify->add_option("--opts", opts_text);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const ort::RoofOptions roof = parse_opts(opts_text);
    std::optional<ort::DephasingKernel> kernel;
    if (!kernel_spec.empty()) kernel = ort::parse_kernel(kernel_spec);

    if (compute->parsed()) {
        const ort::ParsedState ps = ort::parse_state(state_spec);
        const ort::ComputeResult r = ort::compute_measures(ps, kernel, roof);
        ort::CsvTable t("state measures");
        t.columns(kComputeColumns);
        t.row(result_cells(state_spec, r));
        emit(t, out_path);
        return 0;
    }

    if (sweep->parsed()) {
        const SweepAxis ax = parse_sweep(sweep_text);
        std::vector<std::string> specs(ax.steps);
        for (int i = 0; i < ax.steps; ++i) {
            const double v = ax.from + (ax.to - ax.from) * i / (ax.steps - 1);
            specs[i] = override_param(state_spec, ax.param, v);
        }
        std::vector<ort::ComputeResult> results(ax.steps);
        std::vector<std::string> errors(ax.steps);
        ort::fig_detail::parallel_rows(ax.steps, [&](int i) {
            try {
                results[i] = ort::compute_measures(ort::parse_state(specs[i]), kernel, roof);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
        for (int i = 0; i < ax.steps; ++i)
            if (!errors[i].empty())
                throw ort::Error("sweep point " + specs[i] + " failed: " + errors[i]);
        ort::CsvTable t("sweep over " + ax.param + " of " + state_spec);
        std::vector<std::string> cols = kComputeColumns;
        cols.insert(cols.begin(), ax.param);
        t.columns(cols);
        for (int i = 0; i < ax.steps; ++i) {
            const double v = ax.from + (ax.to - ax.from) * i / (ax.steps - 1);
            std::vector<std::string> cells = result_cells(specs[i], results[i]);
            cells.insert(cells.begin(), ort::fmt12(v));
            t.row(cells);
        }
        emit(t, out_path);
        return 0;
    }

    if (figure->parsed()) {
        const ort::CsvTable t = ort::make_figure(figure_id, roof);
        emit(t, out_path.empty() ? figure_id + ".csv" : out_path);
        return 0;
    }

    // verify
    ort::BatteryOptions bopt;
    bopt.seed = seed;
    bopt.only = only;
    bopt.roof = roof;
    const std::vector<ort::CheckResult> results = ort::run_battery(bopt);
    bool all_pass = !results.empty();
    std::vector<std::string> failing;
    for (const auto& r : results) {
        std::printf("[%s] %-36s %8.0f ms  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.ms, r.detail.c_str());
        if (!r.pass) {
            all_pass = false;
            failing.push_back(r.name);
        }
    }
    if (results.empty()) std::printf("no checks matched filter '%s'\n", only.c_str());
    if (!all_pass) {
        std::printf("failing checks:");
        for (const auto& f : failing) std::printf(" %s", f.c_str());
        std::printf("\n");
        return 1;
    }
    std::printf("all %zu checks passed\n", results.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ort::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
