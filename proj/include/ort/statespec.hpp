#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ort/channels.hpp"
#include "ort/errors.hpp"
#include "ort/families.hpp"
#include "ort/fock.hpp"
#include "ort/probes.hpp"

// Text grammar for states and kernels, shared by the CLI and tests.
//
//   fock:n=3                          coherent:alpha=0.5
//   cat:+,alpha=0.5                   cat3:k=0,alpha=0.5
//   sv:gamma=0.3,mu=0                 svminus:gamma=0.3,mu=0
//   catqubit:alpha=1,chi=1.5707963
//   mix2fock:n=0,p=0.5,f=0            mixcat:alpha=0.5,p=0.3,f=0.9
//   mixsv:gamma=0.3,mu=0,p=0.4        levelskip:n=1,b2sq=0.75,p=0.5
//   indefparity:n=1,y=2,p=0.5
//   fock3rank2:p2=0.3,p1=0.4,p0=0.3,f=0.5,n=0
//   fock3:p2=0.4,p1=0.4,p0=0.2,f21=0.2,f10=0.6,f20=0,n=0
//   cat3mix:alpha=0.5,p0=0.2,p1=0.3,p2=0.5
//   mix:[(0.4,<spec>),(0.6,<spec>)]
//
//   kernels: total | lorentzian:gt=0.35,w0t=0
//          | atoms:[(1.57,0.5),(-1.57,0.5)] | twopoint:ratio=0.6

namespace ort {

struct ParsedState {
    enum class Kind { Pure, Family, RoofFock3, RoofCat3, Mixture };
    Kind kind = Kind::Pure;
    std::string text;

    std::optional<StateVector> pure;
    std::optional<Rank2Family> family;

    // RoofFock3 parameters
    double p_n2 = 0, p_n1 = 0, p_n = 0, f21 = 0, f10 = 0, f20 = 0;
    int n = 0;
    // RoofCat3 parameters
    double alpha = 0, p0 = 0, p1 = 0, p2 = 0;

    std::optional<DensityMatrix> density;  // Mixture
};

namespace spec_detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// split on commas at bracket depth zero
inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

struct Args {
    std::map<std::string, std::string> kv;
    std::vector<std::string> flags;  // bare tokens like the cat parity sign

    double num(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("missing parameter '" + key + "'");
        size_t pos = 0;
        double v;
        try {
            v = std::stod(it->second, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad number for '" + key + "': " + it->second);
        }
        if (pos != it->second.size())
            throw ParseError("bad number for '" + key + "': " + it->second);
        return v;
    }
    double num_or(const std::string& key, double dflt) const {
        return kv.count(key) ? num(key) : dflt;
    }
    bool has(const std::string& key) const { return kv.count(key) > 0; }
};

inline Args parse_args(const std::string& body) {
    Args a;
    for (const std::string& tok : split_args(body)) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos)
            a.flags.push_back(tok);
        else
            a.kv[trim(tok.substr(0, eq))] = trim(tok.substr(eq + 1));
    }
    return a;
}

// parse "[(x1,y1),(x2,y2),...]" into raw string pairs
inline std::vector<std::pair<std::string, std::string>> parse_pair_list(
    const std::string& s) {
    std::string body = trim(s);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw ParseError("expected a [(...),(...)] list");
    body = body.substr(1, body.size() - 2);
    std::vector<std::pair<std::string, std::string>> out;
    int depth = 0;
    std::string cur;
    std::vector<std::string> items;
    for (char c : body) {
        if (c == '(') {
            if (depth++ == 0) {
                cur.clear();
                continue;
            }
        }
        if (c == ')') {
            if (--depth == 0) {
                items.push_back(cur);
                continue;
            }
        }
        if (depth >= 1) cur += c;
    }
    if (depth != 0) throw ParseError("unbalanced parentheses in list");
    for (const std::string& it : items) {
        // first comma at depth zero separates weight from payload
        int d = 0;
        size_t cut = std::string::npos;
        for (size_t i = 0; i < it.size(); ++i) {
            if (it[i] == '[' || it[i] == '(') ++d;
            if (it[i] == ']' || it[i] == ')') --d;
            if (it[i] == ',' && d == 0) {
                cut = i;
                break;
            }
        }
        if (cut == std::string::npos) throw ParseError("list entries need two fields");
        out.push_back({trim(it.substr(0, cut)), trim(it.substr(cut + 1))});
    }
    return out;
}

inline double to_num(const std::string& s, const char* what) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad number in ") + what + ": " + s);
    }
    if (pos != s.size()) throw ParseError(std::string("bad number in ") + what + ": " + s);
    return v;
}

}  // namespace spec_detail

inline ParsedState parse_state(const std::string& spec);

namespace spec_detail {

inline DensityMatrix state_density(const ParsedState& ps) {
    switch (ps.kind) {
        case ParsedState::Kind::Pure:
            return pure_density(*ps.pure);
        case ParsedState::Kind::Family:
            return materialize_rank2_density(ps.family->state);
        case ParsedState::Kind::RoofFock3:
            return three_fock_density(ps.p_n2, ps.p_n1, ps.p_n, ps.f21, ps.f10, ps.f20, ps.n);
        case ParsedState::Kind::RoofCat3:
            return cat3_density(ps.alpha, ps.p0, ps.p1, ps.p2);
        case ParsedState::Kind::Mixture:
            return *ps.density;
    }
    throw ParseError("unreachable");
}

}  // namespace spec_detail

inline ParsedState parse_state(const std::string& spec) {
    using namespace spec_detail;
    ParsedState ps;
    ps.text = trim(spec);
    const size_t colon = ps.text.find(':');
    const std::string head = colon == std::string::npos ? ps.text : ps.text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : ps.text.substr(colon + 1);

    if (head == "fock") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = make_fock(static_cast<int>(a.num("n")),
                            static_cast<int>(a.num_or("dim", 0)));
    } else if (head == "coherent") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = make_coherent(a.num("alpha"), static_cast<int>(a.num_or("dim", 0)));
    } else if (head == "cat") {
        const Args a = parse_args(body);
        if (a.flags.size() != 1 || (a.flags[0] != "+" && a.flags[0] != "-"))
            throw ParseError("cat spec needs a parity flag, e.g. cat:+,alpha=0.5");
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = make_cat(a.num("alpha"), a.flags[0] == "+" ? Parity::Even : Parity::Odd,
                           static_cast<int>(a.num_or("dim", 0)));
    } else if (head == "cat3") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = make_cat3(a.num("alpha"), static_cast<int>(a.num("k")),
                            static_cast<int>(a.num_or("dim", 0)));
    } else if (head == "sv") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = make_squeezed_vacuum(a.num("gamma"), a.num_or("mu", 0.0),
                                       static_cast<int>(a.num_or("dim", 0)));
    } else if (head == "svminus") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = make_photon_subtracted_sv(a.num("gamma"), a.num_or("mu", 0.0),
                                            static_cast<int>(a.num_or("dim", 0)));
    } else if (head == "catqubit") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Pure;
        ps.pure = cat_qubit_pure(a.num("alpha"), a.num("chi"));
    } else if (head == "mix2fock") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Family;
        ps.family = two_fock(static_cast<int>(a.num("n")), a.num("p"), a.num_or("f", 0.0),
                             a.num_or("chi", 0.0));
    } else if (head == "mixcat") {
        const Args a = parse_args(body);
        const double alpha = a.num("alpha");
        // huge amplitudes stay scalar; the closed forms need no truncation
        const bool with_source = default_dim_coherent(alpha) <= 4096;
        ps.kind = ParsedState::Kind::Family;
        ps.family = cat_mixture(alpha, a.num("p"), a.num_or("f", 0.0), with_source);
    } else if (head == "mixsv") {
        const Args a = parse_args(body);
        const double gamma = a.num("gamma");
        const bool with_source = default_dim_squeezed(gamma) <= 4096;
        ps.kind = ParsedState::Kind::Family;
        ps.family = sv_mixture(gamma, a.num_or("mu", 0.0), a.num("p"), with_source);
    } else if (head == "levelskip") {
        const Args a = parse_args(body);
        const double b2 = a.has("b2sq") ? std::sqrt(a.num("b2sq")) : a.num("beta2");
        ps.kind = ParsedState::Kind::Family;
        ps.family = level_skip(static_cast<int>(a.num("n")), b2, a.num("p"));
    } else if (head == "indefparity") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Family;
        ps.family = indefinite_parity(static_cast<int>(a.num("n")), a.num("y"), a.num("p"));
    } else if (head == "fock3rank2") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::Family;
        ps.family = rank2_three_fock(a.num("p2"), a.num("p1"), a.num("p0"), a.num("f"),
                                     static_cast<int>(a.num_or("n", 0)));
    } else if (head == "fock3") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::RoofFock3;
        ps.p_n2 = a.num("p2");
        ps.p_n1 = a.num("p1");
        ps.p_n = a.num("p0");
        ps.f21 = a.num_or("f21", 0.0);
        ps.f10 = a.num_or("f10", 0.0);
        ps.f20 = a.num_or("f20", 0.0);
        ps.n = static_cast<int>(a.num_or("n", 0));
    } else if (head == "cat3mix") {
        const Args a = parse_args(body);
        ps.kind = ParsedState::Kind::RoofCat3;
        ps.alpha = a.num("alpha");
        ps.p0 = a.num("p0");
        ps.p1 = a.num("p1");
        ps.p2 = a.num("p2");
        if (std::abs(ps.p0 + ps.p1 + ps.p2 - 1.0) > 1e-10)
            throw ParseError("cat3mix populations must sum to 1");
    } else if (head == "mix") {
        const auto entries = parse_pair_list(body);
        if (entries.empty()) throw ParseError("mix list is empty");
        double wsum = 0.0;
        std::vector<std::pair<double, DensityMatrix>> parts;
        for (const auto& [wstr, sub] : entries) {
            const double w = to_num(wstr, "mix weight");
            if (w <= 0.0) throw ParseError("mix weights must be positive");
            wsum += w;
            parts.push_back({w, spec_detail::state_density(parse_state(sub))});
        }
        if (std::abs(wsum - 1.0) > 1e-10) throw ParseError("mix weights must sum to 1");
        int dim = 0;
        for (const auto& [w, rho] : parts) dim = std::max(dim, rho.dim);
        DensityMatrix rho(dim);
        for (const auto& [w, part] : parts)
            for (int i = 0; i < part.dim; ++i)
                for (int j = 0; j < part.dim; ++j) rho.at(i, j) += w * part.at(i, j);
        ps.kind = ParsedState::Kind::Mixture;
        ps.density = std::move(rho);
    } else {
        throw ParseError("unknown state family '" + head + "'");
    }
    return ps;
}

inline DensityMatrix materialize(const ParsedState& ps) { return spec_detail::state_density(ps); }

inline DephasingKernel parse_kernel(const std::string& spec) {
    using namespace spec_detail;
    const std::string text = trim(spec);
    const size_t colon = text.find(':');
    const std::string head = colon == std::string::npos ? text : text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "total") return total_kernel();
    if (head == "lorentzian") {
        const Args a = parse_args(body);
        return lorentzian_kernel(a.num("gt"), a.num_or("w0t", 0.0));
    }
    if (head == "atoms") {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& [phi, w] : parse_pair_list(body))
            atoms.push_back({to_num(phi, "atom phase"), to_num(w, "atom weight")});
        return atoms_kernel(std::move(atoms));
    }
    if (head == "twopoint") {
        const Args a = parse_args(body);
        return two_point_kernel(a.num("ratio"));
    }
    throw ParseError("unknown kernel '" + head + "'");
}

}  // namespace ort
