#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ort/compute.hpp"
#include "ort/csv.hpp"
#include "ort/statespec.hpp"

using namespace ort;
using Catch::Approx;

TEST_CASE("pure state specs") {
    const ParsedState fock = parse_state("fock:n=3");
    REQUIRE(fock.kind == ParsedState::Kind::Pure);
    REQUIRE(std::abs(fock.pure->amps[3]) == Approx(1.0));

    const ParsedState coh = parse_state("coherent:alpha=0.5");
    REQUIRE(expectations(*coh.pure).mean_n == Approx(0.25).margin(1e-12));

    const ParsedState cat = parse_state("cat:+,alpha=0.5");
    REQUIRE(expectations(*cat.pure).mean_n == Approx(0.25 * std::tanh(0.25)).margin(1e-12));

    const ParsedState sv = parse_state("sv:gamma=0.3,mu=0");
    REQUIRE(expectations(*sv.pure).mean_n ==
            Approx(std::sinh(0.3) * std::sinh(0.3)).margin(1e-12));

    REQUIRE(parse_state("svminus:gamma=0.3").kind == ParsedState::Kind::Pure);
    REQUIRE(parse_state("cat3:k=1,alpha=0.6").kind == ParsedState::Kind::Pure);
    REQUIRE(parse_state("catqubit:alpha=1,chi=0.7").kind == ParsedState::Kind::Pure);
}

TEST_CASE("family specs carry their parameters") {
    const ParsedState tf = parse_state("mix2fock:n=2,p=0.4,f=0.3");
    REQUIRE(tf.kind == ParsedState::Kind::Family);
    REQUIRE(tf.family->name == "two-fock");
    REQUIRE(tf.family->state.p == Approx(0.4));
    REQUIRE(tf.family->state.f == Approx(0.3));

    REQUIRE(parse_state("mixcat:alpha=0.5,p=0.3,f=0.9").family->name == "cat-mixture");
    REQUIRE(parse_state("mixsv:gamma=0.3,p=0.4").family->name == "sv-mixture");
    REQUIRE(parse_state("levelskip:n=1,b2sq=0.75,p=0.5").family->name == "level-skip");
    REQUIRE(parse_state("indefparity:n=1,y=2,p=0.5").family->name == "indefinite-parity");
    REQUIRE(parse_state("fock3rank2:p2=0.3,p1=0.4,p0=0.3,f=0.5").family->name ==
            "three-fock-rank2");

    // huge amplitudes stay on the scalar route without source vectors
    const ParsedState big = parse_state("mixcat:alpha=700,p=0.4,f=0");
    REQUIRE_FALSE(big.family->state.pair.source.has_value());
}

TEST_CASE("roof specs and generic mixtures") {
    const ParsedState f3 = parse_state("fock3:p2=0.4,p1=0.4,p0=0.2,f21=0.2,f10=0.6");
    REQUIRE(f3.kind == ParsedState::Kind::RoofFock3);
    REQUIRE(f3.f20 == 0.0);

    const ParsedState c3 = parse_state("cat3mix:alpha=0.5,p0=0.2,p1=0.3,p2=0.5");
    REQUIRE(c3.kind == ParsedState::Kind::RoofCat3);

    const ParsedState mix = parse_state("mix:[(0.4,fock:n=1),(0.6,fock:n=0)]");
    REQUIRE(mix.kind == ParsedState::Kind::Mixture);
    REQUIRE(mix.density->at(1, 1).real() == Approx(0.4).margin(1e-14));
    REQUIRE(mix.density->at(0, 0).real() == Approx(0.6).margin(1e-14));

    // nested mixtures are allowed
    const ParsedState nested =
        parse_state("mix:[(0.5,mix:[(0.5,fock:n=0),(0.5,fock:n=2)]),(0.5,fock:n=1)]");
    REQUIRE(nested.density->at(2, 2).real() == Approx(0.25).margin(1e-14));
}

TEST_CASE("family densities match explicit mixtures") {
    const DensityMatrix a = materialize(parse_state("mix2fock:n=0,p=0.5,f=0"));
    const DensityMatrix b = materialize(parse_state("mix:[(0.5,fock:n=1),(0.5,fock:n=0)]"));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            REQUIRE(std::abs(a.at(i, j) - b.at(i, j)) < 1e-14);
}

TEST_CASE("kernel specs") {
    REQUIRE(parse_kernel("total").kind == DephasingKernel::Kind::Total);
    const DephasingKernel lor = parse_kernel("lorentzian:gt=0.35,w0t=0");
    REQUIRE(lor.gamma_t == Approx(0.35));
    const DephasingKernel atoms = parse_kernel("atoms:[(1.57,0.5),(-1.57,0.5)]");
    REQUIRE(atoms.atoms.size() == 2);
    REQUIRE(std::abs(kappa(atoms, 1)) < 1e-3);  // cos(1.57) ~ 0
    REQUIRE(parse_kernel("twopoint:ratio=0.6").f_ratio == Approx(0.6));
}

TEST_CASE("grammar errors") {
    REQUIRE_THROWS_AS(parse_state("unknown:x=1"), ParseError);
    REQUIRE_THROWS_AS(parse_state("fock:m=1"), ParseError);
    REQUIRE_THROWS_AS(parse_state("fock:n=abc"), ParseError);
    REQUIRE_THROWS_AS(parse_state("cat:alpha=0.5"), ParseError);      // missing parity
    REQUIRE_THROWS_AS(parse_state("mix:[(0.4,fock:n=1)]"), ParseError);  // weights != 1
    REQUIRE_THROWS_AS(parse_state("mix:[(0.4,fock:n=1),(0.6,bogus:1)]"), ParseError);
    REQUIRE_THROWS_AS(parse_kernel("lorentzian:gt=-1"), InvalidParameter);
    REQUIRE_THROWS_AS(parse_kernel("atoms:[(0.5,1.5)]"), InvalidParameter);
    REQUIRE_THROWS_AS(parse_kernel("spiral:x=1"), ParseError);
}

TEST_CASE("compute routing picks the right path") {
    const ComputeResult pure = compute_measures(parse_state("coherent:alpha=0.9"));
    REQUIRE(pure.route == "analytic:pure");
    REQUIRE(pure.n_value == Approx(0.0).margin(1e-10));
    REQUIRE(pure.m_value == Approx(0.0).margin(1e-10));

    const ComputeResult family = compute_measures(parse_state("mix2fock:n=0,p=0.5,f=0"));
    REQUIRE(family.route == "analytic:rank2");
    REQUIRE(family.n_value == Approx(0.25).margin(1e-12));
    REQUIRE(family.m_value == Approx(0.0).margin(1e-12));

    const ComputeResult qb = compute_measures(parse_state("catqubit:alpha=1,chi=1.5707963267948966"));
    REQUIRE(qb.n_value == Approx(2.0).margin(1e-10));

    // an explicit mixture of two Fock states goes through the eigenbasis
    const ComputeResult eig =
        compute_measures(parse_state("mix:[(0.5,fock:n=1),(0.5,fock:n=0)]"));
    REQUIRE(eig.route == "analytic:eigen");
    REQUIRE(eig.n_value == Approx(0.25).margin(1e-10));

    // rank-3 mixtures take the roof
    const ComputeResult roof =
        compute_measures(parse_state("fock3:p2=0.4,p1=0.4,p0=0.2,f21=0,f10=0.5"));
    REQUIRE(roof.route == "numeric:roof");
    REQUIRE(roof.n_value == Approx(0.523).margin(5e-3));
    REQUIRE(roof.m_value == Approx(0.235).margin(5e-3));
}

TEST_CASE("kernels compose with the compute routes") {
    // two-Fock pure state dephased by a Lorentzian kernel: plateau formula
    const ParsedState st = parse_state("mix2fock:n=9,p=0.5,f=1");
    const double gt = 0.2;
    const ComputeResult r =
        compute_measures(st, parse_kernel("lorentzian:gt=" + fmt12(gt)));
    const double f = std::exp(-gt);
    const double want = 9.5 + std::max(-1.0, 2 * f * f - 2.0) * 0.25 * 10.0;
    REQUIRE(r.route == "analytic:rank2");
    REQUIRE(r.n_value == Approx(want).margin(1e-12));

    // two-point kernel keeps the cat family analytic
    const ComputeResult cat = compute_measures(parse_state("mixcat:alpha=0.5,p=0.5,f=0.9"),
                                               parse_kernel("twopoint:ratio=0.5"));
    REQUIRE(cat.route == "analytic:rank2");
    const ComputeResult direct = compute_measures(parse_state("mixcat:alpha=0.5,p=0.5,f=0.45"));
    REQUIRE(cat.n_value == Approx(direct.n_value).margin(1e-12));

    // total dephasing of a pure Fock state leaves a Fock state
    const ComputeResult tot =
        compute_measures(parse_state("fock:n=2"), parse_kernel("total"));
    REQUIRE(tot.n_value == Approx(2.0).margin(1e-10));
}
