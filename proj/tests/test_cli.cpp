#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed command-line tool.

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args, const std::string& out_file) {
    const std::string cmd =
        std::string(ORT_CLI_PATH) + " " + args + " > " + out_file + " 2> " + out_file + ".err";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("compute emits the closed-form row") {
    const std::string out = "cli_compute.csv";
    REQUIRE(run_cli("compute --state mix2fock:n=0,p=0.5,f=0", out) == 0);
    const std::string text = slurp(out);
    REQUIRE(text.find("N") != std::string::npos);
    REQUIRE(text.find("0.25") != std::string::npos);
    REQUIRE(text.find("analytic:rank2") != std::string::npos);
}

TEST_CASE("compute handles the cat qubit maximum") {
    const std::string out = "cli_qubit.csv";
    REQUIRE(run_cli("compute --state catqubit:alpha=1,chi=1.5707963267948966", out) == 0);
    const std::string text = slurp(out);
    REQUIRE(text.find(",2,") != std::string::npos);  // N column
}

TEST_CASE("usage and parse failures exit with code 2") {
    REQUIRE(run_cli("compute --state bogus:x=1", "cli_err.txt") == 2);
    REQUIRE(run_cli("compute", "cli_err2.txt") == 2);
    REQUIRE(run_cli("nonsense", "cli_err3.txt") == 2);
}

TEST_CASE("solver failures exit with code 3") {
    // rank-5 generic mixture is outside the roof's range
    REQUIRE(run_cli("compute --state \"mix:[(0.2,fock:n=0),(0.2,fock:n=1),(0.2,fock:n=2),"
                    "(0.2,fock:n=3),(0.2,fock:n=4)]\"",
                    "cli_err4.txt") == 3);
}

TEST_CASE("sweeps substitute the axis parameter") {
    const std::string out = "cli_sweep.csv";
    REQUIRE(run_cli("sweep --state mix2fock:n=0,p=0.5,f=0 --sweep p=0.1:0.9:5", out) == 0);
    const std::string text = slurp(out);
    int rows = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#' && line.find("p,state") == std::string::npos) ++rows;
    REQUIRE(rows == 5);
    // N(p) = p - p(1-p) at n=0; check an interior point 0.5 -> 0.25
    REQUIRE(text.find("0.25") != std::string::npos);
}

TEST_CASE("figure outputs are deterministic") {
    REQUIRE(run_cli("figure --id fig5a --out cli_fig_a.csv", "cli_fig.log") == 0);
    REQUIRE(run_cli("figure --id fig5a --out cli_fig_b.csv", "cli_fig.log") == 0);
    const std::string a = slurp("cli_fig_a.csv");
    REQUIRE(a == slurp("cli_fig_b.csv"));
    REQUIRE(a.find("p,N,M") != std::string::npos);
    REQUIRE(run_cli("figure --id fig99", "cli_fig.log") == 2);
}

TEST_CASE("verify subsets run and pass") {
    const std::string out = "cli_verify.txt";
    REQUIRE(run_cli("verify --only c02", out) == 0);
    const std::string text = slurp(out);
    REQUIRE(text.find("[PASS] c02_sv_gamma_crit") != std::string::npos);
}
