// Acceptance suite: runs every verification criterion and prints one
// pass/fail line each. Exit code 0 iff all pass.

#include <cstdio>
#include <string>

#include "ort/battery.hpp"

int main(int argc, char** argv) {
    ort::BatteryOptions opt;
    if (argc > 1) opt.only = argv[1];
    const auto results = ort::run_battery(opt);
    bool ok = !results.empty();
    for (const auto& r : results) {
        std::printf("[%s] %-36s %8.0f ms  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.ms, r.detail.c_str());
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
