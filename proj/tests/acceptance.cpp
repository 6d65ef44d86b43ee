// Acceptance gate: runs the verification suite and prints one line per
// criterion. Exit code 0 only if every criterion passes.

#include <cstdio>
#include <cstdlib>

#include "gme/verification.hpp"

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 1;
    auto results = gme::run_verification(threads, false);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s — %s\n", r.passed ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.detail.c_str());
        all = all && r.passed;
    }
    std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return all ? 0 : 1;
}
