#pragma once

#include <string>
#include <vector>

namespace gme {

/// One verification criterion outcome. `detail` carries the measured values
/// and tolerances in a human-readable form.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the full verification suite (closed forms, limit consistency,
/// stationary-phase vs closed form, split-step oracle, entanglement evaluator
/// agreement, relativistic correction, trajectory equivalence, retarded time,
/// physics properties, determinism). Heavy criteria parallelize over final
/// grid rows; results are independent of the thread count.
std::vector<CriterionResult> run_verification(int threads = 1, bool verbose = false);

}  // namespace gme
