#pragma once

// The finite-difference suite shared by the CLI gradcheck command and the
// automated checks: every differentiable op plus a small end-to-end model.

#include <cstdint>
#include <string>
#include <vector>

namespace asc {

struct GradCheckEntry {
    std::string name;
    double max_err = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

// Checks every op against central differences (tolerance 1e-4), then a
// 2-block / 16-token / width-32 Siamese model end to end (tolerance 1e-3,
// a sampled subset of parameter tensors).
std::vector<GradCheckEntry> run_gradient_suite(std::uint64_t seed);

bool all_passed(const std::vector<GradCheckEntry>& entries);

} // namespace asc
