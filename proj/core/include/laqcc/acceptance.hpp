#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace laqcc {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the full acceptance suite (the repo's reproduction entry point).
/// `device_path` points at the shipped device parameter file.
std::vector<CriterionResult> run_acceptance(uint64_t seed, const std::string &device_path);

}  // namespace laqcc
