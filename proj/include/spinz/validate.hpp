#ifndef SPINZ_VALIDATE_HPP
#define SPINZ_VALIDATE_HPP

#include <string>
#include <vector>

namespace spinz {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidateOptions {
    uint64_t seed = 20240917;
    // Test hook: perturbs contracted values so the reporting path (first
    // divergent model digest) can be exercised. Not exposed on the CLI.
    bool inject_contraction_bug = false;
};

// suite: linalg | stabilizer | contraction | duality | symmetry | all
std::vector<CheckResult> run_validation(const std::string& suite, const ValidateOptions& opts = {});

}  // namespace spinz

#endif
