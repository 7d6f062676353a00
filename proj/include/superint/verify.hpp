#pragma once

#include <string>

namespace superint {

inline constexpr int kCriterionCount = 11;

struct VerifyOptions {
    unsigned seed = 20240611;
    int threads = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    int checks = 0;
    double worst = 0;  // largest deviation divided by its tolerance
    std::string detail;
    double seconds = 0;
};

// acceptance criteria 1..kCriterionCount; deterministic given the options
CriterionResult runCriterion(int id, const VerifyOptions& opt = {});
std::string criterionName(int id);

}  // namespace superint
