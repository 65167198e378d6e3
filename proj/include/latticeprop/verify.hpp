#pragma once

#include <string>
#include <vector>

namespace latticeprop {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int kCriteriaCount = 10;

CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

std::string format_result(const CriterionResult& r);

}  // namespace latticeprop
