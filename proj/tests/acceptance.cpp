#include <cstdio>
#include <cstdlib>
#include <string>

#include "latticeprop/verify.hpp"

int main(int argc, char** argv) {
    using namespace latticeprop;
    bool all = true;
    if (argc > 1) {
        const auto r = run_criterion(std::atoi(argv[1]));
        std::puts(format_result(r).c_str());
        return r.pass ? 0 : 1;
    }
    for (int id = 1; id <= kCriteriaCount; ++id) {
        const auto r = run_criterion(id);
        std::puts(format_result(r).c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
