#pragma once

#include <stdexcept>
#include <string>

namespace latticeprop {

enum class ErrorCode {
    InvalidArgument,
    SpacelikeInput,
    DegenerateNeighborhood,
    OutsideCone,
    NotGenerated,
    BudgetExceeded,
    TruncationNotReached,
    InfeasibleWord,
    QuadratureFailure,
    NearLightcone,
    EmptyOrbit,
    BoundaryPoint,
    NullOrSpacelike,
    NullStep,
    DimensionMismatch,
    DegreeMismatch,
    SpacelikeSegment,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace latticeprop
