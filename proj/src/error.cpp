#include "latticeprop/error.hpp"

namespace latticeprop {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SpacelikeInput: return "SpacelikeInput";
        case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
        case ErrorCode::OutsideCone: return "OutsideCone";
        case ErrorCode::NotGenerated: return "NotGenerated";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::TruncationNotReached: return "TruncationNotReached";
        case ErrorCode::InfeasibleWord: return "InfeasibleWord";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::NearLightcone: return "NearLightcone";
        case ErrorCode::EmptyOrbit: return "EmptyOrbit";
        case ErrorCode::BoundaryPoint: return "BoundaryPoint";
        case ErrorCode::NullOrSpacelike: return "NullOrSpacelike";
        case ErrorCode::NullStep: return "NullStep";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::SpacelikeSegment: return "SpacelikeSegment";
    }
    return "Unknown";
}

}  // namespace latticeprop
