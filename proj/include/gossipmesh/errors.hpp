#pragma once

#include <stdexcept>

namespace gossipmesh {

// Base type for every error this library raises.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisconnectedGraphError : Error { using Error::Error; };
struct NonPositiveInputError : Error { using Error::Error; };
struct InvalidParamsError : Error { using Error::Error; };
struct EmptyMembershipError : Error { using Error::Error; };
struct InconsistentReportsError : Error { using Error::Error; };
struct MissingVotesError : Error { using Error::Error; };
struct InconsistentStateError : Error { using Error::Error; };
struct NonTerminationError : Error { using Error::Error; };
struct CapacityMisconfigError : Error { using Error::Error; };
struct UnknownModelError : Error { using Error::Error; };

}  // namespace gossipmesh
