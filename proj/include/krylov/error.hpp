#pragma once

#include <stdexcept>
#include <string>

namespace krylov {

// Base of every library failure. exit_code() maps onto the CLI contract:
// 1 for usage problems, 2 for numerical or invariant failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "Error"; }
    virtual int exit_code() const noexcept { return 2; }
};

#define KRYLOV_ERROR(Name, Code)                                              \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(what) {}               \
        const char* kind() const noexcept override { return #Name; }          \
        int exit_code() const noexcept override { return Code; }              \
    };

KRYLOV_ERROR(PoleError, 2)
KRYLOV_ERROR(OverflowError, 2)
KRYLOV_ERROR(NoConvergence, 2)
KRYLOV_ERROR(BranchError, 2)
KRYLOV_ERROR(DomainError, 2)
KRYLOV_ERROR(InvalidWeight, 1)
KRYLOV_ERROR(UnknownLabel, 1)
KRYLOV_ERROR(NotHermitian, 2)
KRYLOV_ERROR(ZeroSeed, 2)
KRYLOV_ERROR(NumericalBreakdown, 2)
KRYLOV_ERROR(ResonantKickPole, 2)
KRYLOV_ERROR(StepUnderflow, 2)
KRYLOV_ERROR(ToleranceNotMet, 2)
KRYLOV_ERROR(DegenerateEntry, 2)
KRYLOV_ERROR(NotNormalized, 2)
KRYLOV_ERROR(TruncationOverflow, 2)
KRYLOV_ERROR(ComplexityGuard, 2)
KRYLOV_ERROR(InvalidModel, 1)
KRYLOV_ERROR(IoError, 1)
KRYLOV_ERROR(InvariantViolation, 2)

#undef KRYLOV_ERROR

}  // namespace krylov
