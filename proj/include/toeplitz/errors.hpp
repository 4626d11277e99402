#pragma once

#include <stdexcept>
#include <string>

namespace toeplitz {

// Base of every error raised by the library.  `internal()` marks failures
// that can only come from a bug (an identity that must hold did not).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what, bool internal = false)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), internal_(internal) {}
    const std::string& kind() const { return kind_; }
    bool internal() const { return internal_; }

private:
    std::string kind_;
    bool internal_;
};

#define TOEPLITZ_ERROR(Name, Internal)                                            \
    struct Name : Error {                                                         \
        explicit Name(const std::string& w) : Error(#Name, w, Internal) {}        \
    };

TOEPLITZ_ERROR(DivisionByZero, false)
TOEPLITZ_ERROR(ZeroLeadingCoefficient, false)
TOEPLITZ_ERROR(NotReversible, false)
TOEPLITZ_ERROR(SingularJacobian, false)
TOEPLITZ_ERROR(WindowTooSmall, false)
TOEPLITZ_ERROR(SingularStep, false)
TOEPLITZ_ERROR(DegenerateParameters, false)
TOEPLITZ_ERROR(NonlinearStep, true)
TOEPLITZ_ERROR(SingularLeadingCoefficient, false)
TOEPLITZ_ERROR(NonPolynomialResult, true)
TOEPLITZ_ERROR(InconsistentBalance, true)
TOEPLITZ_ERROR(ConfinementFailure, false)
TOEPLITZ_ERROR(NonzeroResidual, true)

#undef TOEPLITZ_ERROR

}  // namespace toeplitz
