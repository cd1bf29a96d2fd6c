#pragma once

#include <stdexcept>
#include <string>

namespace iplan {

// Base for all domain errors raised by the library.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyFleetError : public ModelError {
public:
    EmptyFleetError() : ModelError("fleet has no committed unit (P_base = 0)") {}
};

class OverdampedError : public ModelError {
public:
    explicit OverdampedError(double zeta)
        : ModelError("second-order response is not underdamped (zeta = " +
                     std::to_string(zeta) + " >= 1)") {}
};

class NonPositiveStiffnessError : public ModelError {
public:
    NonPositiveStiffnessError() : ModelError("D + R_s must be positive") {}
};

class ZeroInertiaError : public ModelError {
public:
    ZeroInertiaError() : ModelError("aggregate inertia M is zero") {}
};

class NegativeRadicandError : public ModelError {
public:
    NegativeRadicandError() : ModelError("R_s < F_s: nadir radicand is negative") {}
};

class StepUnderflowError : public ModelError {
public:
    explicit StepUnderflowError(const std::string& coord)
        : ModelError("finite-difference coordinate too small: " + coord) {}
};

class StepTooLargeError : public ModelError {
public:
    StepTooLargeError() : ModelError("integration step dt exceeds 1e-2 s") {}
};

class NotSettledError : public ModelError {
public:
    NotSettledError() : ModelError("trace horizon too short: trajectory has not settled") {}
};

class InputError : public ModelError {
public:
    using ModelError::ModelError;
};

class TooManyCandidatesError : public ModelError {
public:
    explicit TooManyCandidatesError(std::size_t n)
        : ModelError("exhaustive search limited to 12 candidates, got " + std::to_string(n)) {}
};

}  // namespace iplan
