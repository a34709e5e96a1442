#pragma once

#include <stdexcept>
#include <string>

namespace monostark {

/// Invalid input: bad quantum numbers, nonpositive lengths, malformed config.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation produced a non-finite value or failed an internal check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Axis { xi, eta };

inline const char* axis_name(Axis a) { return a == Axis::xi ? "xi" : "eta"; }

/// Raised when the dressed phase is evaluated on the z-axis, where
/// log(xi*eta) diverges. xi = 0 is the negative z half-line, eta = 0 the positive one.
class SingularityError : public DomainError {
public:
    explicit SingularityError(Axis axis)
        : DomainError(std::string("phase singular on ") + axis_name(axis) + " = 0 ("
                      + (axis == Axis::xi ? "negative" : "positive") + " z half-axis)"),
          axis_(axis) {}

    Axis axis() const noexcept { return axis_; }

private:
    Axis axis_;
};

/// Config document violates its schema. `field()` names the offending key.
class SchemaError : public DomainError {
public:
    SchemaError(std::string field, const std::string& what)
        : DomainError("schema error at '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ValidityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoCrossingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace monostark
