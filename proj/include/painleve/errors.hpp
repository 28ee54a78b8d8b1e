#ifndef PAINLEVE_ERRORS_HPP
#define PAINLEVE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace painleve {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or structural error in an expression string. Carries the
/// character offset where the problem was detected and what was expected.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position, std::string expected = {})
        : Error(msg), position_(position), expected_(std::move(expected)) {}
    std::size_t position() const { return position_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A complex line v = nu lies in the singular set; the theorem's
/// hypotheses exclude the requested arc.
class HypothesisError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Denominator modulus below the pole tolerance at an evaluation point.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Radicand vanishes at a base point; no sheet can be selected there.
class BranchPointError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Sheet transport could not be carried out unambiguously (radicand
/// modulus under the continuity floor, or an inconsistent seed value).
class SheetError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Evaluation failed at a boundary sample point; message names the location.
class SampleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResidualError : public NumericalError {
public:
    ResidualError(const std::string& msg, double residual)
        : NumericalError(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Root iteration exhausted its budget without converging.
class RootFindingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The restriction P(., nu) is identically zero: the line v = nu lies in
/// the component's zero set and has no finite fiber.
class LineContainedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Boundary extension failed: no guaranteed disc reaches the target, or
/// the candidate limit sits too close to the singular set.
class BoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TraceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace painleve

#endif
