#ifndef PROBCUB_ERRORS_HPP
#define PROBCUB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace probcub {

// Bad caller input: dimension mismatch, out-of-range parameter, etc.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation not defined for this variant (e.g. density of an atomic measure).
class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// No analytic kernel mean for this (kernel, measure) pair.
class UnsupportedPair : public UnsupportedOperation {
public:
    UnsupportedPair(const std::string& kernel, const std::string& measure)
        : UnsupportedOperation("no analytic kernel mean for pair (" + kernel +
                               ", " + measure + ")"),
          kernel_name(kernel), measure_name(measure) {}
    std::string kernel_name;
    std::string measure_name;
};

// Cholesky failed after the maximum jitter escalation.
class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate(condition_estimate) {}
    double condition_estimate;
};

// Requested dimensions exceed the embedded generating matrices.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
          line(line) {}
    int line;
};

// Input file parsed but violates a numeric contract.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// MCMC chain never moved.
class DegenerateChainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace probcub

#endif
