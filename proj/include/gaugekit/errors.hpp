#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gaugekit {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInterval : public Error {
public:
    using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class GaugeNonpositive : public Error {
public:
    GaugeNonpositive(double x, double value);
    double x;
    double value;
};

class DomainMismatch : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

// A local oracle broke its contract (non-advancing step, wrong witness interval).
class MalformedOracle : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected);
    std::size_t position;
    std::string expected;
};

// Evaluation left the natural domain of some expression node.
class DomainError : public Error {
public:
    DomainError(std::string node, double x, const std::string& what);
    std::string node;
    double x;
};

class NotDifferentiable : public Error {
public:
    explicit NotDifferentiable(std::string node);
    std::string node;
};

class MalformedModulus : public Error {
public:
    using Error::Error;
};

// f(s) == y was evaluated while trying to certify that f avoids y.
class TargetHitExactly : public Error {
public:
    explicit TargetHitExactly(double s);
    double s;
};

// f(s) >= M was observed while trying to certify f < M.
class BoundViolated : public Error {
public:
    BoundViolated(double s, double fs, double bound);
    double s;
    double fs;
};

class NoSignChange : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

// Malformed serialized input (JSON schema mismatch, bad gauge spec).
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace gaugekit
