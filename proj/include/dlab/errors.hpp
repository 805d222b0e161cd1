#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dlab {

// Error taxonomy shared by every module. Each error remembers the module that
// raised it so the CLI can emit one machine-parseable record per failure.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

    // class name, stable across platforms (no RTTI name mangling)
    virtual const char* code() const noexcept { return "Error"; }

private:
    std::string module_;
};

// grid mismatch, bad spacing, bad plan geometry
class GridError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "GridError"; }
};

// request outside the covered domain (region outside grid, t = 0, ...)
class DomainError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "DomainError"; }
};

// unknown builtin name
class NotFoundError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "NotFoundError"; }
};

// malformed datum spec / JSON
class ParseError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "ParseError"; }
};

// an evaluator produced a non-finite value or threw
class EvalError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "EvalError"; }
};

// datum fails the weighted-norm hypotheses needed by the requested operation
class HypothesisError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "HypothesisError"; }
};

// refinement cap reached before the requested resolution/convergence
class ResolutionError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "ResolutionError"; }
};

// x-window fails the tail-mass containment check
class TailError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "TailError"; }
};

// operation not available for this datum (e.g. no closed-form evolution)
class UnsupportedError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "UnsupportedError"; }
};

// trace unusable for fitting (all-zero magnitudes, too few points)
class DegenerateTraceError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "DegenerateTraceError"; }
};

}  // namespace dlab
