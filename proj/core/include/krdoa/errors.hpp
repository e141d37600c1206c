// SPDX-License-Identifier: Apache-2.0

#ifndef KRDOA_ERRORS_HPP
#define KRDOA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace krdoa {

/// Base class for all library errors. `stage()` names the module that raised
/// it ("geometry", "synth", "subspace", "est1d", "est2d", "bench").
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition (e.g. rank-deficient source covariance).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The requested method cannot handle the problem (too many sources for the
/// decoupled construction, polynomial/ESPRIT back-ends on non-uniform axes).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A numerical estimator failed to produce the requested number of estimates.
class EstimationError : public Error {
public:
    using Error::Error;
};

}  // namespace krdoa

#endif  // KRDOA_ERRORS_HPP
