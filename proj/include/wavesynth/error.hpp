#pragma once

#include <stdexcept>
#include <string>

namespace wavesynth {

/// Invalid argument outside the supported domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical breakdown: overflow, quadrature or SVD non-convergence.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed experiment or CLI configuration. `parameter()` names the culprit.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string parameter, const std::string& what)
        : std::invalid_argument(what), parameter_(std::move(parameter)) {}
    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

/// File-system failure while emitting or reading reports; the message names the path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wavesynth
