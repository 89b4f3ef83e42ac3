#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blockprox {

/// Bad user-facing configuration: invalid parameters, malformed config file,
/// unknown preset names, and similar.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidPartitionError : public ConfigError {
public:
    explicit InvalidPartitionError(const std::string& what) : ConfigError(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Power iteration failed to reach the requested tolerance. Carries the last
/// Rayleigh-quotient estimate so callers can decide whether it is usable.
class SpectralNormError : public std::runtime_error {
public:
    SpectralNormError(const std::string& what, double last_estimate)
        : std::runtime_error(what), last_estimate_(last_estimate) {}

    double last_estimate() const { return last_estimate_; }

private:
    double last_estimate_;
};

class StandardizeError : public std::runtime_error {
public:
    StandardizeError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}

    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

class UnsupportedRuleError : public ConfigError {
public:
    explicit UnsupportedRuleError(const std::string& what) : ConfigError(what) {}
};

class UndefinedStepError : public std::runtime_error {
public:
    UndefinedStepError(const std::string& what, std::size_t block)
        : std::runtime_error(what), block_(block) {}

    std::size_t block() const { return block_; }

private:
    std::size_t block_;
};

}  // namespace blockprox
