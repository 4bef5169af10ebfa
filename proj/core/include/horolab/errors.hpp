#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

/// Thrown when a functional's defining series has non-vanishing tail terms.
class DivergentSeries : public std::runtime_error {
public:
    explicit DivergentSeries(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when iterates escape the configured norm bound.
class UnboundedOrbit : public std::runtime_error {
public:
    explicit UnboundedOrbit(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed scenario/config input (CLI maps this to exit code 2).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace horolab
