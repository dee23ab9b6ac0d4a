#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dualflow {

/// Input outside the domain of an operation (point off a quadric, kappa
/// outside the positive cone, time past the singular time, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class GeometryFailure { NotSpacelike, ConvexityLost, NonFinite, NotGraphical, NotInterior };

const char* to_string(GeometryFailure kind);

/// Raised by the geometry and duality kernels. Carries the offending grid index.
class GeometryError : public std::runtime_error {
public:
    GeometryError(GeometryFailure kind, int index);

    GeometryFailure kind() const noexcept { return kind_; }
    int index() const noexcept { return index_; }

private:
    GeometryFailure kind_;
    int index_;
};

/// All violations found while validating a configuration, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace dualflow
