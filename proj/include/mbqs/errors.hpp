#pragma once

#include <stdexcept>
#include <string>

namespace mbqs {

// Error taxonomy used across the library. The CLI maps each family to a
// distinct exit code.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested capability exists in the protocol but not in this code path
// (e.g. AFM initial state in the free-fermion engine).
struct FeatureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Peak detection failed; carries the global-max fallback in the message.
struct DetectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown (NaN/Inf or ill-conditioned contraction); carries a
// condition report.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mbqs
