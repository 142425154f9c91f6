#pragma once

#include <stdexcept>
#include <string>

namespace metacomb {

// Input shape violations (mismatched vector lengths, misaligned tables).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid caller-supplied parameters (empty grids, thresholds outside (0,1), bad config).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent data (bad CSV cells, out-of-range scores, missing columns).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data that is structurally valid but unusable for the requested fit,
// e.g. a gold column containing only one label.
struct DegenerateDataError : DataError {
    using DataError::DataError;
};

// A class cannot be mapped under the configured label taxonomy.
struct MappingError : DataError {
    using DataError::DataError;
};

// A quantity required to be nonzero vanished (weight sum W == 0).
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

// A class norm needed as a denominator is zero (no positive gold labels).
struct DegenerateClassError : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace metacomb
