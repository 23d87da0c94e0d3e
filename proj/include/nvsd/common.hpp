#pragma once

#include <stdexcept>
#include <string>

namespace nvsd {

// Error taxonomy. Everything the library throws derives from Error so the
// CLI can map failures onto exit codes uniformly.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Sample too small / malformed (n < 3, mismatched lengths, non-finite values).
struct InvalidSampleError : Error {
    using Error::Error;
};

// Response vector carries no information (constant, zero variance/IQR).
struct DegenerateResponseError : Error {
    using Error::Error;
};

// A predictor or paired input is degenerate (constant x in a correlation test).
struct DegenerateInputError : Error {
    using Error::Error;
};

// Smoother / model fitting cannot proceed (too few points, no variables).
struct FitError : Error {
    using Error::Error;
};

// Input file fails to parse.
struct ParseError : Error {
    using Error::Error;
};

// Structured input (model file, prediction matrix) misses required fields.
struct SchemaError : Error {
    using Error::Error;
};

// Bad configuration values.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nvsd
