#pragma once

#include <stdexcept>
#include <string>

namespace pcfl {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Missing, malformed, or inconsistent data (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};

/// Numeric failure such as a NaN loss (CLI exit code 4).
struct NumericError : Error {
    using Error::Error;
};

}  // namespace pcfl
