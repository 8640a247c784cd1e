#pragma once

#include <stdexcept>
#include <string>

namespace classy {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV, candidate list, serialized model, ...).
struct ParseError : Error {
    using Error::Error;
};

/// Structurally valid input combined with impossible settings
/// (unknown label column, more folds than instances, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Data handed to a fitted model that does not match its schema.
struct InputError : Error {
    using Error::Error;
};

} // namespace classy
