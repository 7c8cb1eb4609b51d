#pragma once

#include <stdexcept>
#include <string>

namespace lcdsc {

// Error categories map one-to-one onto CLI exit codes (1, 2, 3).

/// Bad arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data that cannot be processed (non-finite samples, bad files, too short).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lcdsc
