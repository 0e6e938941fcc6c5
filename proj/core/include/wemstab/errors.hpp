#pragma once

#include <stdexcept>
#include <string>

namespace wemstab {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: malformed files, violated preconditions, inconsistent data.
// The CLI maps these to exit code 1.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem-level failures: unreadable or unwritable paths.
// The CLI maps these to exit code 2.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace wemstab
