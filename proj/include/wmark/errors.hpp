#pragma once

#include <stdexcept>
#include <string>

namespace wmark {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-supplied value (bad flag, bad attack parameter, ...).
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

// File system / codec failure (unreadable file, decode failure, ...).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Structural violation: capacity, dimension or shape mismatch.
class ConstraintError : public Error {
public:
    explicit ConstraintError(const std::string& msg) : Error(msg) {}
};

} // namespace wmark
