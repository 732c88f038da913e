#pragma once

#include <stdexcept>
#include <string>

namespace ccwsim {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A rectangle or coordinate falls outside its grid.
class BoundsError : public Error {
public:
    using Error::Error;
};

// Plane/grid dimensions violate a precondition (odd size, divisibility, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Structurally inconsistent inputs (mismatched plane sizes, bad pyramid, ...).
class StructureError : public Error {
public:
    using Error::Error;
};

// Invalid simulation configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

// Raised by metrics when a distance ratio is undefined (zero denominator).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

// File-level I/O failure (open/write), carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input file; carries path and 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& path, int line, const std::string& msg)
        : Error(path + ":" + std::to_string(line) + ": " + msg),
          path_(path),
          line_(line) {}

    ParseError(const std::string& path, const std::string& msg)
        : Error(path + ": " + msg), path_(path), line_(0) {}

    const std::string& path() const noexcept { return path_; }
    int line() const noexcept { return line_; }

private:
    std::string path_;
    int line_;
};

}  // namespace ccwsim
