#pragma once

#include <stdexcept>
#include <string>

namespace lrlstm {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or length mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Malformed input text (lexicon rows, embedding rows, SST trees, config files).
class ParseError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration: unknown key, unresolvable path, bad value.
class ConfigError : public Error {
public:
    using Error::Error;
};

// NaN/Inf reached a forward value, gradient, or probe point.
class NumericError : public Error {
public:
    using Error::Error;
};

// Corrupt or truncated checkpoint.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace lrlstm
