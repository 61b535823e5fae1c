#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace afrac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMap : public Error {
public:
    using Error::Error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class InvalidAddress : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class UnknownScheme : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Carries every violated scheme invariant, not just the first one found.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "scheme validation failed";
        for (const auto& item : items) {
            out += "\n  - ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

class EmptyTree : public Error {
public:
    using Error::Error;
};

class NoSeparation : public Error {
public:
    using Error::Error;
};

class AmbiguousBranch : public Error {
public:
    using Error::Error;
};

class OutsideAttractor : public Error {
public:
    using Error::Error;
};

class DepthOutOfRange : public Error {
public:
    using Error::Error;
};

class UnknownAddress : public Error {
public:
    using Error::Error;
};

}  // namespace afrac
