#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mscat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result not representable in double precision.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A query point is not covered by the mesh (or lies inside a source disk).
class NotInDomainError : public Error {
public:
    using Error::Error;
};

/// Mesh or scene geometry violates a structural requirement.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Subdomain system could not be factorized.
class SingularError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed scene document. `location` is a JSON pointer or a byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string location)
        : Error(what), location_(std::move(location)) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

/// A scene document that parsed but violates one or more invariants.
/// All violations are collected, not only the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& p) {
        std::string s = "scene validation failed:";
        for (const auto& m : p) s += "\n  - " + m;
        return s;
    }
    std::vector<std::string> problems_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mscat
