#pragma once

#include <stdexcept>
#include <string>

namespace tbp {

// Well-formed input that violates a documented invariant or precondition.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed document (JSON, alist, CSV, grid syntax).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// The ensemble does not converge anywhere inside the admissible search range.
class UndecodableError : public std::runtime_error {
public:
    explicit UndecodableError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tbp
