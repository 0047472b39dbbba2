#pragma once

#include <stdexcept>
#include <string>

namespace qrac {

/// Malformed inputs: invalid settings, non-Hermitian matrices where a
/// Hermitian one is required, broken strategy files, violated preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: eigensolver non-convergence, imaginary residue on a
/// quantity that must be real, consistency checks failing beyond tolerance.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qrac
