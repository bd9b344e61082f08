#pragma once

#include <stdexcept>
#include <string>

namespace sruq {

/// Precondition or argument-contract violation (caller bug).
class ContractError : public std::invalid_argument {
public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent input file; message carries location context.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite intermediates, division by zero, iteration failures.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Singular least-squares system encountered with no regularization.
class RankDeficiencyError : public NumericalError {
public:
  explicit RankDeficiencyError(const std::string& what) : NumericalError(what) {}
};

/// Coordinate-system singularity (e.g. inclination at the branch limit).
class SingularityError : public NumericalError {
public:
  explicit SingularityError(const std::string& what) : NumericalError(what) {}
};

}  // namespace sruq
