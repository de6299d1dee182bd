#ifndef KRONMLE_ERRORS_HPP
#define KRONMLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kronmle {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched or out-of-range dimensions in an input.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A matrix required to be symmetric positive definite is not.
class NotPositiveDefinite : public Error {
public:
  explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

/// Sample data is rank-deficient where full rank is required
/// (e.g. the profile objective's inner sum is singular).
class DegenerateSample : public Error {
public:
  explicit DegenerateSample(const std::string& what) : Error(what) {}
};

/// A flip-flop update is not defined because an inner sum is singular.
class StepIllDefined : public Error {
public:
  explicit StepIllDefined(const std::string& what) : Error(what) {}
};

/// A matrix pencil does not have the generic structure the reduction needs.
class NonGenericPencil : public Error {
public:
  explicit NonGenericPencil(const std::string& what) : Error(what) {}
};

/// Eigenvalues that must be distinct are numerically repeated.
class RepeatedEigenvalues : public Error {
public:
  explicit RepeatedEigenvalues(const std::string& what) : Error(what) {}
};

/// A matrix that must be invertible is numerically singular.
class SingularInput : public Error {
public:
  explicit SingularInput(const std::string& what) : Error(what) {}
};

/// A configuration or argument value is outside its documented domain.
class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace kronmle

#endif
