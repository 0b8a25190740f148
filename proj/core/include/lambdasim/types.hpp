#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lambdasim {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different (or incompatible) bases.
class BasisMismatch : public Error {
public:
  using Error::Error;
};

/// A requested Hilbert space exceeds the documented size limits.
class SizeLimitExceeded : public Error {
public:
  using Error::Error;
};

/// The nullspace/multiplet structure could not be resolved unambiguously.
class SpectralAmbiguity : public Error {
public:
  using Error::Error;
};

/// Numerical integrity violated (non-finite values, broken density-matrix bounds).
class IntegrityError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public Error {
public:
  ConfigError(const std::string& field, const std::string& what, int line = 0)
      : Error(format(field, what, line)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string& field, const std::string& what, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "'" + field + "': ";
    return out + what;
  }

  std::string field_;
  int line_;
};

}  // namespace lambdasim
