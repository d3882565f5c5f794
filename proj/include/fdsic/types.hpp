#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fdsic {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration values.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Mismatched lengths or matrix shapes.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Singular or ill-conditioned systems, divisions by zero.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// An operation was called outside its stated precondition.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace fdsic
