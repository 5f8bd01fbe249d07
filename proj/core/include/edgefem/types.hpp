#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace edgefem {

using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

/// Row i holds the 3 Cartesian components of shape function i.
using BasisTable = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

using ScalarField = std::function<Complex(const Vec3&)>;
using VectorField = std::function<CVec3(const Vec3&)>;
using MatrixField = std::function<CMat3(const Vec3&)>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an element map (affine or curved) cannot be inverted.
class SingularMapError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgefem
