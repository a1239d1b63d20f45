#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace virann {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations on user input.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NonUnitaryError : public Error {
 public:
  NonUnitaryError(const std::string& what, int level, double eigenvalue)
      : Error(what), level_(level), eigenvalue_(eigenvalue) {}
  int level() const { return level_; }
  double eigenvalue() const { return eigenvalue_; }

 private:
  int level_;
  double eigenvalue_;
};

class NotInwardError : public Error {
 public:
  NotInwardError(const std::string& what, double margin) : Error(what), margin_(margin) {}
  // max over the grid of Re(sum a_n e^{in theta}); positive means outward.
  double margin() const { return margin_; }

 private:
  double margin_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Largest singular value.
double op_norm(const CMatrix& a);

}  // namespace virann
