#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cqed {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix on the joint atom-cavity space. Hamiltonians are
/// stored as H/hbar, i.e. in units of the cavity frequency.
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Bad input: malformed configuration or a violated parameter invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation left its domain of validity (leakage, trace drift,
/// ambiguous eigenstates, ...).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqed
