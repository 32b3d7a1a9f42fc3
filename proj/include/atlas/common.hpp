#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace atlas {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

// Error categories map onto CLI exit codes: input 2, solver 3, verification 4.
enum class ErrorKind { Domain, Input, Solver, Verification };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error domain_error(const std::string& s) { return Error(ErrorKind::Domain, s); }
inline Error input_error(const std::string& s) { return Error(ErrorKind::Input, s); }
inline Error solver_error(const std::string& s) { return Error(ErrorKind::Solver, s); }
inline Error verification_error(const std::string& s) { return Error(ErrorKind::Verification, s); }

// max-row-sum norm, matching the sup norm used on vectors
inline double inf_norm(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
  return best;
}

inline double sup_norm(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace atlas
