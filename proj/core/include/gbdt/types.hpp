#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gbdt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
  ShapeMismatch,
  Overflow,
  SpectraOverlap,
  NearSingular,
  NotHermitian,
  IdentityViolated,
  ConstraintViolated,
  NotSkewSymmetric,
  InconsistentLowerPart,
  StepSizeUnderflow,
  IdentityDriftExceeded,
  QuadratureNonConvergence,
  StencilOutOfDomain,
  ResidualAtNoiseFloor,
  OutOfCoverage,
  InternalInconsistency,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception; `code()` tells callers which recovery path applies
/// (e.g. SpectraOverlap -> switch the S(x) evaluation method).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr Complex kI{0.0, 1.0};

Eigen::Matrix2cd sigma1();
Eigen::Matrix2cd sigma2();
Eigen::Matrix2cd sigma3();

bool all_finite(const ComplexMatrix& m);

/// Frobenius norm; the norm used for every residual and tolerance gate.
inline double fro_norm(const ComplexMatrix& m) { return m.norm(); }

/// Uniform grid `min:max:step`, endpoints included within half a step.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> points() const;
};

}  // namespace gbdt
