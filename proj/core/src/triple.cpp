#include "gbdt/triple.hpp"

#include <cmath>
#include <random>

#include "gbdt/linalg.hpp"

namespace gbdt {

namespace {

void require_shape(const ComplexMatrix& m, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(name) + " must be " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

double max_imag(const ComplexMatrix& m) {
  double v = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      v = std::max(v, std::abs(m(i, j).imag()));
  return v;
}

}  // namespace

ParameterTriple validate_triple(const ComplexMatrix& A, const ComplexMatrix& S0,
                                const ComplexMatrix& Pi0) {
  const Eigen::Index n = A.rows();
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "order must be >= 1");
  require_shape(A, n, n, "A");
  require_shape(S0, n, n, "S0");
  require_shape(Pi0, n, 2, "Pi0");
  if (!all_finite(A) || !all_finite(S0) || !all_finite(Pi0)) {
    throw Error(ErrorCode::ConstraintViolated, "non-finite entries in candidate triple");
  }

  const double s0_norm = fro_norm(S0);
  const double herm = fro_norm(S0 - S0.adjoint());
  if (herm > ParameterTriple::kIdentityTol * std::max(s0_norm, 1.0)) {
    throw Error(ErrorCode::NotHermitian,
                "S0 deviates from S0* by " + std::to_string(herm));
  }

  const ComplexMatrix lhs = A * S0 - S0 * A.adjoint();
  const ComplexMatrix rhs = kI * (Pi0 * Pi0.adjoint());
  const double residual = fro_norm(lhs - rhs);
  const double scale = fro_norm(A) * s0_norm + fro_norm(Pi0) * fro_norm(Pi0);
  if (residual > ParameterTriple::kIdentityTol * std::max(scale, 1.0)) {
    throw Error(ErrorCode::IdentityViolated,
                "A*S0 - S0*A* - i*Pi0*Pi0* has residual " + std::to_string(residual) +
                    " (scale " + std::to_string(scale) + ")");
  }

  ParameterTriple t;
  t.A_ = A;
  t.S0_ = 0.5 * (S0 + S0.adjoint());  // exact Hermitian representative
  t.Pi0_ = Pi0;
  t.identity_residual_ = residual;
  t.spectrum_ = eigenvalues(A);
  t.spectral_radius_ = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    t.spectral_radius_ = std::max(t.spectral_radius_, std::abs(t.spectrum_(i)));
  t.s0_positive_definite_ = hermitian_min_eig(t.S0_) > 0.0;

  ComplexVector conj_spec(n);
  for (Eigen::Index i = 0; i < n; ++i) conj_spec(i) = std::conj(t.spectrum_(i));
  const double sep = spectra_separation(t.spectrum_, conj_spec);
  t.sylvester_well_posed_ = sep > kSylvesterSeparationTol * 2.0 * fro_norm(A);
  return t;
}

RealnessCertificate realness_conditions(const ParameterTriple& t) {
  RealnessCertificate cert;
  double v = max_imag(kI * t.A());
  v = std::max(v, max_imag(t.S0()));
  v = std::max(v, max_imag(kI * t.lambda1_0()));
  v = std::max(v, max_imag(ComplexMatrix(t.lambda2_0())));
  cert.max_violation = v;
  cert.is_real_form = v <= 1e-12;
  return cert;
}

ParameterTriple make_example1(double calA, double m1, double m2, int sign1, int sign2) {
  if (!(calA > 0.0) || m1 < 0.0 || m2 < 0.0) {
    throw Error(ErrorCode::ConstraintViolated,
                "calA must be positive and m1, m2 nonnegative");
  }
  if (sign1 * sign1 != 1 || sign2 * sign2 != 1) {
    throw Error(ErrorCode::ConstraintViolated, "signs must be +1 or -1");
  }
  const double mismatch = std::abs(2.0 * calA - (m1 * m1 + m2 * m2));
  if (mismatch > 1e-12 * std::max(1.0, 2.0 * calA)) {
    throw Error(ErrorCode::ConstraintViolated,
                "2*calA = " + std::to_string(2.0 * calA) + " but m1^2 + m2^2 = " +
                    std::to_string(m1 * m1 + m2 * m2));
  }
  ComplexMatrix A(1, 1), S0(1, 1), Pi0(1, 2);
  A(0, 0) = kI * calA;
  S0(0, 0) = 1.0;
  Pi0(0, 0) = Complex(0.0, sign1 * m1);
  Pi0(0, 1) = Complex(sign2 * m2, 0.0);
  return validate_triple(A, S0, Pi0);
}

ParameterTriple make_example2() {
  ComplexMatrix A(2, 2), S0 = ComplexMatrix::Identity(2, 2), Pi0(2, 2);
  A << kI, 0, kI, kI;
  const double r = 1.0 / std::sqrt(2.0);
  Pi0 << 2.0 * r * kI, 0, r * kI, r * std::sqrt(3.0);
  return validate_triple(A, S0, Pi0);
}

ParameterTriple make_example3(const RealMatrix& calA0, const RealVector& h1,
                              const RealVector& h2) {
  const Eigen::Index n = calA0.rows();
  if (calA0.cols() != n || h1.size() != n || h2.size() != n || n < 1) {
    throw Error(ErrorCode::ShapeMismatch, "calA0 must be n x n and h1, h2 of length n");
  }
  const double skew = (calA0 + calA0.transpose()).norm();
  if (skew > 1e-12 * std::max(1.0, calA0.norm())) {
    throw Error(ErrorCode::NotSkewSymmetric,
                "calA0 + calA0^T has norm " + std::to_string(skew));
  }
  const RealMatrix calA =
      calA0 + h1 * h1.transpose() + h2 * h2.transpose();
  const ComplexMatrix A = kI * calA.cast<Complex>();
  ComplexMatrix Pi0(n, 2);
  Pi0.col(0) = std::sqrt(2.0) * kI * h1.cast<Complex>();
  Pi0.col(1) = std::sqrt(2.0) * h2.cast<Complex>();
  return validate_triple(A, ComplexMatrix::Identity(n, n), Pi0);
}

RealMatrix example4_forced_lower(const RealVector& h1, const RealVector& h2) {
  const Eigen::Index n = h1.size();
  const RealMatrix B = h1 * h1.transpose() + h2 * h2.transpose();
  RealMatrix lower = RealMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) lower(i, j) = B(i, j);
  return lower;
}

ParameterTriple make_example4(const RealVector& h1, const RealVector& h2,
                              const RealMatrix& lower) {
  const Eigen::Index n = h1.size();
  if (h2.size() != n || lower.rows() != n || lower.cols() != n || n < 1) {
    throw Error(ErrorCode::ShapeMismatch, "h1, h2 of length n and lower n x n required");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (lower(i, j) != 0.0) {
        throw Error(ErrorCode::ConstraintViolated,
                    "lower must be strictly lower triangular");
      }
    }
  }
  const RealMatrix forced = example4_forced_lower(h1, h2);
  const double mismatch = (lower - forced).norm();
  if (mismatch > 1e-12 * std::max(1.0, forced.norm())) {
    throw Error(ErrorCode::InconsistentLowerPart,
                "supplied strictly-lower part contradicts calA + calA^T = Pi0 Pi0* by " +
                    std::to_string(mismatch));
  }

  const RealMatrix B = h1 * h1.transpose() + h2 * h2.transpose();
  RealMatrix calA = forced;
  calA.diagonal() = 0.5 * B.diagonal();
  const ComplexMatrix A = kI * calA.cast<Complex>();
  ComplexMatrix Pi0(n, 2);
  Pi0.col(0) = kI * h1.cast<Complex>();
  Pi0.col(1) = h2.cast<Complex>();
  return validate_triple(A, ComplexMatrix::Identity(n, n), Pi0);
}

ParameterTriple make_example4(const RealVector& h1, const RealVector& h2) {
  return make_example4(h1, h2, example4_forced_lower(h1, h2));
}

bool spectrum_halfplane_check(const ParameterTriple& t) {
  const double gate = -1e-10 * fro_norm(t.A());
  for (Eigen::Index i = 0; i < t.spectrum().size(); ++i) {
    if (t.spectrum()(i).imag() < gate) return false;
  }
  return true;
}

namespace {

// Scale cap: over x in [-10, 10] both e^{2|x| ||calA||} and its reciprocal
// must stay well inside double range so min-eigenvalue scans remain
// meaningful. 0.7 keeps the dynamic range under ~e^{28}.
constexpr double kRandomNormCap = 0.7;

RealVector random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace

ParameterTriple random_example3(int n, std::uint64_t rng_seed) {
  if (n < 1) throw Error(ErrorCode::ConstraintViolated, "order must be >= 1");
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealMatrix calA0 = RealMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      calA0(i, j) = dist(rng);
      calA0(j, i) = -calA0(i, j);
    }
  }
  RealVector h1 = random_vector(rng, n);
  RealVector h2 = random_vector(rng, n);
  const RealMatrix calA = calA0 + h1 * h1.transpose() + h2 * h2.transpose();
  const double norm = calA.norm();
  if (norm > kRandomNormCap) {
    const double alpha = kRandomNormCap / norm;
    calA0 *= alpha;
    h1 *= std::sqrt(alpha);
    h2 *= std::sqrt(alpha);
  }
  return make_example3(calA0, h1, h2);
}

ParameterTriple random_example4(int n, std::uint64_t rng_seed) {
  if (n < 1) throw Error(ErrorCode::ConstraintViolated, "order must be >= 1");
  std::mt19937_64 rng(rng_seed ^ 0x9e3779b97f4a7c15ull);
  RealVector h1 = random_vector(rng, n);
  RealVector h2 = random_vector(rng, n);
  const RealMatrix B = h1 * h1.transpose() + h2 * h2.transpose();
  const double norm = B.norm();  // ||calA|| <= ||B||
  if (norm > kRandomNormCap) {
    const double alpha = std::sqrt(kRandomNormCap / norm);
    h1 *= alpha;
    h2 *= alpha;
  }
  return make_example4(h1, h2);
}

}  // namespace gbdt
