#include "gbdt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbdt {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SpectraOverlap: return "SpectraOverlap";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::IdentityViolated: return "IdentityViolated";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::NotSkewSymmetric: return "NotSkewSymmetric";
    case ErrorCode::InconsistentLowerPart: return "InconsistentLowerPart";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::IdentityDriftExceeded: return "IdentityDriftExceeded";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::ResidualAtNoiseFloor: return "ResidualAtNoiseFloor";
    case ErrorCode::OutOfCoverage: return "OutOfCoverage";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

Eigen::Matrix2cd sigma1() {
  Eigen::Matrix2cd s;
  s << 0, 1, 1, 0;
  return s;
}

Eigen::Matrix2cd sigma2() {
  Eigen::Matrix2cd s;
  s << 0, -kI, kI, 0;
  return s;
}

Eigen::Matrix2cd sigma3() {
  Eigen::Matrix2cd s;
  s << 1, 0, 0, -1;
  return s;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> pts;
  if (step <= 0.0 || max < min) return pts;
  const long count = static_cast<long>(std::floor((max - min) / step + 0.5)) + 1;
  pts.reserve(static_cast<std::size_t>(std::max(count, 1L)));
  for (long k = 0; k < count; ++k) {
    const double x = min + static_cast<double>(k) * step;
    if (x > max + 0.5 * step) break;
    pts.push_back(x);
  }
  return pts;
}

namespace {

double one_norm(const ComplexMatrix& m) {
  if (m.cols() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

void require_square(const ComplexMatrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, std::string(name) + " must be square, got " +
                                              std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
  }
}

// Pade numerator coefficients for degrees 3..13 (Higham, "The scaling and
// squaring method revisited").
void pade_uv(const ComplexMatrix& A, int degree, ComplexMatrix& U, ComplexMatrix& V) {
  const Eigen::Index n = A.rows();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix A2 = A * A;
  switch (degree) {
    case 3: {
      static constexpr double b[] = {120., 60., 12., 1.};
      U = A * (b[3] * A2 + b[1] * I);
      V = b[2] * A2 + b[0] * I;
      return;
    }
    case 5: {
      static constexpr double b[] = {30240., 15120., 3360., 420., 30., 1.};
      const ComplexMatrix A4 = A2 * A2;
      U = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
      V = b[4] * A4 + b[2] * A2 + b[0] * I;
      return;
    }
    case 7: {
      static constexpr double b[] = {17297280., 8648640., 1995840., 277200.,
                                     25200.,    1512.,    56.,      1.};
      const ComplexMatrix A4 = A2 * A2;
      const ComplexMatrix A6 = A4 * A2;
      U = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
      V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
      return;
    }
    case 9: {
      static constexpr double b[] = {17643225600., 8821612800., 2075673600., 302702400.,
                                     30270240.,    2162160.,    110880.,     3960.,
                                     90.,          1.};
      const ComplexMatrix A4 = A2 * A2;
      const ComplexMatrix A6 = A4 * A2;
      const ComplexMatrix A8 = A6 * A2;
      U = A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
      V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
      return;
    }
    default: {  // 13
      static constexpr double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                     1187353796428800.,  129060195264000.,   10559470521600.,
                                     670442572800.,      33522128640.,       1323241920.,
                                     40840800.,          960960.,            16380.,
                                     182.,               1.};
      const ComplexMatrix A4 = A2 * A2;
      const ComplexMatrix A6 = A4 * A2;
      U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
               b[3] * A2 + b[1] * I);
      V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
          b[0] * I;
      return;
    }
  }
}

}  // namespace

ComplexMatrix mat_exp(const ComplexMatrix& M, double t) {
  require_square(M, "mat_exp input");
  if (!std::isfinite(t)) throw Error(ErrorCode::Overflow, "non-finite scale t");
  const Eigen::Index n = M.rows();
  if (n == 0) return M;
  ComplexMatrix A = t * M;
  if (!all_finite(A)) throw Error(ErrorCode::Overflow, "non-finite entries in t*M");

  const double norm = one_norm(A);
  // theta_m bounds from Higham's degree-selection table
  static constexpr double theta3 = 1.495585217958292e-2;
  static constexpr double theta5 = 2.539398330063230e-1;
  static constexpr double theta7 = 9.504178996162932e-1;
  static constexpr double theta9 = 2.097847961257068e0;
  static constexpr double theta13 = 5.371920351148152e0;

  int degree = 13;
  int squarings = 0;
  if (norm <= theta3) {
    degree = 3;
  } else if (norm <= theta5) {
    degree = 5;
  } else if (norm <= theta7) {
    degree = 7;
  } else if (norm <= theta9) {
    degree = 9;
  } else if (norm > theta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    A /= std::pow(2.0, squarings);
  }

  ComplexMatrix U, V;
  pade_uv(A, degree, U, V);
  ComplexMatrix result = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) result = result * result;

  if (!all_finite(result)) {
    throw Error(ErrorCode::Overflow, "exp(tM) exceeds representable range, ||tM||_1 = " +
                                         std::to_string(norm));
  }
  return result;
}

ComplexMatrix solve_sylvester(const ComplexMatrix& F, const ComplexMatrix& G,
                              const ComplexMatrix& C) {
  require_square(F, "F");
  require_square(G, "G");
  const Eigen::Index p = F.rows();
  const Eigen::Index q = G.rows();
  if (C.rows() != p || C.cols() != q) {
    throw Error(ErrorCode::ShapeMismatch, "C must be " + std::to_string(p) + "x" +
                                              std::to_string(q));
  }

  const double scale = fro_norm(F) + fro_norm(G);
  const double sep = spectra_separation(eigenvalues(F), eigenvalues(G));
  if (sep <= kSylvesterSeparationTol * scale) {
    throw Error(ErrorCode::SpectraOverlap,
                "spectra of F and G separated by " + std::to_string(sep) +
                    ", below gate " + std::to_string(kSylvesterSeparationTol * scale));
  }

  // vec(FX - XG) = (I (x) F - G^T (x) I) vec(X), column-major vec.
  ComplexMatrix K = ComplexMatrix::Zero(p * q, p * q);
  for (Eigen::Index j = 0; j < q; ++j) {
    K.block(j * p, j * p, p, p) += F;
    for (Eigen::Index k = 0; k < q; ++k) {
      K.block(k * p, j * p, p, p).diagonal().array() -= G(j, k);
    }
  }
  ComplexVector c(p * q);
  for (Eigen::Index j = 0; j < q; ++j) c.segment(j * p, p) = C.col(j);

  const ComplexVector x = K.partialPivLu().solve(c);
  ComplexMatrix X(p, q);
  for (Eigen::Index j = 0; j < q; ++j) X.col(j) = x.segment(j * p, p);

  const double residual = fro_norm(F * X - X * G - C);
  const double bound = 1e-12 * scale * std::max(fro_norm(X), 1e-300);
  if (!all_finite(X) || residual > std::max(bound, 1e-12 * fro_norm(C))) {
    throw Error(ErrorCode::InternalInconsistency,
                "Sylvester residual " + std::to_string(residual) + " above bound");
  }
  return X;
}

ComplexMatrix van_loan_integral(const ComplexMatrix& F, const ComplexMatrix& C,
                                const ComplexMatrix& G, double x) {
  require_square(F, "F");
  require_square(G, "G");
  const Eigen::Index p = F.rows();
  const Eigen::Index q = G.rows();
  if (C.rows() != p || C.cols() != q) {
    throw Error(ErrorCode::ShapeMismatch, "C must be " + std::to_string(p) + "x" +
                                              std::to_string(q));
  }
  ComplexMatrix block = ComplexMatrix::Zero(p + q, p + q);
  block.topLeftCorner(p, p) = F;
  block.topRightCorner(p, q) = C;
  block.bottomRightCorner(q, q) = -G;
  const ComplexMatrix e = mat_exp(block, x);
  return e.topRightCorner(p, q) * mat_exp(G, x);
}

double hermitian_min_eig(const ComplexMatrix& M) {
  require_square(M, "hermitian_min_eig input");
  if (M.rows() == 0) throw Error(ErrorCode::ShapeMismatch, "empty matrix");
  const double asym = fro_norm(M - M.adjoint());
  if (asym > kHermitianTol * std::max(fro_norm(M), 1e-300) && fro_norm(M) > 0.0) {
    throw Error(ErrorCode::NotHermitian,
                "||M - M*|| = " + std::to_string(asym) + " exceeds tolerance");
  }
  const ComplexMatrix H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(H, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

InverseResult inverse_with_condition(const ComplexMatrix& M) {
  require_square(M, "inverse_with_condition input");
  if (M.rows() == 0) return {M, 1.0};
  Eigen::JacobiSVD<ComplexMatrix> svd(M);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double condition = (smin > 0.0) ? smax / smin
                                        : std::numeric_limits<double>::infinity();
  if (!(condition < kConditionLimit)) {
    throw Error(ErrorCode::NearSingular,
                "condition estimate " + std::to_string(condition) + " exceeds 1e12");
  }
  InverseResult out;
  out.inverse = M.partialPivLu().inverse();
  out.condition = condition;
  if (!all_finite(out.inverse)) {
    throw Error(ErrorCode::NearSingular, "non-finite entries in computed inverse");
  }
  return out;
}

ComplexVector eigenvalues(const ComplexMatrix& M) {
  require_square(M, "eigenvalues input");
  if (M.rows() == 0) return ComplexVector();
  if (M.rows() == 1) {
    ComplexVector v(1);
    v(0) = M(0, 0);
    return v;
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InternalInconsistency, "eigenvalue iteration failed");
  }
  return solver.eigenvalues();
}

double spectral_radius(const ComplexMatrix& M) {
  const ComplexVector ev = eigenvalues(M);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rho = std::max(rho, std::abs(ev(i)));
  return rho;
}

double spectra_separation(const ComplexVector& a, const ComplexVector& b) {
  double sep = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      sep = std::min(sep, std::abs(a(i) - b(j)));
    }
  }
  return sep;
}

}  // namespace gbdt
