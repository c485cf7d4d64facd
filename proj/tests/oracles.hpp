#pragma once

// Test-side oracles, deliberately independent of the library's evaluation
// paths: plain Taylor summation in extended precision for the matrix
// exponential, adaptive Simpson quadrature, and hand-integrated closed forms
// for the built-in example families.

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "gbdt/types.hpp"

namespace oracles {

using LongComplex = std::complex<long double>;
using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;

/// e^{tM} by scaling + 128-term Taylor summation in long double.
inline gbdt::ComplexMatrix taylor_mat_exp(const gbdt::ComplexMatrix& M, double t) {
  const Eigen::Index n = M.rows();
  LongMatrix A(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      A(i, j) = LongComplex(M(i, j).real(), M(i, j).imag()) * static_cast<long double>(t);

  long double norm = 0.0L;
  for (Eigen::Index j = 0; j < n; ++j) {
    long double col = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i) col += std::abs(A(i, j));
    norm = std::max(norm, col);
  }
  int squarings = 0;
  while (norm > 0.5L) {
    norm /= 2.0L;
    ++squarings;
  }
  A /= std::pow(2.0L, static_cast<long double>(squarings));

  LongMatrix sum = LongMatrix::Identity(n, n);
  LongMatrix term = LongMatrix::Identity(n, n);
  for (int k = 1; k <= 128; ++k) {
    term = term * A / static_cast<long double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;

  gbdt::ComplexMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = gbdt::Complex(static_cast<double>(sum(i, j).real()),
                                static_cast<double>(sum(i, j).imag()));
  return out;
}

/// Adaptive Simpson on a matrix-valued integrand (signed for b < a).
inline gbdt::ComplexMatrix adaptive_simpson(
    const std::function<gbdt::ComplexMatrix(double)>& f, double a, double b,
    double tol = 1e-13, int depth = 60) {
  if (a == b) {
    const gbdt::ComplexMatrix probe = f(a);
    return gbdt::ComplexMatrix::Zero(probe.rows(), probe.cols());
  }
  if (b < a) return -adaptive_simpson(f, b, a, tol, depth);

  struct Rec {
    const std::function<gbdt::ComplexMatrix(double)>& f;
    gbdt::ComplexMatrix run(double lo, double hi, const gbdt::ComplexMatrix& flo,
                            const gbdt::ComplexMatrix& fmid, const gbdt::ComplexMatrix& fhi,
                            const gbdt::ComplexMatrix& whole, double tol, int depth) const {
      const double mid = 0.5 * (lo + hi);
      const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
      const gbdt::ComplexMatrix flm = f(lm), frm = f(rm);
      const gbdt::ComplexMatrix left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
      const gbdt::ComplexMatrix right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
      const gbdt::ComplexMatrix refined = left + right;
      if (depth <= 0 || (refined - whole).norm() <= 15.0 * tol) {
        return refined + (refined - whole) / 15.0;
      }
      return run(lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1) +
             run(mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1);
    }
  } rec{f};

  const double mid = 0.5 * (a + b);
  const gbdt::ComplexMatrix fa = f(a), fm = f(mid), fb = f(b);
  const gbdt::ComplexMatrix whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec.run(a, b, fa, fm, fb, whole, tol, depth);
}

// --- Closed forms for the order-2 example family (A similar to a Jordan
// --- cell), integrated by hand from S' = Pi sigma3 Pi*.

inline double ex2_det_S(double x) { return 0.25 * (std::exp(4.0 * x) + 3.0); }

inline Eigen::Matrix2cd ex2_S(double x) {
  const double e2 = std::exp(2.0 * x);
  const double em2 = std::exp(-2.0 * x);
  Eigen::Matrix2cd S;
  S << e2, x * e2, x * e2, (x * x + 0.25) * e2 + 0.75 * em2;
  return S;
}

inline Eigen::Matrix2cd ex2_S_inv(double x) {
  const double e2 = std::exp(2.0 * x);
  const double em2 = std::exp(-2.0 * x);
  const double c = 4.0 / (std::exp(4.0 * x) + 3.0);
  Eigen::Matrix2cd M;
  M << 0.25 * ((4.0 * x * x + 1.0) * e2 + 3.0 * em2), -x * e2, -x * e2, e2;
  return c * M;
}

inline double ex2_u(double x) {
  return -4.0 * std::sqrt(3.0) * std::exp(2.0 * x) / (std::exp(4.0 * x) + 3.0);
}

inline Eigen::Vector2cd ex2_lambda1(double x) {
  const double r = std::exp(x) / std::sqrt(2.0);
  return {gbdt::Complex(0.0, 2.0 * r), gbdt::Complex(0.0, r * (2.0 * x + 1.0))};
}

inline Eigen::Vector2cd ex2_lambda2(double x) {
  const double r = std::exp(-x) / std::sqrt(2.0);
  return {gbdt::Complex(0.0, 0.0), gbdt::Complex(r * std::sqrt(3.0), 0.0)};
}

inline Eigen::Vector2cd ex2_psi(double x, double y, const Eigen::Vector2cd& h) {
  using gbdt::Complex;
  const Complex i(0.0, 1.0);
  const double e3x = std::exp(3.0 * x), ex = std::exp(x), emx = std::exp(-x);
  const Complex pref = 2.0 * std::sqrt(2.0) * std::exp(Complex(0.0, -y)) /
                       (std::exp(4.0 * x) + 3.0);
  Eigen::Matrix2cd M;
  M << 0.5 * i * ((2.0 * x - 1.0) * e3x - 3.0 * emx), -i * e3x,
      -std::sqrt(3.0) * x * ex, std::sqrt(3.0) * ex;
  Eigen::Matrix2cd Y;
  Y << 1.0, 0.0, -i * y, 1.0;
  return pref * (M * (Y * h));
}

// --- Closed forms for the scalar family: A = i*calA, Pi0 = [s1*i*m1, s2*m2].

inline double ex1_S(double calA, double m1, double m2, double x) {
  const double g = 2.0 * calA;
  return 1.0 + m1 * m1 * (std::exp(g * x) - 1.0) / g +
         m2 * m2 * (std::exp(-g * x) - 1.0) / g;
}

inline double ex1_u(double calA, double m1, double m2, int s1, int s2, double x) {
  return -2.0 * s1 * s2 * m1 * m2 / ex1_S(calA, m1, m2, x);
}

}  // namespace oracles
