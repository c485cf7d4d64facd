#pragma once

#include "gbdt/types.hpp"

namespace gbdt {

/// e^{tM} by scaling-and-squaring with Pade approximants (degree picked from
/// the 1-norm of tM). Correct for defective matrices; eigendecomposition is
/// never used.
ComplexMatrix mat_exp(const ComplexMatrix& M, double t = 1.0);

/// Unique X with F*X - X*G = C. Solved as the Kronecker-product linear system
/// (I (x) F - G^T (x) I) vec(X) = vec(C); fine at the matrix orders this
/// library targets (n <= ~64).
///
/// Throws SpectraOverlap when min_{i,j} |lambda_i(F) - lambda_j(G)| <=
/// 1e-8 * (||F|| + ||G||); callers fall back to an integral representation.
ComplexMatrix solve_sylvester(const ComplexMatrix& F, const ComplexMatrix& G,
                              const ComplexMatrix& C);

/// Closed-form evaluation of int_0^x e^{rF} C e^{rG} dr. The top-right block
/// of exp(x*[[F, C], [0, -G]]) equals the integral times e^{-xG}, so one
/// block exponential plus a right multiplication by e^{xG} does it; the sign
/// for x < 0 comes out automatically.
ComplexMatrix van_loan_integral(const ComplexMatrix& F, const ComplexMatrix& C,
                                const ComplexMatrix& G, double x);

/// Smallest eigenvalue of the Hermitian part of M. Throws NotHermitian when
/// ||M - M*|| > 1e-12 * ||M||.
double hermitian_min_eig(const ComplexMatrix& M);

struct InverseResult {
  ComplexMatrix inverse;
  double condition;  // sigma_max / sigma_min
};

/// M^{-1} with a 2-norm condition estimate. Throws NearSingular when the
/// estimate exceeds 1e12: the concrete gate behind "points of invertibility".
InverseResult inverse_with_condition(const ComplexMatrix& M);

/// Eigenvalues of a general complex square matrix (unordered).
ComplexVector eigenvalues(const ComplexMatrix& M);

double spectral_radius(const ComplexMatrix& M);

/// min_{i,j} |a_i - b_j| between two spectra.
double spectra_separation(const ComplexVector& a, const ComplexVector& b);

inline constexpr double kSylvesterSeparationTol = 1e-8;
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kHermitianTol = 1e-12;

}  // namespace gbdt
