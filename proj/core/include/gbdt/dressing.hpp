#pragma once

#include "gbdt/triple.hpp"
#include "gbdt/types.hpp"

namespace gbdt {

enum class EvalMethod {
  Auto,       // Sylvester when well posed, else VanLoan
  Sylvester,  // solve A S - S A* = i Pi Pi* for S
  VanLoan,    // closed-form block-exponential integrals
  Quadrature, // adaptive Gauss-Legendre integration
};

const char* to_string(EvalMethod m) noexcept;

/// Pi(x), S(x) and S(x)^{-1} at one point, with the residual of the
/// conserved identity A S - S A* = i Pi Pi* attached as a certificate.
struct DressedState {
  double x = 0.0;
  ComplexMatrix Pi;     // n x 2, columns Lambda1(x), Lambda2(x)
  ComplexMatrix S;      // n x n Hermitian
  ComplexMatrix S_inv;
  double condition = 1.0;
  double identity_residual = 0.0;  // ||A S - S A* - i Pi Pi*|| / (1 + ||S||)
  EvalMethod method = EvalMethod::Auto;  // resolved method actually used
};

/// The transformed potential data at one point: calX = Pi* S^{-1} Pi,
/// V_tilde = i(sigma3 calX sigma3 - calX) (zero diagonal, V21 = -conj(V12)),
/// and the scalar u_tilde = -2i Lambda1* S^{-1} Lambda2 = V_tilde(0,1).
struct DressedPotential {
  Eigen::Matrix2cd X;
  Eigen::Matrix2cd V_tilde;
  Complex u_tilde;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;
};

/// Columns e^{-ixA} Lambda1(0) and e^{ixA} Lambda2(0).
/// Throws Overflow when |x| * rho(A) would push e^{|x| rho} past double range.
ComplexMatrix eval_pi(const ParameterTriple& t, double x);

/// S(x) = S(0) + int_0^x Pi(r) sigma3 Pi(r)* dr, computed by the requested
/// method. Auto prefers the Sylvester route (pure linear algebra, no
/// integration error) and falls back to VanLoan when the spectra gate fails.
DressedState eval_s(const ParameterTriple& t, double x,
                    EvalMethod method = EvalMethod::Auto,
                    const QuadratureOptions& quad = {});

DressedPotential eval_potential(const ParameterTriple& t, double x,
                                EvalMethod method = EvalMethod::Auto);

/// psi~(x, y) = Pi(x)* S(x)^{-1} e^{-yA} h.
Eigen::Vector2cd eval_psi(const ParameterTriple& t, double x, double y,
                          const ComplexVector& h, EvalMethod method = EvalMethod::Auto);

struct ProfilePoint {
  double x = 0.0;
  DressedState state;
  DressedPotential potential;
  double min_eig_S = 0.0;
};

/// Batch evaluation over a monotone grid. The quadrature method integrates
/// incrementally between consecutive grid points. Point-level failures are
/// rethrown with the offending x in the message.
std::vector<ProfilePoint> sample_profile(const ParameterTriple& t,
                                         const std::vector<double>& grid,
                                         EvalMethod method = EvalMethod::Auto,
                                         const QuadratureOptions& quad = {});

/// Largest |x| * rho(A) product before eval_pi refuses to exponentiate.
inline constexpr double kGrowthGuard = 700.0;

}  // namespace gbdt
