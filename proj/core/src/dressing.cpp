#include "gbdt/dressing.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gbdt/linalg.hpp"

namespace gbdt {

const char* to_string(EvalMethod m) noexcept {
  switch (m) {
    case EvalMethod::Auto: return "auto";
    case EvalMethod::Sylvester: return "sylvester";
    case EvalMethod::VanLoan: return "vanloan";
    case EvalMethod::Quadrature: return "quadrature";
  }
  return "unknown";
}

namespace {

void check_growth(const ParameterTriple& t, double x, const char* what) {
  if (std::abs(x) * t.spectral_radius_A() > kGrowthGuard) {
    throw Error(ErrorCode::Overflow,
                std::string(what) + ": |x| * rho(A) = " +
                    std::to_string(std::abs(x) * t.spectral_radius_A()) +
                    " exceeds growth guard");
  }
}

// Pi(r) sigma3 Pi(r)* = Lambda1 Lambda1* - Lambda2 Lambda2*
ComplexMatrix pi_sigma3_pi_adj(const ComplexMatrix& Pi) {
  return Pi.col(0) * Pi.col(0).adjoint() - Pi.col(1) * Pi.col(1).adjoint();
}

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.0000000000000000, 0.2011940939974345, 0.3941513470775634, 0.5709721726085388,
    0.7244177313601701, 0.8482065834104272, 0.9372733924007060, 0.9879925180204854};
constexpr std::array<double, 8> kGlWeights = {
    0.2025782419255613, 0.1984314853271116, 0.1861610000155622, 0.1662692058169939,
    0.1395706779261543, 0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

ComplexMatrix gl15(const ParameterTriple& t, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Eigen::Index n = t.order();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  acc += kGlWeights[0] * pi_sigma3_pi_adj(eval_pi(t, mid));
  for (std::size_t k = 1; k < kGlNodes.size(); ++k) {
    const double d = half * kGlNodes[k];
    acc += kGlWeights[k] *
           (pi_sigma3_pi_adj(eval_pi(t, mid - d)) + pi_sigma3_pi_adj(eval_pi(t, mid + d)));
  }
  return half * acc;
}

ComplexMatrix adaptive_panel(const ParameterTriple& t, double a, double b,
                             const ComplexMatrix& whole, const QuadratureOptions& opt,
                             double total_len, int depth) {
  if (depth > opt.max_depth) {
    throw Error(ErrorCode::QuadratureNonConvergence,
                "bisection depth " + std::to_string(depth) + " exceeded on [" +
                    std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  const double mid = 0.5 * (a + b);
  const ComplexMatrix left = gl15(t, a, mid);
  const ComplexMatrix right = gl15(t, mid, b);
  const ComplexMatrix refined = left + right;
  const double err = fro_norm(whole - refined);
  const double tol = std::max(opt.abs_tol * std::abs(b - a) / total_len,
                              opt.rel_tol * fro_norm(refined));
  if (err <= tol) return refined;
  return adaptive_panel(t, a, mid, left, opt, total_len, depth + 1) +
         adaptive_panel(t, mid, b, right, opt, total_len, depth + 1);
}

// Signed integral of Pi(r) sigma3 Pi(r)* over [from, to].
ComplexMatrix integrate_kernel(const ParameterTriple& t, double from, double to,
                               const QuadratureOptions& opt) {
  if (from == to) return ComplexMatrix::Zero(t.order(), t.order());
  const double sign = (to >= from) ? 1.0 : -1.0;
  const double a = std::min(from, to);
  const double b = std::max(from, to);
  return sign * adaptive_panel(t, a, b, gl15(t, a, b), opt, b - a, 0);
}

EvalMethod resolve_method(const ParameterTriple& t, EvalMethod method) {
  if (method != EvalMethod::Auto) return method;
  return t.sylvester_well_posed() ? EvalMethod::Sylvester : EvalMethod::VanLoan;
}

DressedState finish_state(const ParameterTriple& t, double x, ComplexMatrix Pi,
                          ComplexMatrix S, EvalMethod method) {
  DressedState st;
  st.x = x;
  st.method = method;
  st.Pi = std::move(Pi);
  st.S = std::move(S);
  st.identity_residual =
      fro_norm(t.A() * st.S - st.S * t.A().adjoint() - kI * (st.Pi * st.Pi.adjoint())) /
      (1.0 + fro_norm(st.S));
  auto inv = inverse_with_condition(st.S);
  st.S_inv = std::move(inv.inverse);
  st.condition = inv.condition;
  return st;
}

}  // namespace

ComplexMatrix eval_pi(const ParameterTriple& t, double x) {
  check_growth(t, x, "eval_pi");
  const ComplexMatrix iA = kI * t.A();
  ComplexMatrix Pi(t.order(), 2);
  Pi.col(0) = mat_exp(-iA, x) * t.lambda1_0();
  Pi.col(1) = mat_exp(iA, x) * t.lambda2_0();
  return Pi;
}

DressedState eval_s(const ParameterTriple& t, double x, EvalMethod method,
                    const QuadratureOptions& quad) {
  const EvalMethod resolved = resolve_method(t, method);
  ComplexMatrix Pi = eval_pi(t, x);
  if (x == 0.0) return finish_state(t, 0.0, std::move(Pi), t.S0(), resolved);

  ComplexMatrix S;
  switch (resolved) {
    case EvalMethod::Sylvester:
      S = solve_sylvester(t.A(), t.A().adjoint(), kI * (Pi * Pi.adjoint()));
      break;
    case EvalMethod::VanLoan: {
      // Lambda1(r) Lambda1(r)* = e^{-irA} L1 e^{+irA*} and the mirrored
      // expression for Lambda2, so the integrals run with F = -/+ iA and
      // G = +/- i A* (note: (iA)* would flip the sign of i).
      const ComplexMatrix iA = kI * t.A();
      const ComplexMatrix iA_adj = kI * t.A().adjoint();
      const ComplexMatrix L1 = t.lambda1_0() * t.lambda1_0().adjoint();
      const ComplexMatrix L2 = t.lambda2_0() * t.lambda2_0().adjoint();
      S = t.S0() + van_loan_integral(-iA, L1, iA_adj, x) -
          van_loan_integral(iA, L2, -iA_adj, x);
      break;
    }
    case EvalMethod::Quadrature:
      S = t.S0() + integrate_kernel(t, 0.0, x, quad);
      break;
    case EvalMethod::Auto:
      throw Error(ErrorCode::InternalInconsistency, "unresolved method");
  }
  return finish_state(t, x, std::move(Pi), std::move(S), resolved);
}

DressedPotential eval_potential(const ParameterTriple& t, double x, EvalMethod method) {
  const DressedState st = eval_s(t, x, method);
  DressedPotential pot;
  pot.X = st.Pi.adjoint() * st.S_inv * st.Pi;
  const Eigen::Matrix2cd s3 = sigma3();
  pot.V_tilde = kI * (s3 * pot.X * s3 - pot.X);
  pot.u_tilde = -2.0 * kI *
                (st.Pi.col(0).adjoint() * st.S_inv * st.Pi.col(1))(0, 0);
  // u~ must coincide with the (0,1) entry of V~; they are computed along
  // different routes, so disagreement means a real bug.
  if (std::abs(pot.V_tilde(0, 1) - pot.u_tilde) > 1e-10 * (1.0 + std::abs(pot.u_tilde))) {
    throw Error(ErrorCode::InternalInconsistency,
                "u~ and V~(0,1) disagree at x = " + std::to_string(x));
  }
  return pot;
}

Eigen::Vector2cd eval_psi(const ParameterTriple& t, double x, double y,
                          const ComplexVector& h, EvalMethod method) {
  if (h.size() != t.order()) {
    throw Error(ErrorCode::ShapeMismatch, "h must have length n = " +
                                              std::to_string(t.order()));
  }
  check_growth(t, y, "eval_psi (y direction)");
  const DressedState st = eval_s(t, x, method);
  const ComplexVector propagated = mat_exp(t.A(), -y) * h;
  return st.Pi.adjoint() * (st.S_inv * propagated);
}

std::vector<ProfilePoint> sample_profile(const ParameterTriple& t,
                                         const std::vector<double>& grid,
                                         EvalMethod method, const QuadratureOptions& quad) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) {
      throw Error(ErrorCode::ConstraintViolated, "grid must be monotone nondecreasing");
    }
  }
  std::vector<ProfilePoint> out;
  out.reserve(grid.size());

  const EvalMethod resolved = resolve_method(t, method);
  const bool incremental = resolved == EvalMethod::Quadrature && grid.size() > 1;
  ComplexMatrix S_acc;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    try {
      ProfilePoint p;
      p.x = x;
      if (incremental) {
        if (i == 0) {
          S_acc = t.S0() + integrate_kernel(t, 0.0, x, quad);
        } else if (x != grid[i - 1]) {
          S_acc += integrate_kernel(t, grid[i - 1], x, quad);
        }
        p.state = finish_state(t, x, eval_pi(t, x), S_acc, EvalMethod::Quadrature);
      } else {
        p.state = eval_s(t, x, resolved, quad);
      }
      p.min_eig_S = hermitian_min_eig(0.5 * (p.state.S + p.state.S.adjoint()));
      p.potential.X = p.state.Pi.adjoint() * p.state.S_inv * p.state.Pi;
      const Eigen::Matrix2cd s3 = sigma3();
      p.potential.V_tilde = kI * (s3 * p.potential.X * s3 - p.potential.X);
      p.potential.u_tilde =
          -2.0 * kI * (p.state.Pi.col(0).adjoint() * p.state.S_inv * p.state.Pi.col(1))(0, 0);
      out.push_back(std::move(p));
    } catch (const Error& e) {
      throw Error(e.code(), "at grid point x = " + std::to_string(x) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace gbdt
