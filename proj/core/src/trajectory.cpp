#include "gbdt/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gbdt/linalg.hpp"

namespace gbdt {

// --- SeedPotential -----------------------------------------------------------

SeedPotential SeedPotential::zero() { return SeedPotential(); }

SeedPotential SeedPotential::constant(Complex c) {
  SeedPotential s;
  s.kind_ = Kind::Constant;
  s.constant_ = c;
  return s;
}

SeedPotential SeedPotential::gaussian(double amp, double center, double width) {
  if (!(width > 0.0) || !std::isfinite(amp) || !std::isfinite(center)) {
    throw Error(ErrorCode::ConstraintViolated, "gaussian seed needs finite amp/center and width > 0");
  }
  SeedPotential s;
  s.kind_ = Kind::Gaussian;
  s.amp_ = amp;
  s.center_ = center;
  s.width_ = width;
  return s;
}

SeedPotential SeedPotential::tabulated(std::vector<double> knots, std::vector<Complex> values) {
  if (knots.size() != values.size() || knots.size() < 2) {
    throw Error(ErrorCode::ConstraintViolated, "tabulated seed needs >= 2 knot/value pairs");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw Error(ErrorCode::ConstraintViolated, "tabulated knots must be strictly increasing");
    }
  }
  SeedPotential s;
  s.kind_ = Kind::Tabulated;
  s.knots_ = std::move(knots);
  s.values_ = std::move(values);
  return s;
}

Complex SeedPotential::u(double x) const {
  switch (kind_) {
    case Kind::Zero: return {0.0, 0.0};
    case Kind::Constant: return constant_;
    case Kind::Gaussian: {
      const double z = (x - center_) / width_;
      return {amp_ * std::exp(-0.5 * z * z), 0.0};
    }
    case Kind::Tabulated: {
      if (x <= knots_.front()) return values_.front();
      if (x >= knots_.back()) return values_.back();
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
      const double w = (x - knots_[k - 1]) / (knots_[k] - knots_[k - 1]);
      return values_[k - 1] * (1.0 - w) + values_[k] * w;
    }
  }
  return {0.0, 0.0};
}

Eigen::Matrix2cd SeedPotential::V(double x) const {
  const Complex ux = u(x);
  Eigen::Matrix2cd v;
  v << 0.0, ux, -std::conj(ux), 0.0;
  return v;
}

bool SeedPotential::is_real() const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Gaussian: return true;
    case Kind::Constant: return constant_.imag() == 0.0;
    case Kind::Tabulated:
      return std::all_of(values_.begin(), values_.end(),
                         [](const Complex& v) { return v.imag() == 0.0; });
  }
  return true;
}

std::vector<double> SeedPotential::breakpoints(double lo, double hi) const {
  std::vector<double> pts;
  if (kind_ != Kind::Tabulated) return pts;
  for (double k : knots_) {
    if (k > lo && k < hi) pts.push_back(k);
  }
  return pts;
}

// --- Dormand-Prince 5(4) -----------------------------------------------------

namespace {

constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;

// Embedded error weights b5 - b4.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

// Dense-output weights.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

struct OdeSystem {
  const ParameterTriple* triple;
  const SeedPotential* seed;
  Eigen::Index n;

  Eigen::Index state_size() const { return 2 * n + n * n; }

  ComplexMatrix unpack_pi(const ComplexVector& y) const {
    ComplexMatrix Pi(n, 2);
    Pi.col(0) = y.segment(0, n);
    Pi.col(1) = y.segment(n, n);
    return Pi;
  }

  ComplexMatrix unpack_s(const ComplexVector& y) const {
    ComplexMatrix S(n, n);
    for (Eigen::Index j = 0; j < n; ++j) S.col(j) = y.segment(2 * n + j * n, n);
    return S;
  }

  ComplexVector pack(const ComplexMatrix& Pi, const ComplexMatrix& S) const {
    ComplexVector y(state_size());
    y.segment(0, n) = Pi.col(0);
    y.segment(n, n) = Pi.col(1);
    for (Eigen::Index j = 0; j < n; ++j) y.segment(2 * n + j * n, n) = S.col(j);
    return y;
  }

  // Pi' = A Pi Q1 + Pi Q0(x) with Q1 = -i sigma3, Q0 = -i sigma3 V;
  // S'  = i Pi Q1 Pi* = Pi sigma3 Pi*.
  ComplexVector rhs(double x, const ComplexVector& y) const {
    const ComplexMatrix Pi = unpack_pi(y);
    const Complex ux = seed->u(x);
    ComplexMatrix dPi(n, 2);
    dPi.col(0) = -kI * (triple->A() * Pi.col(0)) - kI * std::conj(ux) * Pi.col(1);
    dPi.col(1) = kI * (triple->A() * Pi.col(1)) - kI * ux * Pi.col(0);
    const ComplexMatrix dS = Pi.col(0) * Pi.col(0).adjoint() - Pi.col(1) * Pi.col(1).adjoint();
    return pack(dPi, dS);
  }

  double identity_residual(const ComplexVector& y) const {
    const ComplexMatrix Pi = unpack_pi(y);
    const ComplexMatrix S = unpack_s(y);
    return fro_norm(triple->A() * S - S * triple->A().adjoint() - kI * (Pi * Pi.adjoint())) /
           (1.0 + fro_norm(S));
  }
};

double error_norm(const ComplexVector& err, const ComplexVector& y0, const ComplexVector& y1,
                  double tol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = tol + tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double q = std::abs(err(i)) / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

struct DirectionResult {
  std::vector<detail::DenseSegment> segments;
  std::vector<std::pair<double, ComplexVector>> samples;  // excludes x = 0
  double max_drift = 0.0;
  IntegratorStats stats;
};

// Integrate from 0 towards `target` (either side), restarting at seed
// breakpoints so tabulated slope jumps never sit inside a step.
DirectionResult integrate_direction(const OdeSystem& sys, const ComplexVector& y_start,
                                    double target, const SeedPotential& seed,
                                    const IntegrateOptions& opts) {
  DirectionResult out;
  if (target == 0.0) return out;

  const double dir = (target > 0.0) ? 1.0 : -1.0;
  std::vector<double> stops = seed.breakpoints(std::min(0.0, target), std::max(0.0, target));
  if (dir < 0) std::reverse(stops.begin(), stops.end());
  stops.push_back(target);

  const double span = std::abs(target);
  const double tol = opts.tolerance;
  ComplexVector y = y_start;
  double x = 0.0;
  double next_checkpoint = opts.checkpoint_spacing;

  for (double stop : stops) {
    double h = dir * std::min(std::abs(stop - x), std::max(1e-4, 1e-2 * span));
    ComplexVector k1 = sys.rhs(x, y);
    bool k1_fresh = true;

    while (dir * (stop - x) > 0.0) {
      if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), 1.0)) {
        throw Error(ErrorCode::StepSizeUnderflow,
                    "step size " + std::to_string(h) + " underflow at x = " + std::to_string(x));
      }
      if (out.stats.steps_accepted + out.stats.steps_rejected > opts.max_steps) {
        throw Error(ErrorCode::StepSizeUnderflow,
                    "step budget exhausted at x = " + std::to_string(x));
      }
      bool hits_stop = false;
      if (dir * (x + h - stop) >= 0.0) {
        h = stop - x;
        hits_stop = true;
      }
      if (!k1_fresh) k1 = sys.rhs(x, y);

      const ComplexVector k2 = sys.rhs(x + kC2 * h, y + h * (kA21 * k1));
      const ComplexVector k3 = sys.rhs(x + kC3 * h, y + h * (kA31 * k1 + kA32 * k2));
      const ComplexVector k4 = sys.rhs(x + kC4 * h, y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      const ComplexVector k5 =
          sys.rhs(x + kC5 * h, y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
      const ComplexVector k6 =
          sys.rhs(x + h, y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
      const ComplexVector y1 =
          y + h * (kA71 * k1 + kA73 * k3 + kA74 * k4 + kA75 * k5 + kA76 * k6);
      const ComplexVector k7 = sys.rhs(x + h, y1);

      const ComplexVector err_vec =
          h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
      const double err = error_norm(err_vec, y, y1, tol);

      if (err <= 1.0) {
        detail::DenseSegment seg;
        seg.x0 = x;
        seg.h = h;
        seg.r1 = y;
        seg.r2 = y1 - y;
        seg.r3 = h * k1 - seg.r2;
        seg.r4 = seg.r2 - h * k7 - seg.r3;
        seg.r5 = h * (kD1 * k1 + kD3 * k3 + kD4 * k4 + kD5 * k5 + kD6 * k6 + kD7 * k7);
        out.segments.push_back(std::move(seg));

        x = hits_stop ? stop : x + h;
        y = y1;
        k1 = k7;  // FSAL
        k1_fresh = true;
        ++out.stats.steps_accepted;

        const double drift = sys.identity_residual(y);
        out.max_drift = std::max(out.max_drift, drift);
        if (drift > kIdentityDriftLimit) {
          throw Error(ErrorCode::IdentityDriftExceeded,
                      "identity residual " + std::to_string(drift) + " at x = " +
                          std::to_string(x));
        }

        if (opts.project_identity && sys.triple->sylvester_well_posed() &&
            std::abs(x) >= next_checkpoint) {
          const ComplexMatrix Pi = sys.unpack_pi(y);
          const ComplexMatrix S = solve_sylvester(sys.triple->A(), sys.triple->A().adjoint(),
                                                  kI * (Pi * Pi.adjoint()));
          y = sys.pack(Pi, S);
          k1_fresh = false;
          next_checkpoint += opts.checkpoint_spacing;
        }

        out.samples.emplace_back(x, y);
      } else {
        ++out.stats.steps_rejected;
        k1_fresh = true;  // k1 still valid at unchanged x
      }

      const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
      h *= factor;
      if (std::abs(h) > span) h = dir * span;
    }
  }
  return out;
}

}  // namespace

// --- DressingTrajectory ------------------------------------------------------

DressingTrajectory integrate_dressing(const ParameterTriple& t, const SeedPotential& seed,
                                      double lo, double hi, const IntegrateOptions& opts) {
  if (!(lo <= 0.0 && 0.0 <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::ConstraintViolated, "interval must contain 0");
  }
  if (!(opts.tolerance > 0.0)) {
    throw Error(ErrorCode::ConstraintViolated, "tolerance must be positive");
  }

  OdeSystem sys{&t, &seed, t.order()};
  const ComplexVector y0 = sys.pack(t.Pi0(), t.S0());

  DressingTrajectory traj(t);
  traj.lo_ = lo;
  traj.hi_ = hi;

  DirectionResult fwd = integrate_direction(sys, y0, hi, seed, opts);
  DirectionResult bwd = integrate_direction(sys, y0, lo, seed, opts);

  traj.max_identity_drift_ = std::max(fwd.max_drift, bwd.max_drift);
  traj.stats_.steps_accepted = fwd.stats.steps_accepted + bwd.stats.steps_accepted;
  traj.stats_.steps_rejected = fwd.stats.steps_rejected + bwd.stats.steps_rejected;

  traj.segments_.reserve(fwd.segments.size() + bwd.segments.size());
  for (auto it = bwd.segments.rbegin(); it != bwd.segments.rend(); ++it) {
    traj.segments_.push_back(std::move(*it));
  }
  for (auto& seg : fwd.segments) traj.segments_.push_back(std::move(seg));

  // Samples in increasing x with the seed values at 0 stored exactly.
  const auto push_sample = [&](double x, const ComplexVector& y) {
    traj.grid_.push_back(x);
    traj.pi_samples_.push_back(sys.unpack_pi(y));
    traj.s_samples_.push_back(sys.unpack_s(y));
  };
  for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it) {
    push_sample(it->first, it->second);
  }
  push_sample(0.0, y0);
  for (const auto& s : fwd.samples) push_sample(s.first, s.second);

  return traj;
}

ComplexVector DressingTrajectory::state_at(double x) const {
  if (x < lo_ || x > hi_) {
    throw Error(ErrorCode::OutOfCoverage, "x = " + std::to_string(x) + " outside [" +
                                              std::to_string(lo_) + ", " +
                                              std::to_string(hi_) + "]");
  }
  if (x == 0.0 || segments_.empty()) {
    OdeSystem sys{&triple_, nullptr, triple_.order()};
    return sys.pack(triple_.Pi0(), triple_.S0());
  }
  // Binary search for the segment whose interval [x0, x0+h] (h of either
  // sign) covers x.
  const auto covers = [](const Segment& s, double xq) {
    const double a = std::min(s.x0, s.x0 + s.h);
    const double b = std::max(s.x0, s.x0 + s.h);
    return a <= xq && xq <= b;
  };
  std::size_t lo = 0, hi_idx = segments_.size();
  while (lo + 1 < hi_idx) {
    const std::size_t mid = (lo + hi_idx) / 2;
    const double seg_start = std::min(segments_[mid].x0, segments_[mid].x0 + segments_[mid].h);
    if (seg_start <= x) {
      lo = mid;
    } else {
      hi_idx = mid;
    }
  }
  std::size_t idx = lo;
  if (!covers(segments_[idx], x) && idx + 1 < segments_.size() && covers(segments_[idx + 1], x)) {
    ++idx;
  }
  if (!covers(segments_[idx], x)) {
    throw Error(ErrorCode::OutOfCoverage, "no dense-output segment covers x = " +
                                              std::to_string(x));
  }
  const Segment& s = segments_[idx];
  const double th = (x - s.x0) / s.h;
  return s.r1 + th * (s.r2 + (1.0 - th) * (s.r3 + th * (s.r4 + (1.0 - th) * s.r5)));
}

ComplexMatrix DressingTrajectory::pi_at(double x) const {
  OdeSystem sys{&triple_, nullptr, triple_.order()};
  return sys.unpack_pi(state_at(x));
}

ComplexMatrix DressingTrajectory::s_at(double x) const {
  OdeSystem sys{&triple_, nullptr, triple_.order()};
  return sys.unpack_s(state_at(x));
}

DressedPotential transformed_potential(const DressingTrajectory& traj,
                                       const SeedPotential& seed, double x) {
  const ComplexVector y = traj.state_at(x);
  OdeSystem sys{&traj.triple(), &seed, traj.triple().order()};
  const ComplexMatrix Pi = sys.unpack_pi(y);
  const ComplexMatrix S = sys.unpack_s(y);
  const auto inv = inverse_with_condition(S);

  DressedPotential pot;
  pot.X = Pi.adjoint() * inv.inverse * Pi;
  const Eigen::Matrix2cd s3 = sigma3();
  pot.V_tilde = seed.V(x) + kI * (s3 * pot.X * s3 - pot.X);
  pot.u_tilde = pot.V_tilde(0, 1);

  const double diag = std::abs(pot.V_tilde(0, 0)) + std::abs(pot.V_tilde(1, 1));
  const double skew = std::abs(pot.V_tilde(1, 0) + std::conj(pot.V_tilde(0, 1)));
  if (diag + skew > 1e-8 * (1.0 + fro_norm(pot.V_tilde))) {
    throw Error(ErrorCode::InternalInconsistency,
                "transformed potential lost its off-diagonal structure at x = " +
                    std::to_string(x));
  }
  return pot;
}

Eigen::Vector2cd eval_psi_general(const DressingTrajectory& traj, double x, double y,
                                  const ComplexVector& h) {
  if (h.size() != traj.triple().order()) {
    throw Error(ErrorCode::ShapeMismatch, "h must have length n");
  }
  if (std::abs(y) * traj.triple().spectral_radius_A() > kGrowthGuard) {
    throw Error(ErrorCode::Overflow, "|y| * rho(A) exceeds growth guard");
  }
  const ComplexVector state = traj.state_at(x);
  OdeSystem sys{&traj.triple(), nullptr, traj.triple().order()};
  const ComplexMatrix Pi = sys.unpack_pi(state);
  const ComplexMatrix S = sys.unpack_s(state);
  const auto inv = inverse_with_condition(S);
  const ComplexVector propagated = mat_exp(traj.triple().A(), -y) * h;
  return Pi.adjoint() * (inv.inverse * propagated);
}

}  // namespace gbdt
