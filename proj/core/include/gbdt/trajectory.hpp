#pragma once

#include <vector>

#include "gbdt/dressing.hpp"
#include "gbdt/seed.hpp"
#include "gbdt/triple.hpp"

namespace gbdt {

struct IntegrateOptions {
  double tolerance = 1e-10;  // used as both absolute and relative target
  /// Re-solve the conserved identity for S at checkpoints instead of trusting
  /// the integrated S. Off by default: drift is the correctness signal and
  /// silent correction would mask integrator bugs.
  bool project_identity = false;
  double checkpoint_spacing = 1.0;
  long max_steps = 2000000;
};

struct IntegratorStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
};

namespace detail {
struct DenseSegment {
  double x0 = 0.0;
  double h = 0.0;
  // Dense-output polynomial r1 + th*(r2 + (1-th)*(r3 + th*(r4 + (1-th)*r5)))
  ComplexVector r1, r2, r3, r4, r5;
};
}  // namespace detail

/// Joint solution of Pi' = A Pi Q1 + Pi Q0(x), S' = i Pi Q1 Pi* over an
/// interval containing 0, with dense output. Samples at x = 0 are the seed
/// values exactly. The residual of A S - S A* = i Pi Pi* is monitored at
/// every accepted step and its maximum recorded, never silently corrected.
class DressingTrajectory {
 public:
  const ParameterTriple& triple() const { return triple_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  ComplexMatrix pi_at(double x) const;  // n x 2
  ComplexMatrix s_at(double x) const;   // n x n

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<ComplexMatrix>& pi_samples() const { return pi_samples_; }
  const std::vector<ComplexMatrix>& s_samples() const { return s_samples_; }

  double max_identity_drift() const { return max_identity_drift_; }
  const IntegratorStats& stats() const { return stats_; }

 private:
  friend DressingTrajectory integrate_dressing(const ParameterTriple& t,
                                               const SeedPotential& seed, double lo,
                                               double hi, const IntegrateOptions& opts);
  friend DressedPotential transformed_potential(const DressingTrajectory& traj,
                                                const SeedPotential& seed, double x);
  friend Eigen::Vector2cd eval_psi_general(const DressingTrajectory& traj, double x,
                                           double y, const ComplexVector& h);

  explicit DressingTrajectory(ParameterTriple t) : triple_(std::move(t)) {}

  using Segment = detail::DenseSegment;

  ComplexVector state_at(double x) const;

  ParameterTriple triple_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<Segment> segments_;  // sorted by interval start, both directions
  std::vector<double> grid_;
  std::vector<ComplexMatrix> pi_samples_;
  std::vector<ComplexMatrix> s_samples_;
  double max_identity_drift_ = 0.0;
  IntegratorStats stats_;
};

/// Integrate the dressing ODEs from x = 0 outward over [lo, hi] (lo <= 0 <=
/// hi) with an adaptive Dormand-Prince 5(4) scheme; Pi and S share one state
/// vector and one step controller.
///
/// Throws StepSizeUnderflow, or IdentityDriftExceeded when the conserved
/// identity drifts past 1e-6 (integrator tolerance too loose, or a seed
/// pathology).
DressingTrajectory integrate_dressing(const ParameterTriple& t, const SeedPotential& seed,
                                      double lo, double hi,
                                      const IntegrateOptions& opts = {});

/// V~(x) = V(x) + i(sigma3 calX sigma3 - calX) with calX = Pi* S^{-1} Pi
/// interpolated from the trajectory's dense output.
DressedPotential transformed_potential(const DressingTrajectory& traj,
                                       const SeedPotential& seed, double x);

/// psi~(x, y) = Pi(x)* S(x)^{-1} e^{-yA} h along the trajectory.
Eigen::Vector2cd eval_psi_general(const DressingTrajectory& traj, double x, double y,
                                  const ComplexVector& h);

inline constexpr double kIdentityDriftLimit = 1e-6;

}  // namespace gbdt
