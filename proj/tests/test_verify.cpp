#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gbdt/serialize.hpp"
#include "gbdt/verify.hpp"
#include "oracles.hpp"

using namespace gbdt;

namespace {

// Samplers built from the hand-integrated closed forms, so the PDE check
// runs end to end without touching the library's evaluation path.
PsiSampler ex2_closed_psi(const Eigen::Vector2cd& h) {
  return [h](double x, double y) { return oracles::ex2_psi(x, y, h); };
}

PotentialSampler ex2_closed_potential() {
  return [](double x) -> Eigen::Matrix2cd {
    Eigen::Matrix2cd V;
    const double u = oracles::ex2_u(x);
    V << 0.0, u, -u, 0.0;
    return V;
  };
}

}  // namespace

TEST_CASE("pde_residual on the closed-form pair is O(step^2)-small") {
  const double r = pde_residual(ex2_closed_psi({1.0, 0.0}), ex2_closed_potential(), 0.5,
                                0.3, 1e-3);
  CHECK(r <= 1e-5);
}

TEST_CASE("pde_residual of the zero function vanishes") {
  PsiSampler zero = [](double, double) { return Eigen::Vector2cd::Zero().eval(); };
  CHECK(pde_residual(zero, ex2_closed_potential(), 0.1, 0.2, 1e-3) == 0.0);
}

TEST_CASE("pde_residual on a separated free solution decays with the step") {
  // psi = e^{i y} (e^x, e^{-x}) solves the system with V = 0.
  PsiSampler psi = [](double x, double y) -> Eigen::Vector2cd {
    const Complex phase = std::exp(Complex(0.0, y));
    return {phase * std::exp(x), phase * std::exp(-x)};
  };
  PotentialSampler freeV = [](double) { return Eigen::Matrix2cd::Zero().eval(); };
  const double r1 = pde_residual(psi, freeV, 0.4, -0.2, 1e-2);
  const double r2 = pde_residual(psi, freeV, 0.4, -0.2, 5e-3);
  const double r3 = pde_residual(psi, freeV, 0.4, -0.2, 2.5e-3);
  CHECK(r2 < r1);
  CHECK(r3 < r2);
  CHECK(r3 / r1 < 0.125);  // better than first order over a factor-4 step cut
}

TEST_CASE("pde_residual propagates coverage failures as StencilOutOfDomain") {
  PsiSampler psi = [](double x, double y) -> Eigen::Vector2cd {
    if (std::abs(x) > 1.0) throw Error(ErrorCode::OutOfCoverage, "outside");
    return {Complex(x), Complex(y)};
  };
  PotentialSampler V = [](double) { return Eigen::Matrix2cd::Zero().eval(); };
  CHECK_THROWS_AS(pde_residual(psi, V, 1.0, 0.0, 1e-2), Error);
  try {
    pde_residual(psi, V, 1.0, 0.0, 1e-2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StencilOutOfDomain);
  }
}

TEST_CASE("convergence_order of the closed-form pair is about 2") {
  const double order = convergence_order(ex2_closed_psi({1.0, 0.0}), ex2_closed_potential(),
                                         0.5, 0.3, {1e-2, 5e-3, 2.5e-3});
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("convergence_order flags the noise floor on an exact-to-stencil solution") {
  // psi = (x + i y, x - i y) solves the free system and central differences
  // are exact on linear functions.
  PsiSampler psi = [](double x, double y) -> Eigen::Vector2cd {
    return {Complex(x, y), Complex(x, -y)};
  };
  PotentialSampler V = [](double) { return Eigen::Matrix2cd::Zero().eval(); };
  CHECK_THROWS_AS(convergence_order(psi, V, 0.3, 0.1, {1e-2, 5e-3, 2.5e-3}), Error);
  try {
    convergence_order(psi, V, 0.3, 0.1, {1e-2, 5e-3, 2.5e-3});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResidualAtNoiseFloor);
  }
}

TEST_CASE("convergence_order collapses on a corrupted solution") {
  PsiSampler psi = [](double x, double y) {
    Eigen::Vector2cd v = oracles::ex2_psi(x, y, {1.0, 0.0});
    v(0) += 1e-3 * std::sin(987.0 * x + 13.0 * y);  // deterministic noise
    return v;
  };
  const double order =
      convergence_order(psi, ex2_closed_potential(), 0.5, 0.3, {1e-2, 5e-3, 2.5e-3});
  CHECK(order < 1.0);
}

TEST_CASE("convergence_order validates its step sequence") {
  CHECK_THROWS_AS(convergence_order(ex2_closed_psi({1.0, 0.0}), ex2_closed_potential(), 0.5,
                                    0.3, {1e-2, 5e-3}),
                  Error);
  CHECK_THROWS_AS(convergence_order(ex2_closed_psi({1.0, 0.0}), ex2_closed_potential(), 0.5,
                                    0.3, {1e-2, 9e-3, 8e-3}),
                  Error);
}

TEST_CASE("positivity_scan on the Jordan-type family") {
  const auto scan = positivity_scan(make_example2(), GridSpec{-3.0, 3.0, 0.05}.points());
  CHECK(scan.min_eig > 0.0);
}

TEST_CASE("positivity_scan at a single point") {
  const auto scan = positivity_scan(make_example2(), {0.0});
  CHECK(scan.min_eig == doctest::Approx(1.0));
  CHECK(scan.argmin_x == 0.0);
}

TEST_CASE("positivity_scan of the sech family bottoms out at the origin") {
  const auto scan =
      positivity_scan(make_example1(1.0, 1.0, 1.0), GridSpec{-5.0, 5.0, 0.1}.points());
  CHECK(scan.min_eig == doctest::Approx(1.0));  // S(x) = cosh(2x) >= 1
  CHECK(scan.argmin_x == doctest::Approx(0.0));
}

TEST_CASE("negative control: a single-point potential bump lifts the residual") {
  PotentialSampler honest = ex2_closed_potential();
  const double x0 = 0.5;
  PotentialSampler corrupted = [honest, x0](double x) -> Eigen::Matrix2cd {
    Eigen::Matrix2cd V = honest(x);
    if (x == x0) {
      V(0, 1) += 0.01;
      V(1, 0) -= 0.01;
    }
    return V;
  };
  const PsiSampler psi = ex2_closed_psi({1.0, 0.0});
  for (double step : {1e-2, 1e-3, 1e-4}) {
    CHECK(pde_residual(psi, corrupted, x0, 0.3, step) > 1e-3);
  }
  CHECK(pde_residual(psi, honest, x0, 0.3, 1e-3) <= 1e-5);
}

TEST_CASE("full_report passes on the Jordan-type family with zero seed") {
  const VerificationReport rep = full_report(make_example2(), SeedPotential::zero(),
                                             GridSpec{-2.0, 2.0, 0.1}, GridSpec{-1.0, 1.0, 0.25});
  CHECK(rep.all_pass());
  CHECK(rep.identity_residual_max <= 1e-10);
  CHECK(rep.min_eig_S > 0.0);
  CHECK(rep.realness_applicable);
  CHECK(rep.realness_violation <= 1e-10);
  CHECK(rep.cross_agreement_applicable);
  CHECK(rep.cross_agreement_max <= 1e-8);
  CHECK(rep.convergence_order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("full_report on the degenerate seed trivially passes") {
  ComplexMatrix A = ComplexMatrix::Zero(1, 1);
  ComplexMatrix S0(1, 1);
  S0(0, 0) = 1.0;
  const ParameterTriple t = validate_triple(A, S0, ComplexMatrix::Zero(1, 2));
  const VerificationReport rep = full_report(t, SeedPotential::zero(),
                                             GridSpec{-1.0, 1.0, 0.1}, GridSpec{-1.0, 1.0, 0.25});
  CHECK(rep.all_pass());
  CHECK(rep.pde_residual_max <= 1e-12);
}

TEST_CASE("full_report on a Gaussian seed keeps the drift small") {
  const ParameterTriple t = random_example3(3, 7);
  const VerificationReport rep =
      full_report(t, SeedPotential::gaussian(1.0, 0.0, 1.0), GridSpec{-2.0, 2.0, 0.1},
                  GridSpec{-1.0, 1.0, 0.25});
  CHECK(rep.ode_path);
  CHECK(rep.identity_residual_max <= 1e-8);
  CHECK(rep.all_pass());
}

TEST_CASE("full_report negative control fails") {
  ReportOptions opts;
  opts.inject_potential_offset = 0.01;
  const VerificationReport rep = full_report(make_example2(), SeedPotential::zero(),
                                             GridSpec{-2.0, 2.0, 0.1},
                                             GridSpec{-1.0, 1.0, 0.25}, opts);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("full_report is deterministic") {
  const auto run = [] {
    return report_to_json(full_report(make_example2(), SeedPotential::zero(),
                                      GridSpec{-1.0, 1.0, 0.2}, GridSpec{-1.0, 1.0, 0.5}));
  };
  CHECK(run() == run());
}

TEST_CASE("report JSON mirrors the report") {
  const VerificationReport rep = full_report(make_example2(), SeedPotential::zero(),
                                             GridSpec{-1.0, 1.0, 0.2}, GridSpec{-1.0, 1.0, 0.5});
  const nlohmann::json j = report_to_json(rep);
  CHECK(j["all_pass"] == rep.all_pass());
  CHECK(j["criteria"].size() == rep.criteria.size());
  CHECK(j["thresholds"]["pde_residual"] == rep.thresholds.pde_residual);
}
