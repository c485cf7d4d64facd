#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "gbdt/linalg.hpp"
#include "gbdt/serialize.hpp"

namespace gbdt::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

GridSpec x_grid_or_default(const RunConfig& cfg) {
  return cfg.x_grid.value_or(GridSpec{-3.0, 3.0, 0.01});
}

GridSpec y_grid_or_default(const RunConfig& cfg) {
  return cfg.y_grid.value_or(GridSpec{-1.0, 1.0, 0.25});
}

bool physical_requested(const RunConfig& cfg, std::ostream& err) {
  if (cfg.hbar_vf.has_value() != cfg.energy.has_value()) {
    throw Error(ErrorCode::ParseError,
                "physical constants need both the hbar*vF product and E");
  }
  (void)err;
  return cfg.hbar_vf.has_value();
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<ParameterTriple> maybe;
  try {
    maybe = resolve_triple(cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IdentityViolated || e.code() == ErrorCode::NotHermitian) {
      err << "validation failed: " << e.what() << "\n";
      return 1;
    }
    throw;
  }
  const ParameterTriple& t = *maybe;

  const RealnessCertificate realness = realness_conditions(t);
  out << "n: " << t.order() << "\n";
  out << "identity residual: " << fmt(t.identity_residual()) << "\n";
  out << "S0 Hermitian: yes\n";
  out << "S0 positive definite: " << (t.s0_positive_definite() ? "yes" : "no") << "\n";
  if (!t.s0_positive_definite()) {
    out << "warning: S0 is not positive definite; the positivity and "
           "half-plane guarantees do not apply\n";
  }
  out << "realness conditions: " << (realness.is_real_form ? "satisfied" : "violated")
      << " (max imaginary part " << fmt(realness.max_violation) << ")\n";
  if (t.s0_positive_definite()) {
    out << "spectrum half-plane: " << (spectrum_halfplane_check(t) ? "ok" : "VIOLATED")
        << "\n";
  } else {
    out << "spectrum half-plane: skipped (requires S0 > 0); raw result "
        << (spectrum_halfplane_check(t) ? "ok" : "lower half-plane") << "\n";
  }
  out << "sylvester path: " << (t.sylvester_well_posed() ? "well-posed" : "gated off")
      << "\n";
  return 0;
}

int cmd_potential(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ParameterTriple t = resolve_triple(cfg);
  const GridSpec grid = x_grid_or_default(cfg);
  const std::vector<double> xs = grid.points();
  const bool physical = physical_requested(cfg, err);

  out << "x,u_re,u_im,min_eig_S,identity_residual";
  if (physical) out << ",U";
  out << "\n";

  const auto emit = [&](double x, const Complex& u, double min_eig, double residual) {
    out << fmt(x) << "," << fmt(u.real()) << "," << fmt(u.imag()) << "," << fmt(min_eig)
        << "," << fmt(residual);
    if (physical) out << "," << fmt(*cfg.energy - *cfg.hbar_vf * u.real());
    out << "\n";
  };

  if (cfg.seed.is_zero()) {
    const auto profile = sample_profile(t, xs, cfg.method);
    for (const auto& p : profile) {
      emit(p.x, p.potential.u_tilde, p.min_eig_S, p.state.identity_residual);
    }
  } else {
    const DressingTrajectory traj =
        integrate_dressing(t, cfg.seed, std::min(grid.min, 0.0), std::max(grid.max, 0.0),
                           cfg.ode);
    for (double x : xs) {
      const DressedPotential pot = transformed_potential(traj, cfg.seed, x);
      const ComplexMatrix S = traj.s_at(x);
      const ComplexMatrix Pi = traj.pi_at(x);
      const double residual =
          fro_norm(t.A() * S - S * t.A().adjoint() - kI * (Pi * Pi.adjoint())) /
          (1.0 + fro_norm(S));
      emit(x, pot.u_tilde, hermitian_min_eig(0.5 * (S + S.adjoint())), residual);
    }
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const ParameterTriple t = resolve_triple(cfg);
  const std::vector<double> xs = x_grid_or_default(cfg).points();
  const std::vector<double> ys = y_grid_or_default(cfg).points();
  const ComplexVector h = parse_h(cfg.h_spec, t.order());

  out << "x,y,psi1_re,psi1_im,psi2_re,psi2_im\n";
  const auto emit = [&](double x, double y, const Eigen::Vector2cd& psi) {
    out << fmt(x) << "," << fmt(y) << "," << fmt(psi(0).real()) << "," << fmt(psi(0).imag())
        << "," << fmt(psi(1).real()) << "," << fmt(psi(1).imag()) << "\n";
  };

  if (cfg.seed.is_zero()) {
    const PsiSampler psi = make_psi_sampler(t, h, cfg.method);
    for (double x : xs) {
      for (double y : ys) emit(x, y, psi(x, y));
    }
  } else {
    const GridSpec grid = x_grid_or_default(cfg);
    const DressingTrajectory traj =
        integrate_dressing(t, cfg.seed, std::min(grid.min, 0.0), std::max(grid.max, 0.0),
                           cfg.ode);
    for (double x : xs) {
      for (double y : ys) emit(x, y, eval_psi_general(traj, x, y, h));
    }
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const ParameterTriple t = resolve_triple(cfg);
  ReportOptions opts;
  opts.thresholds = cfg.thresholds;
  opts.method = cfg.method;
  opts.ode = cfg.ode;
  if (cfg.inject_error) opts.inject_potential_offset = 0.01;

  const GridSpec xg = cfg.x_grid.value_or(GridSpec{-2.0, 2.0, 0.1});
  const GridSpec yg = y_grid_or_default(cfg);
  const VerificationReport rep = full_report(t, cfg.seed, xg, yg, opts);
  out << report_to_json(rep).dump(2) << "\n";
  return rep.all_pass() ? 0 : 1;
}

int cmd_example(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const ParameterTriple t = resolve_triple(cfg);
  out << triple_to_json(t).dump(2) << "\n";
  return 0;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& err) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "cannot open output file '" << cfg.out_path << "'\n";
      return 2;
    }
    out = &file;
  }
  try {
    if (name == "validate") return cmd_validate(cfg, *out, err);
    if (name == "potential") return cmd_potential(cfg, *out, err);
    if (name == "solve") return cmd_solve(cfg, *out, err);
    if (name == "verify") return cmd_verify(cfg, *out, err);
    if (name == "example") return cmd_example(cfg, *out, err);
    err << "unknown command '" << name << "'\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return (e.code() == ErrorCode::ParseError) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gbdt::cli
