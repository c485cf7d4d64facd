#include "gbdt/serialize.hpp"

namespace gbdt {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::ParseError, "matrix must be a non-empty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw Error(ErrorCode::ParseError, "matrix rows must be non-empty arrays");
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::ParseError, "ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2) {
        throw Error(ErrorCode::ParseError, "complex entries must be [re, im] pairs");
      }
      m(i, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

json triple_to_json(const ParameterTriple& t) {
  json j;
  j["n"] = t.order();
  j["A"] = matrix_to_json(t.A());
  j["S0"] = matrix_to_json(t.S0());
  j["Pi0"] = matrix_to_json(t.Pi0());
  return j;
}

ParameterTriple triple_from_json(const json& j) {
  for (const char* key : {"n", "A", "S0", "Pi0"}) {
    if (!j.contains(key)) {
      throw Error(ErrorCode::ParseError, std::string("triple document missing field '") +
                                             key + "'");
    }
  }
  const int n = j["n"].get<int>();
  const ComplexMatrix A = matrix_from_json(j["A"]);
  const ComplexMatrix S0 = matrix_from_json(j["S0"]);
  const ComplexMatrix Pi0 = matrix_from_json(j["Pi0"]);
  if (A.rows() != n) {
    throw Error(ErrorCode::ParseError, "field 'n' disagrees with the shape of A");
  }
  return validate_triple(A, S0, Pi0);
}

json seed_to_json(const SeedPotential& s) {
  json j;
  switch (s.kind()) {
    case SeedPotential::Kind::Zero:
      j["kind"] = "zero";
      break;
    case SeedPotential::Kind::Constant:
      j["kind"] = "constant";
      j["c"] = {s.constant_value().real(), s.constant_value().imag()};
      break;
    case SeedPotential::Kind::Gaussian:
      j["kind"] = "gaussian";
      j["amp"] = s.amp();
      j["center"] = s.center();
      j["width"] = s.width();
      break;
    case SeedPotential::Kind::Tabulated: {
      j["kind"] = "tabulated";
      j["x"] = s.knots();
      json u = json::array();
      for (const Complex& v : s.values()) u.push_back({v.real(), v.imag()});
      j["u"] = std::move(u);
      break;
    }
  }
  return j;
}

SeedPotential seed_from_json(const json& j) {
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero") return SeedPotential::zero();
  if (kind == "constant") {
    Complex c{0.0, 0.0};
    if (j.contains("c")) {
      if (j["c"].is_array() && j["c"].size() == 2) {
        c = Complex(j["c"][0].get<double>(), j["c"][1].get<double>());
      } else {
        c = Complex(j["c"].get<double>(), 0.0);
      }
    }
    return SeedPotential::constant(c);
  }
  if (kind == "gaussian") {
    return SeedPotential::gaussian(j.value("amp", 1.0), j.value("center", 0.0),
                                   j.value("width", 1.0));
  }
  if (kind == "tabulated") {
    if (!j.contains("x") || !j.contains("u")) {
      throw Error(ErrorCode::ParseError, "tabulated seed needs 'x' and 'u' arrays");
    }
    std::vector<double> knots = j["x"].get<std::vector<double>>();
    std::vector<Complex> values;
    for (const auto& e : j["u"]) {
      if (e.is_array() && e.size() == 2) {
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        values.emplace_back(e.get<double>(), 0.0);
      }
    }
    return SeedPotential::tabulated(std::move(knots), std::move(values));
  }
  throw Error(ErrorCode::ParseError, "unknown seed kind '" + kind + "'");
}

json report_to_json(const VerificationReport& r) {
  json j;
  j["pde_residual_max"] = r.pde_residual_max;
  j["convergence_order"] = r.convergence_order;
  j["identity_residual_max"] = r.identity_residual_max;
  j["min_eig_S"] = r.min_eig_S;
  j["min_eig_argmin_x"] = r.min_eig_argmin_x;
  j["realness_violation"] = r.realness_violation;
  j["realness_applicable"] = r.realness_applicable;
  j["cross_agreement_max"] = r.cross_agreement_max;
  j["cross_agreement_applicable"] = r.cross_agreement_applicable;
  j["ode_path"] = r.ode_path;
  j["x_grid"] = {{"min", r.x_grid.min}, {"max", r.x_grid.max}, {"step", r.x_grid.step}};
  j["y_grid"] = {{"min", r.y_grid.min}, {"max", r.y_grid.max}, {"step", r.y_grid.step}};
  j["thresholds"] = {{"identity_residual", r.thresholds.identity_residual},
                     {"identity_drift", r.thresholds.identity_drift},
                     {"pde_residual", r.thresholds.pde_residual},
                     {"pde_step", r.thresholds.pde_step},
                     {"order_lo", r.thresholds.order_lo},
                     {"order_hi", r.thresholds.order_hi},
                     {"realness", r.thresholds.realness},
                     {"cross_agreement", r.thresholds.cross_agreement}};
  json criteria = json::array();
  for (const auto& c : r.criteria) {
    criteria.push_back({{"name", c.name},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"comparator", c.comparator},
                        {"pass", c.pass}});
  }
  j["criteria"] = std::move(criteria);
  j["all_pass"] = r.all_pass();
  return j;
}

}  // namespace gbdt
