#include "config.hpp"

#include <fstream>
#include <sstream>

#include "gbdt/serialize.hpp"

namespace gbdt::cli {

GridSpec parse_grid(const std::string& spec) {
  GridSpec g;
  const auto first = spec.find(':');
  const auto second = spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw Error(ErrorCode::ParseError, "grid must be min:max:step, got '" + spec + "'");
  }
  try {
    g.min = std::stod(spec.substr(0, first));
    g.max = std::stod(spec.substr(first + 1, second - first - 1));
    g.step = std::stod(spec.substr(second + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "non-numeric grid component in '" + spec + "'");
  }
  if (!(g.step > 0.0) || g.max < g.min) {
    throw Error(ErrorCode::ParseError, "grid needs max >= min and step > 0");
  }
  return g;
}

ComplexVector parse_h(const std::string& spec, int n) {
  if (spec == "0") return ComplexVector::Zero(n);
  if (spec.size() >= 2 && spec[0] == 'e') {
    int k = 0;
    try {
      k = std::stoi(spec.substr(1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad basis vector '" + spec + "'");
    }
    if (k < 1 || k > n) {
      throw Error(ErrorCode::ParseError,
                  "basis index out of range for n = " + std::to_string(n));
    }
    ComplexVector h = ComplexVector::Zero(n);
    h(k - 1) = 1.0;
    return h;
  }
  std::vector<Complex> entries;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        entries.emplace_back(std::stod(token), 0.0);
      } else {
        entries.emplace_back(std::stod(token.substr(0, colon)),
                             std::stod(token.substr(colon + 1)));
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad h entry '" + token + "'");
    }
  }
  if (static_cast<int>(entries.size()) != n) {
    throw Error(ErrorCode::ParseError, "h has " + std::to_string(entries.size()) +
                                           " entries but n = " + std::to_string(n));
  }
  ComplexVector h(n);
  for (int i = 0; i < n; ++i) h(i) = entries[static_cast<std::size_t>(i)];
  return h;
}

namespace {

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad numeric component '" + token + "'");
    }
  }
  return out;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, "bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace

SeedPotential parse_seed(const std::string& spec) {
  if (spec == "zero") return SeedPotential::zero();
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = (colon == std::string::npos) ? "" : spec.substr(colon + 1);
  if (kind == "constant") {
    const auto vals = split_doubles(args);
    if (vals.size() == 1) return SeedPotential::constant(Complex(vals[0], 0.0));
    if (vals.size() == 2) return SeedPotential::constant(Complex(vals[0], vals[1]));
    throw Error(ErrorCode::ParseError, "constant seed takes 'c' or 're,im'");
  }
  if (kind == "gaussian") {
    const auto vals = split_doubles(args);
    if (vals.size() != 3) {
      throw Error(ErrorCode::ParseError, "gaussian seed takes 'amp,center,width'");
    }
    return SeedPotential::gaussian(vals[0], vals[1], vals[2]);
  }
  if (kind == "tabulated") {
    if (args.empty()) {
      throw Error(ErrorCode::ParseError, "tabulated seed takes a JSON file path");
    }
    return seed_from_json(load_json_file(args));
  }
  throw Error(ErrorCode::ParseError, "unknown seed '" + spec + "'");
}

EvalMethod parse_method(const std::string& name) {
  if (name == "auto") return EvalMethod::Auto;
  if (name == "sylvester") return EvalMethod::Sylvester;
  if (name == "vanloan") return EvalMethod::VanLoan;
  if (name == "quadrature") return EvalMethod::Quadrature;
  throw Error(ErrorCode::ParseError, "unknown method '" + name + "'");
}

void apply_config_json(const nlohmann::json& j, RunConfig& cfg) {
  if (j.contains("triple")) {
    const auto& t = j["triple"];
    if (t.contains("example")) {
      cfg.example = t["example"].get<int>();
      if (t.contains("calA")) cfg.calA = t["calA"].get<double>();
      if (t.contains("m1")) cfg.m1 = t["m1"].get<double>();
      if (t.contains("m2")) cfg.m2 = t["m2"].get<double>();
      if (t.contains("sign1")) cfg.sign1 = t["sign1"].get<int>();
      if (t.contains("sign2")) cfg.sign2 = t["sign2"].get<int>();
      if (t.contains("n")) cfg.n = t["n"].get<int>();
      if (t.contains("rng_seed")) cfg.rng_seed = t["rng_seed"].get<std::uint64_t>();
    } else {
      cfg.inline_triple = t;
    }
  }
  if (j.contains("seed")) cfg.seed = seed_from_json(j["seed"]);
  if (j.contains("grids")) {
    const auto& g = j["grids"];
    const auto read = [](const nlohmann::json& spec) {
      GridSpec out;
      out.min = spec.at("min").get<double>();
      out.max = spec.at("max").get<double>();
      out.step = spec.at("step").get<double>();
      if (!(out.step > 0.0) || out.max < out.min) {
        throw Error(ErrorCode::ParseError, "grid needs max >= min and step > 0");
      }
      return out;
    };
    if (g.contains("x")) cfg.x_grid = read(g["x"]);
    if (g.contains("y")) cfg.y_grid = read(g["y"]);
  }
  if (j.contains("h")) {
    if (j["h"].is_string()) {
      cfg.h_spec = j["h"].get<std::string>();
    } else {
      std::string spec;
      for (const auto& e : j["h"]) {
        if (!spec.empty()) spec += ",";
        spec += std::to_string(e[0].get<double>()) + ":" + std::to_string(e[1].get<double>());
      }
      cfg.h_spec = spec;
    }
  }
  if (j.contains("method")) cfg.method = parse_method(j["method"].get<std::string>());
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("ode")) cfg.ode.tolerance = t["ode"].get<double>();
    if (t.contains("identity_residual")) {
      cfg.thresholds.identity_residual = t["identity_residual"].get<double>();
    }
    if (t.contains("identity_drift")) {
      cfg.thresholds.identity_drift = t["identity_drift"].get<double>();
    }
    if (t.contains("pde_residual")) cfg.thresholds.pde_residual = t["pde_residual"].get<double>();
    if (t.contains("pde_step")) cfg.thresholds.pde_step = t["pde_step"].get<double>();
  }
  if (j.contains("physical")) {
    const auto& p = j["physical"];
    if (p.contains("hbar_vF")) cfg.hbar_vf = p["hbar_vF"].get<double>();
    if (p.contains("E")) cfg.energy = p["E"].get<double>();
  }
}

ParameterTriple resolve_triple(const RunConfig& cfg) {
  if (!cfg.inline_triple.is_null() && !cfg.inline_triple.empty()) {
    return triple_from_json(cfg.inline_triple);
  }
  if (!cfg.example.has_value()) {
    throw Error(ErrorCode::ParseError, "no triple given: use --example, --triple or a config file");
  }
  switch (*cfg.example) {
    case 1: return make_example1(cfg.calA, cfg.m1, cfg.m2, cfg.sign1, cfg.sign2);
    case 2: return make_example2();
    case 3:
      if (!cfg.rng_seed.has_value()) {
        throw Error(ErrorCode::ParseError, "example 3 draws random parameters: --rng-seed is required");
      }
      return random_example3(cfg.n, *cfg.rng_seed);
    case 4:
      if (!cfg.rng_seed.has_value()) {
        throw Error(ErrorCode::ParseError, "example 4 draws random parameters: --rng-seed is required");
      }
      return random_example4(cfg.n, *cfg.rng_seed);
    default:
      throw Error(ErrorCode::ParseError, "example must be 1, 2, 3 or 4");
  }
}

}  // namespace gbdt::cli
