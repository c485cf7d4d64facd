#pragma once

#include <nlohmann/json.hpp>

#include "gbdt/seed.hpp"
#include "gbdt/triple.hpp"
#include "gbdt/verify.hpp"

namespace gbdt {

/// Row-major nested arrays; each complex entry is a two-element [re, im].
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Triple document: fields "n", "A", "S0", "Pi0".
nlohmann::json triple_to_json(const ParameterTriple& t);
/// Parses and re-certifies; all validate_triple errors apply.
ParameterTriple triple_from_json(const nlohmann::json& j);

nlohmann::json seed_to_json(const SeedPotential& s);
SeedPotential seed_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const VerificationReport& r);

}  // namespace gbdt
