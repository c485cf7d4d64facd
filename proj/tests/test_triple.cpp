#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gbdt/linalg.hpp"
#include "gbdt/serialize.hpp"
#include "gbdt/triple.hpp"

using namespace gbdt;

TEST_CASE("validate_triple accepts the Jordan-type seed") {
  ComplexMatrix A(2, 2);
  A << kI, 0, kI, kI;
  ComplexMatrix S0 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix Pi0(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  Pi0 << 2.0 * r * kI, 0, r * kI, r * std::sqrt(3.0);

  const ParameterTriple t = validate_triple(A, S0, Pi0);
  CHECK(t.order() == 2);
  CHECK(t.s0_positive_definite());
  CHECK(t.identity_residual() <= 1e-15);
}

TEST_CASE("validate_triple accepts the scalar seed 2*calA = |L1|^2 + |L2|^2") {
  ComplexMatrix A(1, 1), S0(1, 1), Pi0(1, 2);
  A(0, 0) = kI;
  S0(0, 0) = 1.0;
  Pi0(0, 0) = kI;
  Pi0(0, 1) = 1.0;
  CHECK_NOTHROW(validate_triple(A, S0, Pi0));
}

TEST_CASE("validate_triple rejects a mismatched scalar seed") {
  ComplexMatrix A(1, 1), S0(1, 1), Pi0(1, 2);
  A(0, 0) = kI;
  S0(0, 0) = 1.0;
  Pi0(0, 0) = 2.0 * kI;  // 2 != |2i|^2 + 1
  Pi0(0, 1) = 1.0;
  CHECK_THROWS_AS(validate_triple(A, S0, Pi0), Error);
  try {
    validate_triple(A, S0, Pi0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IdentityViolated);
  }
}

TEST_CASE("validate_triple rejects non-Hermitian S0") {
  ComplexMatrix A(2, 2);
  A << kI, 0, kI, kI;
  ComplexMatrix S0(2, 2);
  S0 << 1, 1, 0, 1;
  CHECK_THROWS_AS(validate_triple(A, S0, ComplexMatrix::Zero(2, 2)), Error);
  try {
    validate_triple(A, S0, ComplexMatrix::Zero(2, 2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("realness certificate") {
  CHECK(realness_conditions(make_example2()).is_real_form);

  // A = 1 + i cannot come from a real calA.
  ComplexMatrix A(1, 1), S0(1, 1), Pi0(1, 2);
  A(0, 0) = Complex(1.0, 1.0);
  S0(0, 0) = 1.0;
  Pi0(0, 0) = 1.0;
  Pi0(0, 1) = 1.0;  // identity: (1+i) - (1-i) = 2i = i * (1 + 1)
  const ParameterTriple t = validate_triple(A, S0, Pi0);
  CHECK_FALSE(realness_conditions(t).is_real_form);

  const RealVector h = RealVector::Ones(3);
  CHECK(realness_conditions(make_example4(h, 2.0 * h)).is_real_form);
}

TEST_CASE("make_example1") {
  const ParameterTriple a = make_example1(1.0, std::sqrt(2.0), 0.0);
  CHECK(a.A()(0, 0) == kI);
  CHECK(a.S0()(0, 0) == Complex(1.0));
  CHECK(std::abs(a.Pi0()(0, 0) - kI * std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a.Pi0()(0, 1)) == 0.0);

  const ParameterTriple b = make_example1(1.0, 1.0, 1.0);
  CHECK(std::abs(b.Pi0()(0, 0) - kI) < 1e-15);
  CHECK(std::abs(b.Pi0()(0, 1) - 1.0) < 1e-15);

  CHECK_THROWS_AS(make_example1(1.0, 2.0, 2.0), Error);

  // all four sign patterns are admissible
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      CHECK_NOTHROW(make_example1(1.0, 1.0, 1.0, s1, s2));
    }
  }
}

TEST_CASE("make_example2 is certified with a defective A") {
  const ParameterTriple t = make_example2();
  CHECK(t.identity_residual() <= 1e-15);
  CHECK(realness_conditions(t).is_real_form);
  // spectrum {i, i}: algebraic multiplicity 2
  CHECK(std::abs(t.spectrum()(0) - kI) < 1e-12);
  CHECK(std::abs(t.spectrum()(1) - kI) < 1e-12);
  // one eigenvector only: A - iI has rank 1
  const ComplexMatrix shifted = t.A() - kI * ComplexMatrix::Identity(2, 2);
  CHECK(fro_norm(shifted) > 0.5);
  CHECK(std::abs(shifted.determinant()) < 1e-14);
}

TEST_CASE("make_example3") {
  SUBCASE("n = 1 collapses to a scalar seed") {
    const RealMatrix calA0 = RealMatrix::Zero(1, 1);
    RealVector h1(1), h2(1);
    h1 << 1.0;
    h2 << 1.0;
    const ParameterTriple t = make_example3(calA0, h1, h2);
    CHECK(std::abs(t.A()(0, 0) - 2.0 * kI) < 1e-15);
    CHECK(std::abs(t.Pi0()(0, 0) - std::sqrt(2.0) * kI) < 1e-15);
    CHECK(std::abs(t.Pi0()(0, 1) - std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("n = 2 rotation block") {
    RealMatrix calA0(2, 2);
    calA0 << 0, 1, -1, 0;
    RealVector h1(2), h2(2);
    h1 << 1, 0;
    h2 << 0, 1;
    const ParameterTriple t = make_example3(calA0, h1, h2);
    CHECK(realness_conditions(t).is_real_form);
    CHECK(t.s0_positive_definite());
  }
  SUBCASE("symmetric calA0 is rejected") {
    RealMatrix calA0(2, 2);
    calA0 << 0, 1, 1, 0;
    CHECK_THROWS_AS(make_example3(calA0, RealVector::Ones(2), RealVector::Ones(2)), Error);
    try {
      make_example3(calA0, RealVector::Ones(2), RealVector::Ones(2));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSkewSymmetric);
    }
  }
}

TEST_CASE("make_example4") {
  SUBCASE("n = 1 matches the scalar family") {
    RealVector h(1);
    h << 1.0;
    const ParameterTriple t = make_example4(h, h);
    const ParameterTriple ref = make_example1(1.0, 1.0, 1.0);
    CHECK(fro_norm(t.A() - ref.A()) < 1e-15);
    CHECK(fro_norm(t.Pi0() - ref.Pi0()) < 1e-15);
  }
  SUBCASE("n = 2 forced entries, verified by substitution into the identity") {
    RealVector h1(2), h2(2);
    h1 << 1, 1;
    h2 << 0, 1;
    const ParameterTriple t = make_example4(h1, h2);
    // calA + calA^T = h1 h1^T + h2 h2^T forces calA = [[1/2, 0], [1, 1]].
    RealMatrix expected(2, 2);
    expected << 0.5, 0.0, 1.0, 1.0;
    CHECK(fro_norm(t.A() - kI * expected.cast<Complex>()) < 1e-14);
    CHECK(t.identity_residual() <= 1e-14);
  }
  SUBCASE("n = 2 with h2 = (0, sqrt2)") {
    RealVector h1(2), h2(2);
    h1 << 1, 1;
    h2 << 0, std::sqrt(2.0);
    const ParameterTriple t = make_example4(h1, h2);
    RealMatrix expected(2, 2);
    expected << 0.5, 0.0, 1.0, 1.5;
    CHECK(fro_norm(t.A() - kI * expected.cast<Complex>()) < 1e-14);
  }
  SUBCASE("contradictory lower part is rejected") {
    RealVector h1(2), h2(2);
    h1 << 1, 1;
    h2 << 0, 1;
    RealMatrix lower = RealMatrix::Zero(2, 2);
    lower(1, 0) = 7.0;  // forced value is 1
    CHECK_THROWS_AS(make_example4(h1, h2, lower), Error);
    try {
      make_example4(h1, h2, lower);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InconsistentLowerPart);
    }
  }
}

TEST_CASE("spectrum_halfplane_check") {
  CHECK(spectrum_halfplane_check(make_example2()));
  CHECK(spectrum_halfplane_check(make_example1(1.0, 1.0, 1.0)));

  // With indefinite S0 the half-plane conclusion has no backing: A = -i,
  // S0 = -1, Pi0 = [i, 1] satisfies the identity but sits in the lower
  // half-plane, and must be reported as such.
  ComplexMatrix A(1, 1), S0(1, 1), Pi0(1, 2);
  A(0, 0) = -kI;
  S0(0, 0) = -1.0;
  Pi0(0, 0) = kI;
  Pi0(0, 1) = 1.0;
  const ParameterTriple t = validate_triple(A, S0, Pi0);
  CHECK_FALSE(t.s0_positive_definite());
  CHECK_FALSE(spectrum_halfplane_check(t));
}

TEST_CASE("randomized families satisfy the certified invariants") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const ParameterTriple t3 = random_example3(n, seed);
    CHECK(t3.s0_positive_definite());
    CHECK(realness_conditions(t3).is_real_form);
    CHECK(spectrum_halfplane_check(t3));

    const ParameterTriple t4 = random_example4(n, seed);
    CHECK(t4.s0_positive_definite());
    CHECK(realness_conditions(t4).is_real_form);
    CHECK(spectrum_halfplane_check(t4));
  }
}

TEST_CASE("random families are deterministic in their seed") {
  const ParameterTriple a = random_example3(4, 7);
  const ParameterTriple b = random_example3(4, 7);
  CHECK(fro_norm(a.A() - b.A()) == 0.0);
  CHECK(fro_norm(a.Pi0() - b.Pi0()) == 0.0);
}

TEST_CASE("triple serialization round-trips") {
  const ParameterTriple t = make_example2();
  const nlohmann::json j = triple_to_json(t);
  CHECK(j["n"] == 2);
  const ParameterTriple back = triple_from_json(j);
  CHECK(fro_norm(back.A() - t.A()) == 0.0);
  CHECK(fro_norm(back.S0() - t.S0()) == 0.0);
  CHECK(fro_norm(back.Pi0() - t.Pi0()) == 0.0);
  CHECK(triple_to_json(back) == j);

  // random triples survive the round trip bit-exactly too
  for (std::uint64_t seed : {3u, 17u}) {
    const ParameterTriple r = random_example4(5, seed);
    const ParameterTriple rb = triple_from_json(triple_to_json(r));
    CHECK(fro_norm(rb.A() - r.A()) == 0.0);
    CHECK(fro_norm(rb.Pi0() - r.Pi0()) == 0.0);
  }
}

TEST_CASE("triple parsing rejects malformed documents") {
  CHECK_THROWS_AS(triple_from_json(nlohmann::json{{"n", 2}}), Error);
  nlohmann::json j = triple_to_json(make_example2());
  j["n"] = 3;
  CHECK_THROWS_AS(triple_from_json(j), Error);
}
