#pragma once

#include <cstdint>

#include "gbdt/types.hpp"

namespace gbdt {

/// Certified seed datum {A, S(0), Pi(0)} of the dressing transform.
///
/// Construction goes through validate_triple(), which certifies the identity
/// A*S0 - S0*A* = i*Pi0*Pi0* and Hermiticity of S0; instances are immutable
/// afterwards and safe to share across threads. The spectrum of A is cached
/// at certification (it gates the Sylvester evaluation path and the growth
/// guard).
class ParameterTriple {
 public:
  int order() const { return static_cast<int>(A_.rows()); }
  const ComplexMatrix& A() const { return A_; }
  const ComplexMatrix& S0() const { return S0_; }
  const ComplexMatrix& Pi0() const { return Pi0_; }
  ComplexVector lambda1_0() const { return Pi0_.col(0); }
  ComplexVector lambda2_0() const { return Pi0_.col(1); }

  bool s0_positive_definite() const { return s0_positive_definite_; }
  /// Absolute residual of the defining identity at certification time.
  double identity_residual() const { return identity_residual_; }
  const ComplexVector& spectrum() const { return spectrum_; }
  double spectral_radius_A() const { return spectral_radius_; }
  /// True when sigma(A) and sigma(A*) pass the separation gate, so S(x) may
  /// be recovered from the conserved identity by a Sylvester solve.
  bool sylvester_well_posed() const { return sylvester_well_posed_; }

  static constexpr double kIdentityTol = 1e-12;

 private:
  friend ParameterTriple validate_triple(const ComplexMatrix& A, const ComplexMatrix& S0,
                                         const ComplexMatrix& Pi0);
  ParameterTriple() = default;

  ComplexMatrix A_, S0_, Pi0_;
  ComplexVector spectrum_;
  double spectral_radius_ = 0.0;
  double identity_residual_ = 0.0;
  bool s0_positive_definite_ = false;
  bool sylvester_well_posed_ = false;
};

struct RealnessCertificate {
  bool is_real_form = false;
  double max_violation = 0.0;  // largest offending imaginary part
};

/// Certify raw matrices as a parameter triple.
/// Throws NotHermitian (S0) or IdentityViolated (residual reported).
ParameterTriple validate_triple(const ComplexMatrix& A, const ComplexMatrix& S0,
                                const ComplexMatrix& Pi0);

/// Checks that iA, S0, i*Lambda1(0) and Lambda2(0) are all real-valued, the
/// condition under which the dressed potential collapses to a real scalar.
RealnessCertificate realness_conditions(const ParameterTriple& t);

/// Scalar family: A = i*calA, S0 = 1, Pi0 = [sign1*i*m1, sign2*m2],
/// requires 2*calA = m1^2 + m2^2.
ParameterTriple make_example1(double calA, double m1, double m2, int sign1 = +1,
                              int sign2 = +1);

/// The fixed order-2 triple with A similar to a Jordan cell:
/// A = i[[1,0],[1,1]], S0 = I, Pi0 = (1/sqrt2)[[2i,0],[i,sqrt3]].
ParameterTriple make_example2();

/// A = i(calA0 + h1 h1^T + h2 h2^T) with calA0 real skew-symmetric,
/// S0 = I, Pi0 = sqrt2 [i h1, h2].
ParameterTriple make_example3(const RealMatrix& calA0, const RealVector& h1,
                              const RealVector& h2);

/// Lower-triangular family: Pi0 = [i h1, h2] and calA lower-triangular with
/// calA + calA^T = h1 h1^T + h2 h2^T. The diagonal and strictly-lower entries
/// are forced by that equation; `lower` restates the strictly-lower part and
/// is validated against the forcing (InconsistentLowerPart on mismatch).
ParameterTriple make_example4(const RealVector& h1, const RealVector& h2,
                              const RealMatrix& lower);

/// Convenience overload that fills in the forced lower part itself.
ParameterTriple make_example4(const RealVector& h1, const RealVector& h2);

/// The strictly-lower part forced by calA + calA^T = h1 h1^T + h2 h2^T.
RealMatrix example4_forced_lower(const RealVector& h1, const RealVector& h2);

/// True iff every eigenvalue of A satisfies Im(lambda) >= -1e-10 * ||A||.
/// Guaranteed for triples with S0 > 0.
bool spectrum_halfplane_check(const ParameterTriple& t);

/// Deterministic random instances of the example-3/4 families. Norms are
/// capped so that e^{|x| ||A||} stays far from the double range limit over
/// x in [-10, 10].
ParameterTriple random_example3(int n, std::uint64_t rng_seed);
ParameterTriple random_example4(int n, std::uint64_t rng_seed);

}  // namespace gbdt
