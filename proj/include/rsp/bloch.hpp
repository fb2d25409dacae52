#pragma once
// Closed-form single-qubit formulas underlying the remote-preparation and
// remote-measurement protocols: Bloch-sphere parametrization, the
// complement qubit, the shared singlet, the correction unitary U(phi0),
// the sender's basis rotation R+ with its x-y-x pulse-angle decomposition,
// and the projective outcome-probability law.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rsp/qcore.hpp"

namespace rsp {

inline constexpr double kPi = std::numbers::pi;

// Polar/azimuthal Bloch angles of the target qubit. theta in [0, pi];
// phi is reduced mod 2*pi on construction.
struct QubitParams {
  double theta;
  double phi;

  QubitParams(double theta_, double phi_) : theta(theta_), phi(phi_) {
    if (!(theta >= 0.0 && theta <= kPi))
      throw std::invalid_argument("QubitParams: theta outside [0, pi]");
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi) phi = 0.0;  // rounding can land exactly on 2pi
  }
};

struct BlochVector {
  double x, y, z;
};

// Unit vector giving the measurement direction b.
struct MeasurementDirection {
  double x, y, z;

  MeasurementDirection(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    if (std::abs(std::sqrt(x * x + y * y + z * z) - 1.0) > kExactTol)
      throw std::invalid_argument("MeasurementDirection: not a unit vector");
  }

  static MeasurementDirection x_axis() { return {1, 0, 0}; }
  static MeasurementDirection y_axis() { return {0, 1, 0}; }
  static MeasurementDirection z_axis() { return {0, 0, 1}; }
  MeasurementDirection reversed() const { return {-x, -y, -z}; }
};

inline double dot(const BlochVector& n, const MeasurementDirection& b) {
  return n.x * b.x + n.y * b.y + n.z * b.z;
}

// Pulse angles realizing R+ as X(theta1) Ybar(theta2) X(theta1).
// theta1 in [-pi/2, pi/2], theta2 in [-pi, pi].
struct RotationAngles {
  double theta1;
  double theta2;
};

// cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>
inline PureState2 make_qubit(const QubitParams& p) {
  const double c = std::cos(p.theta / 2.0), s = std::sin(p.theta / 2.0);
  return PureState2({cx(c, 0.0), s * std::polar(1.0, p.phi)});
}

// The complement qubit cos(theta/2)|1> - sin(theta/2) e^{-i phi}|0>.
// The phase convention (minus sign on the |0> term) is load-bearing: the
// correction unitary maps exactly this state back onto the target.
inline PureState2 perp_qubit(const QubitParams& p) {
  const double c = std::cos(p.theta / 2.0), s = std::sin(p.theta / 2.0);
  return PureState2({-s * std::polar(1.0, -p.phi), cx(c, 0.0)});
}

// (|01> - |10>)/sqrt(2)
inline PureState4 singlet() {
  const double r = 1.0 / std::sqrt(2.0);
  return PureState4({cx{}, cx(r, 0.0), cx(-r, 0.0), cx{}});
}

// n = (<sx>, <sy>, <sz>)
inline BlochVector bloch_vector(const PureState2& s) {
  const cx a = s.amp(0), b = s.amp(1);
  const cx cross = std::conj(a) * b;
  return {2.0 * std::real(cross), 2.0 * std::imag(cross),
          std::norm(a) - std::norm(b)};
}

// U(phi0) = [[0, -e^{-i phi0}], [e^{i phi0}, 0]]
//         = i (sin(phi0) sx - cos(phi0) sy).
// Converts the complement qubit into the target, up to the global phase
// -e^{-i phi0}.
inline Operator2 correction_unitary(double phi0) {
  const cx e = std::polar(1.0, phi0);
  return Operator2::unitary(CMat<2>{cx{}, -std::conj(e), e, cx{}});
}

// R+ : rotates {|psi>, |psi_perp>} into the computational basis, with no
// residual phase on either image.
inline Operator2 alice_rotation(const QubitParams& p) {
  const double c = std::cos(p.theta / 2.0), s = std::sin(p.theta / 2.0);
  const cx e = std::polar(1.0, p.phi);
  return Operator2::unitary(
      CMat<2>{cx(c, 0.0), s * std::conj(e), -s * e, cx(c, 0.0)});
}

// theta1 = atan(tan(theta/2) sin(phi)), theta2 = 2 asin(sin(theta/2) cos(phi)).
// theta1 is evaluated as the phase of cos(theta/2) + i sin(theta/2) sin(phi),
// which keeps theta = pi finite while agreeing with the arctangent form on
// the open interval.
inline RotationAngles rotation_decomposition(const QubitParams& p) {
  const double c = std::cos(p.theta / 2.0), s = std::sin(p.theta / 2.0);
  const double theta1 = std::atan2(s * std::sin(p.phi), c);
  const double theta2 =
      2.0 * std::asin(std::clamp(s * std::cos(p.phi), -1.0, 1.0));
  return {theta1, theta2};
}

// P(+-)(b) = (1 +- b.sigma)/2; Hermitian idempotent, P+ + P- = I.
inline Operator2 projector(const MeasurementDirection& b, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("projector: sign must be +1 or -1");
  const double s = static_cast<double>(sign);
  return Operator2::hermitian(CMat<2>{cx((1.0 + s * b.z) / 2.0, 0.0),
                                      s * cx(b.x, -b.y) / 2.0,
                                      s * cx(b.x, b.y) / 2.0,
                                      cx((1.0 - s * b.z) / 2.0, 0.0)});
}

enum class Branch { rho, rho_perp };

struct OutcomeProbs {
  double p_plus;
  double p_minus;
};

// P(+-)(rho) = (1 +- b.n)/2 on the target state, with both signs flipped on
// the complement branch. Reversing b on the complement branch therefore
// reproduces the target-branch probabilities bit-for-bit.
inline OutcomeProbs outcome_probs(const BlochVector& n,
                                  const MeasurementDirection& b,
                                  Branch branch) {
  const double d = branch == Branch::rho ? dot(n, b) : -dot(n, b);
  return {(1.0 + d) / 2.0, (1.0 - d) / 2.0};
}

}  // namespace rsp
