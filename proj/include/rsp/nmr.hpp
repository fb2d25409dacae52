#pragma once
// Pulse-level realization on the 1H/13C spin pair: pulse algebra, the
// entangling / basis-rotation / conditional-correction sequences, their
// verification against the abstract operators, effective-pure-state
// initialization, and NMR-style readout emulation.
//
// Convention ledger. Every sequence identity in this module (and its
// tests) holds under exactly these choices:
//   * rotation pulse:   R_axis(a) = exp(-i a sigma_axis / 2) on the target
//     spin; a barred pulse negates the angle.
//   * scalar coupling:  J(a) = exp(-i (a/2) sigma_z (x) sigma_z), lasting
//     |a| / (pi J) seconds, so J(pi/2) takes 1/(2 J).
//   * operator-product order: the rightmost pulse of a sequence acts first
//     on the state. A temporal flag (leftmost first) is also supported.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rsp/bloch.hpp"
#include "rsp/qcore.hpp"
#include "rsp/textio.hpp"

namespace rsp::nmr {

enum class Axis { x, y };

// exp(-i a sigma_axis / 2)
inline Operator2 rotation_gate(Axis axis, double a) {
  const double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
  if (axis == Axis::x)
    return Operator2::unitary(CMat<2>{cx(c, 0), cx(0, -s), cx(0, -s), cx(c, 0)});
  return Operator2::unitary(CMat<2>{cx(c, 0), cx(-s, 0), cx(s, 0), cx(c, 0)});
}

// exp(-i (a/2) sigma_z (x) sigma_z): diagonal conditional phases.
inline Operator4 j_gate(double a) {
  CMat<4> m;
  m(0, 0) = std::polar(1.0, -a / 2.0);
  m(1, 1) = std::polar(1.0, a / 2.0);
  m(2, 2) = std::polar(1.0, a / 2.0);
  m(3, 3) = std::polar(1.0, -a / 2.0);
  return Operator4::unitary(m);
}

// One hard pulse or one scalar-coupling evolution interval.
struct PulseOp {
  enum class Kind { rotation, j_evolution };

  Kind kind;
  Axis axis = Axis::x;    // rotation only
  bool barred = false;    // rotation only; negates the angle
  double angle = 0.0;     // as written, in (-2pi, 2pi]
  Slot target = Slot::A;  // rotation only; j acts on both spins

  static PulseOp rotation(Axis axis, bool barred, double angle, Slot target) {
    check_angle(angle);
    return {Kind::rotation, axis, barred, angle, target};
  }

  static PulseOp j_evolution(double angle) {
    check_angle(angle);
    return {Kind::j_evolution, Axis::x, false, angle, Slot::A};
  }

  double effective_angle() const { return barred ? -angle : angle; }

  // Token grammar: "J(pi/2)" | "X:H(pi/2)" | "Y-:C(pi/2)" ('-' = barred).
  std::string text() const {
    if (kind == Kind::j_evolution)
      return "J(" + textio::format_angle(angle) + ")";
    std::string out(1, axis == Axis::x ? 'X' : 'Y');
    if (barred) out += '-';
    out += ':';
    out += target == Slot::A ? 'H' : 'C';
    out += '(' + textio::format_angle(angle) + ')';
    return out;
  }

  static PulseOp parse(std::string_view token) {
    const auto open = token.find('(');
    if (open == std::string_view::npos || token.back() != ')')
      throw std::invalid_argument("PulseOp: malformed token '" +
                                  std::string(token) + "'");
    const double angle =
        textio::parse_angle(token.substr(open + 1, token.size() - open - 2));
    const std::string_view head = token.substr(0, open);
    if (head == "J") return j_evolution(angle);
    if (head.size() < 3 || head[head.size() - 2] != ':')
      throw std::invalid_argument("PulseOp: malformed head '" +
                                  std::string(token) + "'");
    Axis axis;
    if (head[0] == 'X') axis = Axis::x;
    else if (head[0] == 'Y') axis = Axis::y;
    else throw std::invalid_argument("PulseOp: unknown axis in '" +
                                     std::string(token) + "'");
    const bool barred = head.size() == 4 && head[1] == '-';
    if (head.size() == 4 && head[1] != '-')
      throw std::invalid_argument("PulseOp: bad bar marker in '" +
                                  std::string(token) + "'");
    Slot slot;
    const char slot_ch = head.back();
    if (slot_ch == 'H') slot = Slot::A;
    else if (slot_ch == 'C') slot = Slot::B;
    else throw std::invalid_argument("PulseOp: unknown spin in '" +
                                     std::string(token) + "'");
    return rotation(axis, barred, angle, slot);
  }

 private:
  static void check_angle(double a) {
    if (!(a > -2.0 * kPi && a <= 2.0 * kPi + kExactTol))
      throw std::invalid_argument("PulseOp: angle outside (-2pi, 2pi]");
  }
};

inline Operator4 pulse_unitary(const PulseOp& op) {
  if (op.kind == PulseOp::Kind::j_evolution) return j_gate(op.angle);
  return embed(rotation_gate(op.axis, op.effective_angle()), op.target);
}

// Pulse duration in seconds; hard pulses are ideal (zero-duration).
struct PhysicalConstants {
  double j_coupling_hz = 214.95;

  PhysicalConstants() = default;
  explicit PhysicalConstants(double j_hz) : j_coupling_hz(j_hz) {
    if (!(j_coupling_hz > 0.0))
      throw std::invalid_argument("PhysicalConstants: J must be positive");
  }
};

inline double pulse_duration(const PulseOp& op,
                             const PhysicalConstants& pc = {}) {
  if (op.kind != PulseOp::Kind::j_evolution) return 0.0;
  return std::abs(op.angle) / (kPi * pc.j_coupling_hz);
}

enum class PulseOrder {
  operator_product,  // rightmost pulse acts first
  temporal,          // leftmost pulse acts first
};

struct PulseSequence {
  std::vector<PulseOp> ops;
  PulseOrder order = PulseOrder::operator_product;

  std::string text() const {
    std::string out =
        order == PulseOrder::operator_product ? "product" : "temporal";
    for (const PulseOp& op : ops) out += ' ' + op.text();
    return out;
  }

  static PulseSequence parse(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string tok;
    if (!(in >> tok))
      throw std::invalid_argument("PulseSequence: empty text");
    PulseSequence seq;
    if (tok == "product") seq.order = PulseOrder::operator_product;
    else if (tok == "temporal") seq.order = PulseOrder::temporal;
    else throw std::invalid_argument("PulseSequence: bad order flag '" + tok +
                                     "'");
    while (in >> tok) seq.ops.push_back(PulseOp::parse(tok));
    if (seq.ops.empty())
      throw std::invalid_argument("PulseSequence: no pulses");
    return seq;
  }
};

inline Operator4 compose_sequence(const PulseSequence& seq) {
  if (seq.ops.empty())
    throw std::invalid_argument("compose_sequence: empty sequence");
  CMat<4> u = CMat<4>::identity();
  if (seq.order == PulseOrder::operator_product) {
    for (const PulseOp& op : seq.ops) u = u * pulse_unitary(op).matrix();
  } else {
    for (const PulseOp& op : seq.ops) u = pulse_unitary(op).matrix() * u;
  }
  return Operator4::unitary(u);
}

inline double sequence_duration(const PulseSequence& seq,
                                const PhysicalConstants& pc = {}) {
  double t = 0.0;
  for (const PulseOp& op : seq.ops) t += pulse_duration(op, pc);
  return t;
}

// ---- the three protocol sequences ----

// Prepares the singlet from |00>:
//   Ybar_C(pi/2) J(pi/2) Y_C(pi/2) Xbar_C(pi/2) Ybar_H(pi) X_H(pi/2).
inline PulseSequence epr_sequence() {
  using P = PulseOp;
  return {{P::rotation(Axis::y, true, kPi / 2, Slot::B), P::j_evolution(kPi / 2),
           P::rotation(Axis::y, false, kPi / 2, Slot::B),
           P::rotation(Axis::x, true, kPi / 2, Slot::B),
           P::rotation(Axis::y, true, kPi, Slot::A),
           P::rotation(Axis::x, false, kPi / 2, Slot::A)},
          PulseOrder::operator_product};
}

// Realizes the sender's basis rotation R+ as the palindromic
// X_H(theta1) Ybar_H(theta2) X_H(theta1); order-insensitive.
inline PulseSequence rotation_sequence(const QubitParams& p) {
  using P = PulseOp;
  const RotationAngles a = rotation_decomposition(p);
  return {{P::rotation(Axis::x, false, a.theta1, Slot::A),
           P::rotation(Axis::y, true, a.theta2, Slot::A),
           P::rotation(Axis::x, false, a.theta1, Slot::A)},
          PulseOrder::operator_product};
}

// Conditional correction S = |0><0|_A (x) U(phi0) + |1><1|_A (x) I.
inline Operator4 conditional_target(double phi0) {
  CMat<4> m;
  const CMat<2> u = correction_unitary(phi0).matrix();
  m(0, 0) = u(0, 0);
  m(0, 1) = u(0, 1);
  m(1, 0) = u(1, 0);
  m(1, 1) = u(1, 1);
  m(2, 2) = 1.0;
  m(3, 3) = 1.0;
  return Operator4::unitary(m);
}

// Pulse realization of the conditional correction:
//   Xbar_C(pi/2) J(-pi/2) X_C(pi/2 - phi0) Y_C(pi/2) J(phi0) Y_H(pi).
// Composes to (Y_H(pi) (x) I) * S(phi0): the residual factor acts on the
// sender's spin only, so equivalence with S holds at the level of the
// receiver's marginal (state-level) rather than entry-wise.
inline PulseSequence conditional_sequence(double phi0) {
  using P = PulseOp;
  phi0 = std::fmod(phi0, 2.0 * kPi);
  if (phi0 < 0.0) phi0 += 2.0 * kPi;
  return {{P::rotation(Axis::x, true, kPi / 2, Slot::B),
           P::j_evolution(-kPi / 2),
           P::rotation(Axis::x, false, kPi / 2 - phi0, Slot::B),
           P::rotation(Axis::y, false, kPi / 2, Slot::B),
           P::j_evolution(phi0),
           P::rotation(Axis::y, false, kPi, Slot::A)},
          PulseOrder::operator_product};
}

// ---- verification ----

// The 13 x 17 verification grid: every protocol input state
// (R+(theta,phi) (x) I)|singlet> over theta = k pi/12, phi = k pi/8.
inline constexpr int kGridThetaCount = 13;
inline constexpr int kGridPhiCount = 17;

inline double grid_theta(int i) { return static_cast<double>(i) * kPi / 12.0; }
inline double grid_phi(int j) { return static_cast<double>(j) * kPi / 8.0; }

inline std::vector<PureState4> protocol_probe_states() {
  std::vector<PureState4> probes;
  probes.reserve(kGridThetaCount * kGridPhiCount);
  for (int i = 0; i < kGridThetaCount; ++i)
    for (int j = 0; j < kGridPhiCount; ++j) {
      const QubitParams p(grid_theta(i), grid_phi(j));
      probes.push_back(apply_local(alice_rotation(p), Slot::A, singlet()));
    }
  return probes;
}

enum class VerifyMode {
  global_phase,  // operator equality up to a global phase
  state_level,   // equal receiver marginals on every probe state
};

struct VerificationReport {
  Operator4 composed;
  Operator4 target;
  VerifyMode mode;
  double distance;
  double tolerance;
  bool pass;
  std::vector<double> durations_s;  // one entry per pulse
  double total_duration_s;
};

inline VerificationReport verify_sequence(
    const PulseSequence& seq, const Operator4& target, VerifyMode mode,
    const std::vector<PureState4>& probes = {}, double tolerance = kSequenceTol,
    const PhysicalConstants& pc = {}) {
  const Operator4 composed = compose_sequence(seq);
  double distance = 0.0;
  if (mode == VerifyMode::global_phase) {
    distance = phase_distance(composed, target);
  } else {
    const std::vector<PureState4>& inputs =
        probes.empty() ? protocol_probe_states() : probes;
    for (const PureState4& chi : inputs) {
      const auto marginal = [&](const Operator4& u) {
        const PureState4 out(u.matrix() * chi.amplitudes());
        return partial_trace(DensityMatrix4::from_pure(out), Slot::B);
      };
      distance = std::max(distance,
                          trace_distance(marginal(composed), marginal(target)));
    }
  }
  std::vector<double> durations;
  durations.reserve(seq.ops.size());
  double total = 0.0;
  for (const PulseOp& op : seq.ops) {
    durations.push_back(pulse_duration(op, pc));
    total += durations.back();
  }
  return {composed, target, mode,    distance,
          tolerance, distance <= tolerance, durations, total};
}

// Completes a state to a full unitary whose first column is that state
// (Gram-Schmidt against the computational basis), giving a canonical
// preparation operator to verify sequences against.
inline Operator4 state_prep_target(const PureState4& target) {
  std::vector<CVec<4>> cols{target.amplitudes()};
  for (std::size_t k = 0; k < 4 && cols.size() < 4; ++k) {
    CVec<4> v{};
    v[k] = 1.0;
    for (const CVec<4>& q : cols) {
      const cx c = inner(q, v);
      for (std::size_t i = 0; i < 4; ++i) v[i] -= c * q[i];
    }
    const double n = norm(v);
    if (n < 1e-9) continue;
    for (cx& e : v) e /= n;
    cols.push_back(v);
  }
  CMat<4> m;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t r = 0; r < 4; ++r) m(r, c) = cols[c][r];
  return Operator4::unitary(m);
}

// State-preparation check: the sequence applied to |00> must reach the
// target state; the reported distance is the infidelity.
inline VerificationReport verify_state_prep(const PulseSequence& seq,
                                            const PureState4& target,
                                            double tolerance = kSequenceTol,
                                            const PhysicalConstants& pc = {}) {
  const Operator4 composed = compose_sequence(seq);
  const PureState4 out(composed.matrix() *
                       CVec<4>{cx(1, 0), cx{}, cx{}, cx{}});
  const double distance = 1.0 - fidelity(out, target);
  std::vector<double> durations;
  durations.reserve(seq.ops.size());
  double total = 0.0;
  for (const PulseOp& op : seq.ops) {
    durations.push_back(pulse_duration(op, pc));
    total += durations.back();
  }
  return {composed, state_prep_target(target), VerifyMode::state_level,
          distance, tolerance, distance <= tolerance, durations, total};
}

// ---- ensemble initialization and readout ----

// Effective pure state: the |00><00| ground state.
inline DensityMatrix4 eps_init() {
  CMat<4> m;
  m(0, 0) = 1.0;
  return DensityMatrix4(m);
}

struct ReadoutTriple {
  double ix, iy, iz;
};

inline double expectation(const DensityMatrix2& rho, const Operator2& obs) {
  return std::real((rho.matrix() * obs.matrix()).trace());
}

// Two-acquisition readout of one spin. Acquisition 1 (no pulse) yields the
// transverse components <sx>/2 and <sy>/2; acquisition 2 applies the
// reading-out pulse Y(pi/2) and reads the new x-component, which equals the
// original <sz>/2.
inline ReadoutTriple readout_xyz(const DensityMatrix4& rho, Slot spin) {
  const DensityMatrix2 acq1 = partial_trace(rho, spin);
  const double ix = expectation(acq1, sigma_x()) / 2.0;
  const double iy = expectation(acq1, sigma_y()) / 2.0;
  const DensityMatrix4 pulsed =
      apply_local(rotation_gate(Axis::y, kPi / 2), spin, rho);
  const double iz = expectation(partial_trace(pulsed, spin), sigma_x()) / 2.0;
  return {ix, iy, iz};
}

// Receiver expectation of `obs` conditioned on the sender's computational
// subspace: tr[(P_a (x) obs) rho] / tr[(P_a (x) I) rho]. This is the
// multiplet labelled by the sender spin's |a> subspace.
inline double subspace_expectation(const DensityMatrix4& rho, int alice_outcome,
                                   const Operator2& obs) {
  if (alice_outcome != 0 && alice_outcome != 1)
    throw std::invalid_argument("subspace_expectation: outcome must be 0 or 1");
  if (!obs.is_hermitian())
    throw std::invalid_argument("subspace_expectation: observable not Hermitian");
  CMat<2> pa;
  pa(static_cast<std::size_t>(alice_outcome),
     static_cast<std::size_t>(alice_outcome)) = 1.0;
  const CMat<4> num_op = kron(pa, obs.matrix());
  const CMat<4> den_op = kron(pa, CMat<2>::identity());
  const double den = std::real((den_op * rho.matrix()).trace());
  if (den <= kExactTol)
    throw std::invalid_argument("subspace_expectation: zero-probability subspace");
  return std::real((num_op * rho.matrix()).trace()) / den;
}

}  // namespace rsp::nmr
