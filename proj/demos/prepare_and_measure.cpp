// Minimal library tour: prepare a qubit remotely in both protocol modes,
// then reproduce its measurement statistics without ever sending the state.

#include <cstdio>

#include "rsp/rsp.hpp"

using namespace rsp;

int main() {
  const QubitParams target(kPi / 3, 5 * kPi / 8);

  // Measured mode: shared singlet, projective measurement, one classical
  // bit, conditional correction.
  locc::Session session({2024, locc::Mode::measured});
  session.share_epr();
  const int bit = session.alice_prepare_measure(target);
  session.bob_correct(target.phi);
  std::printf("measured mode: sent bit %d, receiver fidelity %.15f\n", bit,
              fidelity(make_qubit(target), session.bob_marginal()));

  // Coherent mode: the same protocol as one unitary circuit on the
  // effective pure state, read out spin by spin.
  const auto coherent = locc::run_rsp_coherent(target);
  std::printf("coherent mode: readout (%.6f, %.6f, %.6f), fidelity %.15f\n",
              coherent.readout.ix, coherent.readout.iy, coherent.readout.iz,
              coherent.bob_fidelity);

  // Remote measurement: statistics of sigma_x on a state only the sender
  // knows, recovered from the receiver's two multiplets.
  const auto rsm = locc::run_rsm(target, MeasurementDirection::x_axis());
  std::printf("remote measurement of x: target branch %+.6f, "
              "complement reversed %+.6f\n",
              rsm.sim_rho_expect, -rsm.sim_rho_perp_expect);

  // Pulse-level view: compile the entangling sequence and check it.
  const auto report = nmr::verify_state_prep(nmr::epr_sequence(), singlet());
  std::printf("entangler '%s': infidelity %.2e, duration %.3f ms\n",
              nmr::epr_sequence().text().c_str(), report.distance,
              report.total_duration_s * 1e3);
  return 0;
}
