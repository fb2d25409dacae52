#pragma once
// Parameter-grid sweeps over the 13 x 17 Bloch-sphere grid and their CSV
// serialization. Output is deterministic and locale-independent: fixed
// decimal formatting, 12 digits, '.' separator, '\n' newlines, rows in
// grid order.

#include <ostream>
#include <string>
#include <vector>

#include "rsp/locc.hpp"
#include "rsp/nmr.hpp"
#include "rsp/textio.hpp"

namespace rsp::sweep {

// theta = 0..pi step pi/12 (13 values); phi = 0..2pi step pi/8 (17 values).
// phi = 0 and phi = 2pi label the same state but stay distinct grid rows.
struct SweepGrid {
  static constexpr int theta_count = nmr::kGridThetaCount;
  static constexpr int phi_count = nmr::kGridPhiCount;
  static constexpr int point_count = theta_count * phi_count;  // 221

  static std::vector<double> thetas() {
    std::vector<double> v;
    v.reserve(theta_count);
    for (int i = 0; i < theta_count; ++i) v.push_back(nmr::grid_theta(i));
    return v;
  }

  static std::vector<double> phis() {
    std::vector<double> v;
    v.reserve(phi_count);
    for (int j = 0; j < phi_count; ++j) v.push_back(nmr::grid_phi(j));
    return v;
  }
};

struct RspRow {
  double theta, phi;
  double ix, iy, iz;
  double fidelity;
};

struct RsmRow {
  double theta, phi;
  char obs;  // 'x' | 'y' | 'z'
  double rho_expect;
  double rho_perp_raw;
  double rho_perp_reversed;
};

// One coherent-mode preparation per grid point; 221 rows.
inline std::vector<RspRow> rsp_sweep() {
  std::vector<RspRow> rows;
  rows.reserve(SweepGrid::point_count);
  for (const double theta : SweepGrid::thetas())
    for (const double phi : SweepGrid::phis()) {
      const auto run = locc::run_rsp_coherent(QubitParams(theta, phi));
      rows.push_back({theta, phi, run.readout.ix, run.readout.iy,
                      run.readout.iz, run.bob_fidelity});
    }
  return rows;
}

// One remote measurement per grid point and observable; 663 rows.
inline std::vector<RsmRow> rsm_sweep() {
  const MeasurementDirection dirs[] = {MeasurementDirection::x_axis(),
                                       MeasurementDirection::y_axis(),
                                       MeasurementDirection::z_axis()};
  const char names[] = {'x', 'y', 'z'};
  std::vector<RsmRow> rows;
  rows.reserve(SweepGrid::point_count * 3);
  for (const double theta : SweepGrid::thetas())
    for (const double phi : SweepGrid::phis())
      for (int k = 0; k < 3; ++k) {
        const auto r = locc::run_rsm(QubitParams(theta, phi), dirs[k]);
        rows.push_back({theta, phi, names[k], r.rho_expect,
                        r.rho_perp_raw_expect, r.rho_perp_reversed_expect});
      }
  return rows;
}

inline void write_rsp_csv(std::ostream& out, const std::vector<RspRow>& rows) {
  using textio::format_fixed;
  out << "theta,phi,Ix,Iy,Iz,fidelity\n";
  for (const RspRow& r : rows) {
    out << format_fixed(r.theta) << ',' << format_fixed(r.phi) << ','
        << format_fixed(r.ix) << ',' << format_fixed(r.iy) << ','
        << format_fixed(r.iz) << ',' << format_fixed(r.fidelity) << '\n';
  }
}

inline void write_rsm_csv(std::ostream& out, const std::vector<RsmRow>& rows) {
  using textio::format_fixed;
  out << "theta,phi,obs,rho_expect,rho_perp_raw,rho_perp_reversed\n";
  for (const RsmRow& r : rows) {
    out << format_fixed(r.theta) << ',' << format_fixed(r.phi) << ',' << r.obs
        << ',' << format_fixed(r.rho_expect) << ','
        << format_fixed(r.rho_perp_raw) << ','
        << format_fixed(r.rho_perp_reversed) << '\n';
  }
}

}  // namespace rsp::sweep
