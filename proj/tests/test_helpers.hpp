#pragma once
// Shared test utilities: independent reference implementations (textbook
// index formulas, kept separate from the library code paths they check)
// and seeded random generators.

#include <cmath>
#include <complex>

#include "rsp/bloch.hpp"
#include "rsp/qcore.hpp"

namespace testutil {

using rsp::CMat;
using rsp::CVec;
using rsp::cx;

// Plain triple-loop product, used as the multiplication oracle.
inline CMat<4> reference_mul4(const CMat<4>& a, const CMat<4>& b) {
  CMat<4> p;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      cx s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += a(r, k) * b(k, c);
      p(r, c) = s;
    }
  return p;
}

// K[2i+p][2j+q] = A[i][j] * B[p][q]
inline CMat<4> reference_kron(const CMat<2>& a, const CMat<2>& b) {
  CMat<4> k;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          k(2 * i + p, 2 * j + q) = a(i, j) * b(p, q);
  return k;
}

// Direct double-index sums for both reduced states.
inline CMat<2> reference_ptrace(const CMat<4>& rho, rsp::Slot keep) {
  CMat<2> r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t ia = i >> 1, ib = i & 1;
      const std::size_t ja = j >> 1, jb = j & 1;
      if (keep == rsp::Slot::A && ib == jb) r(ia, ja) += rho(i, j);
      if (keep == rsp::Slot::B && ia == ja) r(ib, jb) += rho(i, j);
    }
  return r;
}

inline cx reference_trace_product(const CMat<2>& a, const CMat<2>& b) {
  cx t = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) t += a(i, k) * b(k, i);
  return t;
}

inline rsp::QubitParams random_params(rsp::Rng& rng) {
  return {rng.uniform() * rsp::kPi, rng.uniform() * 2.0 * rsp::kPi};
}

// Axis-angle unitary exp(-i a n.sigma / 2) with a random axis, times a
// random global phase; Haar-ish but more importantly arbitrary.
inline rsp::Operator2 random_unitary2(rsp::Rng& rng) {
  const double a = rng.uniform() * 2.0 * rsp::kPi;
  const double th = std::acos(2.0 * rng.uniform() - 1.0);
  const double ph = rng.uniform() * 2.0 * rsp::kPi;
  const double nx = std::sin(th) * std::cos(ph);
  const double ny = std::sin(th) * std::sin(ph);
  const double nz = std::cos(th);
  const double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
  const cx phase = std::polar(1.0, rng.uniform() * 2.0 * rsp::kPi);
  return rsp::Operator2::unitary(CMat<2>{
      phase * cx(c, -s * nz), phase * cx(-s * ny, -s * nx),
      phase * cx(s * ny, -s * nx), phase * cx(c, s * nz)});
}

inline rsp::PureState4 random_state4(rsp::Rng& rng) {
  CVec<4> v;
  for (auto& e : v) {
    // Box-Muller
    const double u1 = std::max(rng.uniform(), 1e-300);
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    e = cx(r * std::cos(2.0 * rsp::kPi * u2),
           r * std::sin(2.0 * rsp::kPi * u2));
  }
  double n = 0.0;
  for (const auto& e : v) n += std::norm(e);
  n = std::sqrt(n);
  for (auto& e : v) e /= n;
  return rsp::PureState4(v);
}

// Random mixture of pure states: a generic full-rank density matrix.
inline rsp::DensityMatrix4 random_density4(rsp::Rng& rng) {
  CMat<4> m;
  double wsum = 0.0;
  double w[3];
  for (double& x : w) {
    x = rng.uniform() + 0.1;
    wsum += x;
  }
  for (int k = 0; k < 3; ++k) {
    const rsp::PureState4 s = random_state4(rng);
    const CMat<4> p = rsp::outer(s.amplitudes(), s.amplitudes());
    m = m + (cx(w[k] / wsum, 0.0) * p);
  }
  return rsp::DensityMatrix4(m);
}

}  // namespace testutil
