#pragma once
// Exact dense complex linear algebra for 2- and 4-dimensional quantum
// objects: state vectors, density matrices, operators, local embeddings,
// partial traces and projective measurement. Dimensions are fixed at 2
// (one qubit) and 4 (two qubits); basis ordering is |00>,|01>,|10>,|11>
// with slot A as the left tensor factor.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace rsp {

using cx = std::complex<double>;

// Absolute tolerances: exact algebraic identities vs. values accumulated
// over composed pulse sequences (<= 6 matrix products).
inline constexpr double kExactTol = 1e-12;
inline constexpr double kSequenceTol = 1e-10;
// Density-matrix spectra may dip this far below zero before rejection.
inline constexpr double kEigenvalueFloor = -1e-10;

template <std::size_t N>
using CVec = std::array<cx, N>;

template <std::size_t N>
class CMat {
 public:
  CMat() = default;  // zero matrix

  CMat(std::initializer_list<cx> entries) {
    if (entries.size() != N * N)
      throw std::invalid_argument("CMat: wrong number of entries");
    std::copy(entries.begin(), entries.end(), e_.begin());
  }

  static CMat identity() {
    CMat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  cx& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
  cx operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

  CMat adjoint() const {
    CMat a;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) a(c, r) = std::conj((*this)(r, c));
    return a;
  }

  cx trace() const {
    cx t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  friend CMat operator*(const CMat& a, const CMat& b) {
    CMat p;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        const cx ark = a(r, k);
        if (ark == cx{}) continue;
        for (std::size_t c = 0; c < N; ++c) p(r, c) += ark * b(k, c);
      }
    return p;
  }

  friend CVec<N> operator*(const CMat& m, const CVec<N>& v) {
    CVec<N> w{};
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) w[r] += m(r, c) * v[c];
    return w;
  }

  friend CMat operator+(const CMat& a, const CMat& b) {
    CMat s;
    for (std::size_t i = 0; i < N * N; ++i) s.e_[i] = a.e_[i] + b.e_[i];
    return s;
  }

  friend CMat operator-(const CMat& a, const CMat& b) {
    CMat s;
    for (std::size_t i = 0; i < N * N; ++i) s.e_[i] = a.e_[i] - b.e_[i];
    return s;
  }

  friend CMat operator*(cx s, const CMat& a) {
    CMat m;
    for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = s * a.e_[i];
    return m;
  }

  double max_abs_diff(const CMat& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < N * N; ++i)
      d = std::max(d, std::abs(e_[i] - o.e_[i]));
    return d;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cx& e : e_) s += std::norm(e);
    return std::sqrt(s);
  }

 private:
  std::array<cx, N * N> e_{};
};

// <a|b>, conjugate-linear in the first argument.
template <std::size_t N>
inline cx inner(const CVec<N>& a, const CVec<N>& b) {
  cx s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
inline double norm(const CVec<N>& v) {
  return std::sqrt(std::real(inner(v, v)));
}

template <std::size_t N>
inline CMat<N> outer(const CVec<N>& a, const CVec<N>& b) {
  CMat<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) m(r, c) = a[r] * std::conj(b[c]);
  return m;
}

// Kronecker products; the first argument is the left (slot A) factor.
inline CVec<4> kron(const CVec<2>& a, const CVec<2>& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

inline CMat<4> kron(const CMat<2>& a, const CMat<2>& b) {
  CMat<4> k;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          k(2 * i + p, 2 * j + q) = a(i, j) * b(p, q);
  return k;
}

// Tensor slot. A is the left factor (the sender, 1H); B the right (13C).
enum class Slot { A, B };

inline const char* slot_name(Slot s) { return s == Slot::A ? "A" : "B"; }

// Computational-basis value of `slot` in the 4-dim basis index i.
inline int slot_bit(std::size_t i, Slot s) {
  return s == Slot::A ? static_cast<int>(i >> 1) : static_cast<int>(i & 1);
}

namespace detail {

template <std::size_t N>
inline bool is_hermitian(const CMat<N>& m, double tol) {
  return m.max_abs_diff(m.adjoint()) <= tol;
}

template <std::size_t N>
inline bool is_unitary(const CMat<N>& m, double tol) {
  return (m.adjoint() * m).max_abs_diff(CMat<N>::identity()) <= tol;
}

// Characteristic-polynomial positivity tests (no eigensolver; dims <= 4).
// A Hermitian matrix has all eigenvalues >= floor iff the shifted matrix
// M - floor*I has a characteristic polynomial whose elementary symmetric
// functions are all nonnegative (all roots are real). A small slack
// absorbs rounding noise in the coefficients.
inline bool spectrum_bounded_below(const CMat<2>& m, double floor) {
  const double t = std::real(m.trace());
  const double d = std::real(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = std::max(0.0, t * t - 4.0 * d);
  return (t - std::sqrt(disc)) / 2.0 >= floor - kExactTol;
}

inline bool spectrum_bounded_below(const CMat<4>& m, double floor) {
  CMat<4> shifted = m;
  for (std::size_t i = 0; i < 4; ++i) shifted(i, i) -= floor;
  // Faddeev-LeVerrier: p(x) = x^4 + c3 x^3 + c2 x^2 + c1 x + c0.
  CMat<4> mk = shifted;
  double c[4];
  c[3] = -std::real(mk.trace());
  for (int k = 2; k >= 0; --k) {
    CMat<4> adjusted = mk;
    for (std::size_t i = 0; i < 4; ++i) adjusted(i, i) += c[k + 1];
    mk = shifted * adjusted;
    c[k] = -std::real(mk.trace()) / static_cast<double>(4 - k);
  }
  const double slack = 1e-12;
  // e1 = -c3, e2 = c2, e3 = -c1, e4 = c0 must all be >= 0.
  return -c[3] >= -slack && c[2] >= -slack && -c[1] >= -slack &&
         c[0] >= -slack;
}

}  // namespace detail

// Normalized pure state of one (N=2) or two (N=4) qubits.
template <std::size_t N>
class PureState {
  static_assert(N == 2 || N == 4, "qubit dimensions are 2 and 4");

 public:
  explicit PureState(CVec<N> amplitudes) : a_(amplitudes) {
    if (std::abs(std::real(inner(a_, a_)) - 1.0) > kExactTol)
      throw std::invalid_argument("PureState: squared norm differs from 1");
  }

  const CVec<N>& amplitudes() const { return a_; }
  cx amp(std::size_t i) const { return a_.at(i); }
  static constexpr std::size_t dim() { return N; }

  double max_abs_diff(const PureState& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      d = std::max(d, std::abs(a_[i] - o.a_[i]));
    return d;
  }

 private:
  CVec<N> a_;
};

using PureState2 = PureState<2>;
using PureState4 = PureState<4>;

// Hermitian, unit-trace, positive-semidefinite (within kEigenvalueFloor).
template <std::size_t N>
class DensityMatrix {
  static_assert(N == 2 || N == 4);

 public:
  explicit DensityMatrix(CMat<N> entries) : m_(entries) {
    if (!detail::is_hermitian(m_, kExactTol))
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - cx{1.0}) > kExactTol)
      throw std::invalid_argument("DensityMatrix: trace differs from 1");
    if (!detail::spectrum_bounded_below(m_, kEigenvalueFloor))
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }

  static DensityMatrix from_pure(const PureState<N>& s) {
    return DensityMatrix(outer(s.amplitudes(), s.amplitudes()));
  }

  const CMat<N>& matrix() const { return m_; }
  static constexpr std::size_t dim() { return N; }

  double max_abs_diff(const DensityMatrix& o) const {
    return m_.max_abs_diff(o.m_);
  }

 private:
  CMat<N> m_;
};

using DensityMatrix2 = DensityMatrix<2>;
using DensityMatrix4 = DensityMatrix<4>;

// Linear operator with validated unitary / Hermitian flags.
template <std::size_t N>
class Operator {
  static_assert(N == 2 || N == 4);

 public:
  static Operator unitary(CMat<N> m) {
    if (!detail::is_unitary(m, kExactTol))
      throw std::invalid_argument("Operator: matrix is not unitary");
    return Operator(m, true, detail::is_hermitian(m, kExactTol));
  }

  static Operator hermitian(CMat<N> m) {
    if (!detail::is_hermitian(m, kExactTol))
      throw std::invalid_argument("Operator: matrix is not Hermitian");
    return Operator(m, detail::is_unitary(m, kExactTol), true);
  }

  static Operator general(CMat<N> m) {
    return Operator(m, detail::is_unitary(m, kExactTol),
                    detail::is_hermitian(m, kExactTol));
  }

  const CMat<N>& matrix() const { return m_; }
  bool is_unitary() const { return unitary_; }
  bool is_hermitian() const { return hermitian_; }
  static constexpr std::size_t dim() { return N; }

  Operator adjoint() const { return Operator(m_.adjoint(), unitary_, hermitian_); }

  friend Operator operator*(const Operator& a, const Operator& b) {
    return general(a.m_ * b.m_);
  }

  double max_abs_diff(const Operator& o) const { return m_.max_abs_diff(o.m_); }

 private:
  Operator(CMat<N> m, bool u, bool h) : m_(m), unitary_(u), hermitian_(h) {}

  CMat<N> m_;
  bool unitary_;
  bool hermitian_;
};

using Operator2 = Operator<2>;
using Operator4 = Operator<4>;

inline Operator2 identity2() { return Operator2::unitary(CMat<2>::identity()); }
inline Operator4 identity4() { return Operator4::unitary(CMat<4>::identity()); }

inline Operator2 sigma_x() {
  return Operator2::unitary(CMat<2>{0.0, 1.0, 1.0, 0.0});
}
inline Operator2 sigma_y() {
  return Operator2::unitary(CMat<2>{0.0, cx(0, -1), cx(0, 1), 0.0});
}
inline Operator2 sigma_z() {
  return Operator2::unitary(CMat<2>{1.0, 0.0, 0.0, -1.0});
}

// ---- tensor products (slot A is always the left factor) ----

inline PureState4 tensor_product(const PureState2& a, const PureState2& b) {
  return PureState4(kron(a.amplitudes(), b.amplitudes()));
}

inline Operator4 tensor_product(const Operator2& a, const Operator2& b) {
  return Operator4::general(kron(a.matrix(), b.matrix()));
}

inline DensityMatrix4 tensor_product(const DensityMatrix2& a,
                                     const DensityMatrix2& b) {
  return DensityMatrix4(kron(a.matrix(), b.matrix()));
}

// ---- local application ----

// u embedded as u (x) I or I (x) u depending on the slot.
inline Operator4 embed(const Operator2& u, Slot slot) {
  const CMat<2> eye = CMat<2>::identity();
  return Operator4::general(slot == Slot::A ? kron(u.matrix(), eye)
                                            : kron(eye, u.matrix()));
}

inline PureState4 apply_local(const Operator2& u, Slot slot,
                              const PureState4& s) {
  if (!u.is_unitary())
    throw std::invalid_argument("apply_local: operator is not unitary");
  return PureState4(embed(u, slot).matrix() * s.amplitudes());
}

inline DensityMatrix4 apply_local(const Operator2& u, Slot slot,
                                  const DensityMatrix4& rho) {
  if (!u.is_unitary())
    throw std::invalid_argument("apply_local: operator is not unitary");
  const CMat<4> e = embed(u, slot).matrix();
  return DensityMatrix4(e * rho.matrix() * e.adjoint());
}

inline DensityMatrix4 apply_joint(const Operator4& u,
                                  const DensityMatrix4& rho) {
  if (!u.is_unitary())
    throw std::invalid_argument("apply_joint: operator is not unitary");
  return DensityMatrix4(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

// Reduced state on the kept slot.
inline DensityMatrix2 partial_trace(const DensityMatrix4& rho, Slot keep) {
  CMat<2> r;
  const CMat<4>& m = rho.matrix();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == Slot::A)
          r(i, j) += m(2 * i + k, 2 * j + k);
        else
          r(i, j) += m(2 * k + i, 2 * k + j);
      }
  return DensityMatrix2(r);
}

// <psi|rho|psi>; 1 iff rho is the projector onto psi.
inline double fidelity(const PureState2& psi, const DensityMatrix2& rho) {
  const double f =
      std::real(inner(psi.amplitudes(), rho.matrix() * psi.amplitudes()));
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const PureState4& psi, const DensityMatrix4& rho) {
  const double f =
      std::real(inner(psi.amplitudes(), rho.matrix() * psi.amplitudes()));
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const PureState4& a, const PureState4& b) {
  return std::clamp(std::norm(inner(a.amplitudes(), b.amplitudes())), 0.0, 1.0);
}

// 1 - |tr(u^dag v)| / dim: zero iff v equals u up to a global phase.
template <std::size_t N>
inline double phase_distance(const Operator<N>& u, const Operator<N>& v) {
  if (!u.is_unitary() || !v.is_unitary())
    throw std::invalid_argument("phase_distance: operators must be unitary");
  const double t = std::abs((u.matrix().adjoint() * v.matrix()).trace());
  return std::max(0.0, 1.0 - t / static_cast<double>(N));
}

// Trace distance of single-qubit states, via the closed-form 2x2 spectrum.
inline double trace_distance(const DensityMatrix2& a, const DensityMatrix2& b) {
  const CMat<2> d = a.matrix() - b.matrix();
  const double t = std::real(d.trace());
  const double det = std::real(d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0));
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det));
  return (std::abs((t + disc) / 2.0) + std::abs((t - disc) / 2.0)) / 2.0;
}

// Deterministic seedable generator; owned by a session, never global.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0,1), identical across standard libraries (53-bit mantissa).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_seed() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

struct MeasurementOutcome {
  int outcome;
  PureState4 collapsed;
  double probability;
};

// Deterministic collapse onto a forced computational-basis outcome of one
// slot. Throws if that branch has (numerically) zero probability.
inline MeasurementOutcome project_slot(const PureState4& s, Slot slot,
                                       int outcome) {
  CVec<4> amps = s.amplitudes();
  double p = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    if (slot_bit(i, slot) == outcome) p += std::norm(amps[i]);
  if (p <= kExactTol)
    throw std::invalid_argument("project_slot: zero-probability branch");
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < 4; ++i)
    amps[i] = slot_bit(i, slot) == outcome ? amps[i] * scale : cx{};
  return {outcome, PureState4(amps), p};
}

// Von Neumann measurement of one slot in the computational basis. The
// outcome is sampled with Born probabilities; a zero-probability branch is
// never returned.
inline MeasurementOutcome measure_projective(const PureState4& s, Slot slot,
                                             Rng& rng) {
  double p0 = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    if (slot_bit(i, slot) == 0) p0 += std::norm(s.amp(i));
  p0 = std::clamp(p0, 0.0, 1.0);
  int outcome = rng.uniform() < p0 ? 0 : 1;
  if (outcome == 0 && p0 <= kExactTol) outcome = 1;
  if (outcome == 1 && 1.0 - p0 <= kExactTol) outcome = 0;
  return project_slot(s, slot, outcome);
}

}  // namespace rsp
