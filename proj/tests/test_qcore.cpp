#include <catch2/catch_amalgamated.hpp>

#include "rsp/qcore.hpp"
#include "test_helpers.hpp"

using namespace rsp;
using Catch::Matchers::WithinAbs;

namespace {
PureState2 ket0() { return PureState2({cx(1, 0), cx{}}); }
PureState2 ket1() { return PureState2({cx{}, cx(1, 0)}); }
PureState4 ket(int a, int b) {
  CVec<4> v{};
  v[static_cast<std::size_t>(2 * a + b)] = 1.0;
  return PureState4(v);
}
PureState4 singlet4() {
  const double r = 1.0 / std::sqrt(2.0);
  return PureState4({cx{}, cx(r, 0), cx(-r, 0), cx{}});
}
}  // namespace

TEST_CASE("tensor product fixes the basis ordering", "[qcore]") {
  const PureState4 s = tensor_product(ket0(), ket1());
  REQUIRE(s.max_abs_diff(ket(0, 1)) == 0.0);

  const Operator4 zi = tensor_product(sigma_z(), identity2());
  CMat<4> expected;
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  expected(2, 2) = -1.0;
  expected(3, 3) = -1.0;
  REQUIRE(zi.matrix().max_abs_diff(expected) == 0.0);
}

TEST_CASE("local factors multiply into the joint kron", "[qcore]") {
  const CMat<4> xi = tensor_product(sigma_x(), identity2()).matrix();
  const CMat<4> ix = tensor_product(identity2(), sigma_x()).matrix();
  const CMat<4> product = xi * ix;
  // implementation product vs. plain triple-loop oracle
  REQUIRE(product.max_abs_diff(testutil::reference_mul4(xi, ix)) == 0.0);
  REQUIRE(product.max_abs_diff(tensor_product(sigma_x(), sigma_x()).matrix()) <=
          1e-15);
}

TEST_CASE("apply_local embeds on the right slot", "[qcore]") {
  REQUIRE(apply_local(sigma_x(), Slot::B, ket(0, 0)).max_abs_diff(ket(0, 1)) ==
          0.0);
  REQUIRE(apply_local(sigma_x(), Slot::A, ket(0, 0)).max_abs_diff(ket(1, 0)) ==
          0.0);

  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Operator2 u = testutil::random_unitary2(rng);
    const PureState4 psi = testutil::random_state4(rng);
    const Slot slot = rng.uniform() < 0.5 ? Slot::A : Slot::B;
    // oracle: explicit tensor construction
    const CMat<4> full = slot == Slot::A
                             ? testutil::reference_kron(u.matrix(),
                                                        CMat<2>::identity())
                             : testutil::reference_kron(CMat<2>::identity(),
                                                        u.matrix());
    const CVec<4> expected = full * psi.amplitudes();
    REQUIRE(apply_local(u, slot, psi).max_abs_diff(PureState4(expected)) <=
            1e-15);
  }

  SECTION("identity leaves the state alone") {
    Rng r2(3);
    const PureState4 psi = testutil::random_state4(r2);
    REQUIRE(apply_local(identity2(), Slot::A, psi).max_abs_diff(psi) == 0.0);
  }

  SECTION("density matrices conjugate: U rho U^dag") {
    Rng r3(37);
    for (int i = 0; i < 20; ++i) {
      const Operator2 u = testutil::random_unitary2(r3);
      const DensityMatrix4 rho = testutil::random_density4(r3);
      const CMat<4> full =
          testutil::reference_kron(CMat<2>::identity(), u.matrix());
      const CMat<4> expected = testutil::reference_mul4(
          testutil::reference_mul4(full, rho.matrix()), full.adjoint());
      REQUIRE(apply_local(u, Slot::B, rho).matrix().max_abs_diff(expected) <=
              1e-14);
    }
  }

  SECTION("non-unitary operators are rejected") {
    const Operator2 proj = Operator2::hermitian(CMat<2>{1.0, 0.0, 0.0, 0.0});
    REQUIRE_THROWS_AS(apply_local(proj, Slot::A, ket(0, 0)),
                      std::invalid_argument);
  }
}

TEST_CASE("partial trace", "[qcore]") {
  const DensityMatrix4 bell = DensityMatrix4::from_pure(singlet4());
  const CMat<2> half = cx(0.5, 0) * CMat<2>::identity();
  REQUIRE(partial_trace(bell, Slot::A).matrix().max_abs_diff(half) <= 1e-15);
  REQUIRE(partial_trace(bell, Slot::B).matrix().max_abs_diff(half) <= 1e-15);

  SECTION("product states reduce to their factors") {
    const DensityMatrix2 ra(CMat<2>{0.75, cx(0.1, 0.2), cx(0.1, -0.2), 0.25});
    const DensityMatrix2 rb(CMat<2>{0.5, cx(0, -0.3), cx(0, 0.3), 0.5});
    const DensityMatrix4 joint = tensor_product(ra, rb);
    REQUIRE(partial_trace(joint, Slot::A).max_abs_diff(ra) <= 1e-15);
    REQUIRE(partial_trace(joint, Slot::B).max_abs_diff(rb) <= 1e-15);
  }

  SECTION("random states match the index-sum oracle") {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
      const DensityMatrix4 rho = testutil::random_density4(rng);
      for (const Slot keep : {Slot::A, Slot::B}) {
        const CMat<2> oracle = testutil::reference_ptrace(rho.matrix(), keep);
        REQUIRE(partial_trace(rho, keep).matrix().max_abs_diff(oracle) <=
                1e-15);
      }
    }
  }
}

TEST_CASE("fidelity", "[qcore]") {
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    const double th = rng.uniform() * kPi, ph = rng.uniform() * 2 * kPi;
    const double c = std::cos(th / 2), s = std::sin(th / 2);
    const PureState2 psi({cx(c, 0), s * std::polar(1.0, ph)});
    REQUIRE_THAT(fidelity(psi, DensityMatrix2::from_pure(psi)),
                 WithinAbs(1.0, 1e-12));
    // closed form: overlap with |0> is cos^2(theta/2)
    REQUIRE_THAT(fidelity(ket0(), DensityMatrix2::from_pure(psi)),
                 WithinAbs(c * c, 1e-12));
  }
  REQUIRE(fidelity(ket0(), DensityMatrix2::from_pure(ket1())) == 0.0);
}

TEST_CASE("phase distance", "[qcore]") {
  Rng rng(29);
  const Operator2 u = testutil::random_unitary2(rng);
  for (const double alpha : {0.0, 0.3, kPi / 2, 4.0}) {
    const Operator2 v = Operator2::unitary(std::polar(1.0, alpha) * u.matrix());
    REQUIRE_THAT(phase_distance(u, v), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(phase_distance(v, u), WithinAbs(0.0, 1e-14));
  }
  REQUIRE_THAT(phase_distance(identity2(), sigma_x()), WithinAbs(1.0, 1e-15));

  SECTION("closed form for a diagonal phase offset") {
    for (const double eps : {1e-3, 0.1, 1.0}) {
      const Operator2 d =
          Operator2::unitary(CMat<2>{1.0, 0.0, 0.0, std::polar(1.0, eps)});
      const double expected = 1.0 - std::abs(cx(1, 0) + std::polar(1.0, eps)) / 2.0;
      REQUIRE_THAT(phase_distance(identity2(), d), WithinAbs(expected, 1e-14));
    }
  }

  SECTION("symmetry on random pairs") {
    for (int i = 0; i < 20; ++i) {
      const Operator2 a = testutil::random_unitary2(rng);
      const Operator2 b = testutil::random_unitary2(rng);
      REQUIRE_THAT(phase_distance(a, b), WithinAbs(phase_distance(b, a), 1e-15));
    }
  }

  SECTION("requires unitary inputs") {
    const Operator2 proj = Operator2::hermitian(CMat<2>{1.0, 0.0, 0.0, 0.0});
    REQUIRE_THROWS_AS(phase_distance(proj, identity2()), std::invalid_argument);
  }
}

TEST_CASE("projective measurement", "[qcore]") {
  SECTION("singlet collapses to |01> or -|10>") {
    for (const int forced : {0, 1}) {
      const MeasurementOutcome m = project_slot(singlet4(), Slot::A, forced);
      REQUIRE_THAT(m.probability, WithinAbs(0.5, 1e-15));
      if (forced == 0) {
        REQUIRE(m.collapsed.max_abs_diff(ket(0, 1)) <= 1e-15);
      } else {
        REQUIRE(std::abs(m.collapsed.amp(2) - cx(-1, 0)) <= 1e-15);
      }
    }
  }

  SECTION("eigenstates measure deterministically") {
    Rng rng(5);
    const MeasurementOutcome m = measure_projective(ket(0, 1), Slot::A, rng);
    REQUIRE(m.outcome == 0);
    REQUIRE(m.probability == 1.0);
    REQUIRE_THROWS_AS(project_slot(ket(0, 1), Slot::A, 1),
                      std::invalid_argument);
  }

  SECTION("Born frequencies over 10^4 seeded trials") {
    Rng rng(424242);
    int zeros = 0;
    for (int i = 0; i < 10000; ++i)
      if (measure_projective(singlet4(), Slot::A, rng).outcome == 0) ++zeros;
    const double freq = zeros / 10000.0;
    REQUIRE(freq > 0.485);  // 3 sigma binomial around 1/2
    REQUIRE(freq < 0.515);
  }

  SECTION("branch probabilities sum to one and outcomes replay by seed") {
    Rng rng(99);
    const PureState4 psi = testutil::random_state4(rng);
    const double p0 = project_slot(psi, Slot::A, 0).probability;
    const double p1 = project_slot(psi, Slot::A, 1).probability;
    REQUIRE_THAT(p0 + p1, WithinAbs(1.0, 1e-12));

    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i)
      REQUIRE(measure_projective(psi, Slot::A, a).outcome ==
              measure_projective(psi, Slot::A, b).outcome);
  }
}

TEST_CASE("type invariants are validated on construction", "[qcore]") {
  REQUIRE_THROWS_AS(PureState2({cx(1, 0), cx(1, 0)}), std::invalid_argument);
  REQUIRE_THROWS_AS(DensityMatrix2(CMat<2>{0.5, cx(0, 0.5), cx(0, 0.5), 0.5}),
                    std::invalid_argument);  // not Hermitian
  REQUIRE_THROWS_AS(DensityMatrix2(CMat<2>{0.9, 0.0, 0.0, 0.9}),
                    std::invalid_argument);  // trace != 1
  CMat<4> neg;
  neg(0, 0) = 1.3;
  neg(1, 1) = -0.3;
  REQUIRE_THROWS_AS(DensityMatrix4(neg), std::invalid_argument);
  CMat<2> neg2;
  neg2(0, 0) = 1.000001;
  neg2(1, 1) = -0.000001;
  REQUIRE_THROWS_AS(DensityMatrix2(neg2), std::invalid_argument);

  // rank-deficient but valid states pass the spectrum test
  REQUIRE_NOTHROW(DensityMatrix4::from_pure(ket(0, 0)));
  REQUIRE_NOTHROW(DensityMatrix4::from_pure(singlet4()));

  REQUIRE_THROWS_AS(Operator2::unitary(CMat<2>{1.0, 0.0, 0.0, 2.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(Operator2::hermitian(CMat<2>{0.0, cx(0, 1), cx(0, 1), 0.0}),
                    std::invalid_argument);
}

TEST_CASE("a local unitary never moves the other marginal", "[qcore]") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix4 rho = testutil::random_density4(rng);
    const Operator2 u = testutil::random_unitary2(rng);
    const DensityMatrix2 before = partial_trace(rho, Slot::B);
    const DensityMatrix2 after =
        partial_trace(apply_local(u, Slot::A, rho), Slot::B);
    REQUIRE(before.max_abs_diff(after) <= 1e-12);
  }
}
