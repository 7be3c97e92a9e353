#include <doctest.h>

#include "induced/phase_space.hpp"
#include "support.hpp"

using namespace induced;
using support::cvec;

TEST_CASE("valid real and paired points") {
  CHECK_NOTHROW(validate(PhasePoint::real(support::rvec({1, 2}), support::rvec({0.5, 1.5})), ModelFamily::Flat));
  CHECK_NOTHROW(validate(support::conjugate_pair({1, 1}, {2, 1}), ModelFamily::Flat));
}

TEST_CASE("pairing violations") {
  auto bad = PhasePoint::make(cvec({{1, 1}, 3}), cvec({2, 1}));
  CHECK(support::error_of([&] { validate(bad, ModelFamily::Flat); }) == ErrorCode::BrokenPairing);

  auto complex_p = PhasePoint::make(cvec({1, 3}), cvec({{2, 0.5}, 1}));
  CHECK(support::error_of([&] { validate(complex_p, ModelFamily::Flat); }) == ErrorCode::NonRealFixedPoint);

  auto not_involution = PhasePoint::make(cvec({1, 2, 3}), cvec({1, 2, 3}), {1, 2, 0});
  CHECK(support::error_of([&] { validate(not_involution, ModelFamily::Flat); }) == ErrorCode::BrokenPairing);

  auto signs = support::conjugate_pair({0, 1}, {1, 1}, {1, -1});
  CHECK(support::error_of([&] { validate(signs, ModelFamily::SolitonDeterminant); }) == ErrorCode::BrokenPairing);
}

TEST_CASE("family constraints") {
  auto neg = PhasePoint::real(support::rvec({0, 1}), support::rvec({1, -1}));
  CHECK_NOTHROW(validate(neg, ModelFamily::Flat));
  CHECK(support::error_of([&] { validate(neg, ModelFamily::SolitonDeterminant); }) == ErrorCode::NonPositiveMomentum);
  auto equal = PhasePoint::real(support::rvec({0, 1}), support::rvec({1, 1}));
  CHECK(support::error_of([&] { validate(equal, ModelFamily::Characteristic); }) == ErrorCode::DegenerateMomenta);
}

TEST_CASE("dispersion velocities are derivatives of h") {
  for (Dispersion d : {Dispersion::Quadratic, Dispersion::Cubic, Dispersion::Inverse}) {
    for (int k = 0; k < 20; ++k) {
      const double p = support::uniform(0.3, 3.0) * (k % 2 ? 1.0 : -1.0);
      const double fd = support::derivative([&](double s) { return energy(d, s).real(); }, p, 1e-4);
      CHECK(velocity(d, p).real() == doctest::Approx(fd).epsilon(1e-8));
    }
  }
  CHECK(dispersion_from_string(to_string(Dispersion::Cubic)) == Dispersion::Cubic);
  CHECK_THROWS_AS(dispersion_from_string("quartic"), Error);
}

TEST_CASE("free evolution") {
  auto one = [](double q, double p) { return PhasePoint::real(support::rvec({q}), support::rvec({p})); };
  CHECK(evolve(one(0, 2), Dispersion::Quadratic, 3).q[0].real() == 6.0);
  CHECK(evolve(one(1, 2), Dispersion::Cubic, 1).q[0].real() == 5.0);
  CHECK(evolve(one(0, 2), Dispersion::Inverse, 4).q[0].real() == -1.0);
  CHECK(support::error_of([&] { evolve(one(0, 0), Dispersion::Inverse, 1); }) == ErrorCode::ZeroMomentum);

  const auto pt = support::conjugate_pair({0.3, 1.2}, {0.7, -0.4});
  for (Dispersion d : {Dispersion::Quadratic, Dispersion::Cubic, Dispersion::Inverse}) {
    const auto ab = evolve(evolve(pt, d, 0.75), d, 1.25);
    const auto direct = evolve(pt, d, 2.0);
    CHECK((ab.q - direct.q).norm() < 1e-14);
    CHECK_NOTHROW(validate(direct, ModelFamily::Flat));
    CHECK(hamiltonian(direct, d) == doctest::Approx(hamiltonian(pt, d)).epsilon(1e-15));
  }
}

TEST_CASE("hamiltonian values") {
  CHECK(hamiltonian(PhasePoint::real(support::rvec({0, 0}), support::rvec({1, 2})), Dispersion::Cubic) ==
        doctest::Approx(3.0));
  CHECK(std::abs(hamiltonian(support::conjugate_pair({0, 1}, {1, 1}), Dispersion::Quadratic)) < 1e-15);
  CHECK(hamiltonian(PhasePoint::real(support::rvec({0, 0}), support::rvec({2, 4})), Dispersion::Inverse) ==
        doctest::Approx(0.75));
}

TEST_CASE("lorentz boost") {
  const auto pt = PhasePoint::real(support::rvec({2}), support::rvec({4}));
  const auto b = lorentz_boost(pt, 2.0);
  CHECK(b.q[0].real() == 4.0);
  CHECK(b.p[0].real() == 2.0);
  CHECK((lorentz_boost(pt, 1.0).q - pt.q).norm() == 0.0);

  const auto br = support::conjugate_pair({0.5, 0.2}, {0.8, 0.6});
  const auto composed = lorentz_boost(lorentz_boost(br, 1.5), 0.4);
  const auto single = lorentz_boost(br, 0.6);
  CHECK((composed.q - single.q).norm() < 1e-14);
  CHECK((composed.p - single.p).norm() < 1e-14);
  CHECK_NOTHROW(validate(composed, ModelFamily::SolitonDeterminant));
  CHECK(support::error_of([&] { lorentz_boost(pt, 0.0); }) == ErrorCode::NonPositiveLambda);
}
