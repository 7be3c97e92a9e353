#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "induced/models.hpp"
#include "support.hpp"

using namespace induced;
using support::cvec;
using support::rvec;

namespace {

// Leibniz expansion, no pivoting, no scaling.
Complex leibniz(const CMatrix& m) {
  const Index n = m.rows();
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    int inversions = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) inversions += perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)];
    }
    Complex term = inversions % 2 ? -1.0 : 1.0;
    for (Index i = 0; i < n; ++i) term *= m(i, perm[static_cast<size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::array<Complex, 2> raw_soliton_factors(const PhasePoint& pt, double x) {
  const Index n = pt.size();
  CMatrix plus(n, n), minus(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Complex v = 2.0 * pt.p[i] / (pt.p[i] + pt.p[j]);
      plus(i, j) = v;
      minus(i, j) = -v;
    }
    const Complex e = static_cast<double>(pt.epsilon[static_cast<size_t>(i)]) * std::exp(-2.0 * pt.p[i] * (pt.q[i] - x));
    plus(i, i) += e;
    minus(i, i) += e;
  }
  return {leibniz(plus), leibniz(minus)};
}

Complex raw_characteristic(const ModelSpec& model, const PhasePoint& pt, double x) {
  CMatrix m = build_W(model, pt.p);
  m.diagonal() += (pt.q.array() - x).matrix();
  return leibniz(m);
}

PhasePoint random_soliton_point(int n, bool with_pair) {
  CVector q(n), p(n);
  std::vector<Index> pairing(static_cast<size_t>(n));
  std::vector<int> eps(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    q[i] = support::uniform(-2, 2);
    p[i] = support::uniform(0.4, 1.6);
    pairing[static_cast<size_t>(i)] = i;
    eps[static_cast<size_t>(i)] = support::uniform(0, 1) < 0.5 ? 1 : -1;
  }
  if (with_pair && n >= 2) {
    q[0] = Complex(q[0].real(), support::uniform(-1, 1));
    q[1] = std::conj(q[0]);
    p[0] = Complex(p[0].real(), support::uniform(0.2, 1));
    p[1] = std::conj(p[0]);
    pairing[0] = 1;
    pairing[1] = 0;
    eps[1] = eps[0];
  }
  return PhasePoint::make(q, p, pairing, eps);
}

}  // namespace

TEST_CASE("polynomial product values") {
  const auto pt = PhasePoint::real(rvec({3, -1}), rvec({1, -1}));
  const ModelSpec m = PolynomialProduct{9.0};
  CHECK(eval_f(m, pt, 0.0).value == doctest::Approx(-5.25));
  CHECK(eval_f_dx(m, pt, 0.0) == doctest::Approx(-2.0));
  const ModelSpec plain = PolynomialProduct{9.0, Normalization::Plain};
  CHECK(eval_f(plain, pt, 0.0).value == doctest::Approx(-12.0));
  CHECK(polynomial_constant(PolynomialProduct{8.0}, 3) == 8.0);

  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 3;
    RVector q(n), p(n);
    for (int i = 0; i < n; ++i) {
      q[i] = support::uniform(-3, 3);
      p[i] = support::uniform(-1, 1);
    }
    const ModelSpec model = PolynomialProduct{support::uniform(-5, 5)};
    const auto point = PhasePoint::real(q, p);
    const double x = support::uniform(-4, 4);
    const double fd = support::derivative([&](double s) { return eval_f(model, point, s).value; }, x);
    CHECK(eval_f_dx(model, point, x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("sinh pair") {
  const auto pt = PhasePoint::real(rvec({1, 2}), rvec({0, 0}));
  CHECK(eval_f(SinhPair{0.0}, pt, 1.0).value == 0.0);
  const auto paired = support::conjugate_pair({0.3, 0.8}, {0.5, -0.2});
  const auto e = eval_f(SinhPair{0.7}, paired, 0.4);
  CHECK(e.imag_residue < 1e-12);
  const Complex direct = std::sinh(Complex(0.3, 0.8) - 0.4) * std::sinh(Complex(0.3, -0.8) - 0.4) - 0.7;
  CHECK(e.value == doctest::Approx(direct.real()));
  CHECK(support::error_of([&] { eval_f(SinhPair{1.0}, PhasePoint::real(rvec({1}), rvec({1})), 0.0); }) ==
        ErrorCode::InvalidPoint);
}

TEST_CASE("soliton determinant one particle") {
  const auto pt = PhasePoint::make(cvec({0}), cvec({2}), {}, {-1});
  const ModelSpec kdv = KdVDeterminant{};
  CHECK(eval_f(kdv, pt, 0.0).value == doctest::Approx(0.0));
  const auto factors = eval_factors(kdv, pt, 0.0);
  REQUIRE(factors.size() == 2);
  CHECK(factors[0] == doctest::Approx(0.0));
  CHECK(factors[1] == doctest::Approx(-2.0));

  // Plain soliton: the root of the product sits at q.
  const auto free = PhasePoint::make(cvec({1.5}), cvec({0.8}));
  CHECK(std::abs(eval_f(kdv, free, 1.5).value) < 1e-14);
  CHECK(std::abs(eval_f(kdv, free, 1.4).value) > 1e-3);
  CHECK(support::error_of([&] { eval_factors(PolynomialProduct{1.0}, free, 0.0); }) == ErrorCode::NotFactorizable);
}

TEST_CASE("soliton determinant agrees with brute force") {
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 3;
    const auto pt = random_soliton_point(n, k % 2 == 1);
    const double x = support::uniform(-3, 3);
    for (const ModelSpec& m : {ModelSpec{KdVDeterminant{}}, ModelSpec{SinhGordonDeterminant{}}}) {
      const auto raw = raw_soliton_factors(pt, x);
      const auto f = eval_factors(m, pt, x);
      CHECK(f[0] == doctest::Approx(raw[0].real()).epsilon(1e-9).scale(1.0));
      CHECK(f[1] == doctest::Approx(raw[1].real()).epsilon(1e-9).scale(1.0));
      CHECK(std::abs(raw[0].imag()) < 1e-9 * (1 + std::abs(raw[0])));
      const auto e = eval_f(m, pt, x);
      CHECK(e.value == doctest::Approx(f[0] * f[1]).epsilon(1e-12).scale(1.0));
      CHECK(e.imag_residue <= 1e-9 * std::max(1.0, std::abs(e.value)));
      const double fd = support::derivative([&](double s) { return eval_f(m, pt, s).value; }, x, 1e-4);
      CHECK(eval_f_dx(m, pt, x) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("soliton determinant far from the centre keeps its sign") {
  const auto pt = PhasePoint::make(cvec({0, 1}), cvec({1.0, 2.0}), {}, {1, -1});
  const ModelSpec m = KdVDeterminant{};
  for (double x : {-400.0, -150.0, 150.0, 400.0}) {
    const auto f = eval_factors(m, pt, x);
    CHECK(std::isfinite(f[0]));
    CHECK(std::isfinite(f[1]));
    CHECK(f[0] != 0.0);
    const double fd = support::derivative([&](double s) { return eval_f(m, pt, s).value; }, x, 1e-4);
    const double f_abs = std::abs(eval_f(m, pt, x).value);
    CHECK(std::abs(eval_f_dx(m, pt, x) - fd) <= 1e-6 * std::max({std::abs(fd), f_abs, 1e-8}));
  }
  // Moderate x: the sign of each factor matches the raw determinant.
  for (double x : {-6.0, -2.0, 0.5, 3.0, 7.0}) {
    const auto raw = raw_soliton_factors(pt, x);
    const auto f = eval_factors(m, pt, x);
    CHECK((f[0] > 0) == (raw[0].real() > 0));
    CHECK((f[1] > 0) == (raw[1].real() > 0));
  }
}

TEST_CASE("characteristic determinants") {
  const CVector p = cvec({1, -1});
  const CMatrix wcm = build_W(CharacteristicCM{1.0}, p);
  CHECK(wcm(0, 1).real() == doctest::Approx(0.5));
  CHECK(wcm(1, 0).real() == doctest::Approx(-0.5));
  CHECK(wcm(0, 0).real() == 0.0);
  const CMatrix wrs = build_W(CharacteristicRS{1.0}, p);
  CHECK(wrs(0, 1).real() == doctest::Approx(0.5));
  CHECK(wrs(1, 0).real() == doctest::Approx(0.5));
  CHECK(support::error_of([&] { build_W(CharacteristicCM{1.0}, cvec({1, 1})); }) == ErrorCode::DegenerateMomenta);

  for (int k = 0; k < 50; ++k) {
    const double gamma = support::uniform(0.2, 2);
    const auto pt = PhasePoint::real(rvec({support::uniform(-2, 2), support::uniform(-2, 2)}),
                                     rvec({support::uniform(-2, -0.2), support::uniform(0.2, 2)}));
    const double x = support::uniform(-3, 3);
    const Complex p12 = pt.p[0] - pt.p[1];
    const Complex expected = (pt.q[0] - x) * (pt.q[1] - x) + gamma * gamma / (p12 * p12);
    CHECK(eval_f(CharacteristicCM{gamma}, pt, x).value == doctest::Approx(expected.real()));
  }

  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 3;
    RVector q(n), pr(n);
    for (int i = 0; i < n; ++i) {
      q[i] = support::uniform(-2, 2);
      pr[i] = support::uniform(-2, 2) + 3.0 * i;
    }
    const auto pt = PhasePoint::real(q, pr);
    const double x = support::uniform(-3, 3);
    for (const ModelSpec& m : {ModelSpec{CharacteristicCM{0.7}}, ModelSpec{CharacteristicRS{0.7}}}) {
      CHECK(eval_f(m, pt, x).value == doctest::Approx(raw_characteristic(m, pt, x).real()).epsilon(1e-10));
      const double fd = support::derivative([&](double s) { return eval_f(m, pt, s).value; }, x);
      CHECK(eval_f_dx(m, pt, x) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
    // Leading behaviour (-x)^N.
    const double big = 1e4;
    CHECK(eval_f(CharacteristicRS{0.7}, pt, big).value / std::pow(-big, n) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("relativistic pair") {
  const auto pt = PhasePoint::real(rvec({1, -2}), rvec({0.5, 2}));
  const double x = 0.3;
  const double expected = (1 - x) * (-2 - x) - 0.25 * 3.0 * (4.0 + 0.25);
  CHECK(eval_f(RelativisticPair{3.0}, pt, x).value == doctest::Approx(expected));
  CHECK(support::error_of([&] { validate(PhasePoint::real(rvec({1, 2}), rvec({0, 1})), RelativisticPair{1.0}); }) ==
        ErrorCode::ZeroMomentum);
}

TEST_CASE("translation covariance") {
  const std::vector<std::pair<ModelSpec, PhasePoint>> cases = {
      {PolynomialProduct{2.0}, support::conjugate_pair({0.2, 0.5}, {1, 0.3})},
      {SinhPair{0.4}, support::conjugate_pair({0.2, 0.5}, {1, 0.3})},
      {KdVDeterminant{}, random_soliton_point(3, true)},
      {SinhGordonDeterminant{}, random_soliton_point(2, false)},
      {CharacteristicRS{0.5}, PhasePoint::real(rvec({0, 1, 2}), rvec({-1, 0.5, 2}))},
      {RelativisticPair{-1.0}, PhasePoint::real(rvec({0, 1}), rvec({0.7, 1.2}))},
  };
  for (const auto& [model, pt] : cases) {
    for (double c : {-2.5, 0.75, 4.0}) {
      PhasePoint shifted = pt;
      shifted.q.array() += c;
      const double x = 0.3;
      CHECK(eval_f(model, shifted, x + c).value == doctest::Approx(eval_f(model, pt, x).value).epsilon(1e-9));
    }
  }
}

TEST_CASE("jets match finite differences in q") {
  const std::vector<std::pair<ModelSpec, PhasePoint>> cases = {
      {PolynomialProduct{2.0, Normalization::Plain}, PhasePoint::real(rvec({0.1, 1.3, -0.7}), rvec({1, 2, 3}))},
      {SinhPair{0.4}, support::conjugate_pair({0.2, 0.5}, {1, 0.3})},
      {KdVDeterminant{}, random_soliton_point(3, true)},
      {CharacteristicCM{0.8}, PhasePoint::real(rvec({0, 1, 2}), rvec({-1, 0.5, 2}))},
      {RelativisticPair{2.0}, PhasePoint::real(rvec({0, 1}), rvec({0.7, 1.2}))},
  };
  const double x = 0.35, h = 1e-5;
  for (const auto& [model, pt] : cases) {
    const Jet j = jet(model, pt, x, 2);
    const Index n = pt.size();
    for (Index a = 0; a < n; ++a) {
      auto shifted = [&](double s) {
        PhasePoint moved = pt;
        moved.q[a] += s;
        return jet(model, moved, x, 1);
      };
      const Jet hi = shifted(h), lo = shifted(-h);
      const Complex grad_fd = (hi.value - lo.value) / (2 * h);
      CHECK(std::abs(grad_fd - j.grad[a]) < 1e-6 * (1 + std::abs(j.grad[a])));
      for (Index b = 0; b < n; ++b) {
        const Complex hess_fd = (hi.grad[b] - lo.grad[b]) / (2 * h);
        CHECK(std::abs(hess_fd - j.hess(a, b)) < 1e-5 * (1 + std::abs(j.hess(a, b))));
      }
    }
  }
}

TEST_CASE("model metadata") {
  CHECK(default_dispersion(KdVDeterminant{}) == Dispersion::Cubic);
  CHECK(default_dispersion(SinhGordonDeterminant{}) == Dispersion::Inverse);
  CHECK(default_dispersion(CharacteristicCM{}) == Dispersion::Quadratic);
  CHECK(factor_count(SinhGordonDeterminant{}) == 2);
  CHECK(factor_count(SinhPair{}) == 1);
  CHECK(is_relativistic(RelativisticPair{}));
  CHECK(!is_relativistic(KdVDeterminant{}));
}
