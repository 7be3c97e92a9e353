#include <doctest.h>

#include <cmath>

#include "induced/oracles.hpp"
#include "support.hpp"

using namespace induced;
using support::cvec;
using support::rvec;

namespace {

TrackerOptions dense() {
  TrackerOptions o;
  o.roots.n_scan = 2048;
  return o;
}

EomState state_at(const Sampler& sample, double t, double h = 1e-3) {
  const auto st = local_derivatives(sample, t, h);
  EomState s;
  s.x.resize(static_cast<Index>(st.size()));
  s.v.resize(s.x.size());
  s.a.resize(s.x.size());
  for (size_t i = 0; i < st.size(); ++i) {
    s.x[static_cast<Index>(i)] = st[i].x;
    s.v[static_cast<Index>(i)] = st[i].v;
    s.a[static_cast<Index>(i)] = st[i].a;
  }
  return s;
}

CauchyData pair_data(double x12, double v12, double centre = 0.0, double vc = 0.0) {
  return {rvec({centre + 0.5 * x12, centre - 0.5 * x12}), rvec({vc + 0.5 * v12, vc - 0.5 * v12}), 0.0};
}

}  // namespace

TEST_CASE("two-body closed form") {
  const auto data = pair_data(1.0, 2.0);
  const auto s0 = poly2_closed_form(2.0, data, 0.0);
  CHECK(s0.sum == 0.0);
  CHECK(s0.x12_sq == 1.0);
  for (double t : {-0.7, 0.2, 1.9}) {
    CHECK(poly2_closed_form(2.0, data, t).x12_sq == doctest::Approx(1 + 4 * t - 4 * t * t));
    CHECK(poly2_closed_form_printed(2.0, data, t).x12_sq == doctest::Approx(1 + 4 * t - 12 * t * t));
  }
  const auto times = poly2_event_times(2.0, data);
  REQUIRE(times.size() == 2);
  CHECK(times[0] == doctest::Approx(0.5 * (1 - std::sqrt(2.0))).epsilon(1e-14));
  CHECK(times[1] == doctest::Approx(0.5 * (1 + std::sqrt(2.0))).epsilon(1e-14));
  CHECK(poly2_event_times(9.0, pair_data(4.0, 1.0)).empty());
  CHECK(poly2_roots(2.0, data, 5.0).empty());
  CHECK(support::error_of([] { poly2_closed_form(4.0, pair_data(2.0, 1.0), 1.0); }) == ErrorCode::DegenerateData);
  // Printed and corrected forms agree only when C^2 = C.
  CHECK(poly2_closed_form_printed(1.0, pair_data(3.0, 1.0), 2.0).x12_sq ==
        doctest::Approx(poly2_closed_form(1.0, pair_data(3.0, 1.0), 2.0).x12_sq));
}

TEST_CASE("closed form solves the two-body equation of motion") {
  for (int trial = 0; trial < 40; ++trial) {
    const double C = support::uniform(-5, 5);
    const auto data = pair_data(support::uniform(-3, 3), support::uniform(-2, 2), support::uniform(-1, 1),
                                support::uniform(-1, 1));
    const double x0 = data.x[0] - data.x[1];
    if (std::abs(x0 * x0 - C) < 0.1) continue;
    for (double t : {-1.5, -0.3, 0.8}) {
      const auto sq = [&](double s) { return poly2_closed_form(C, data, s).x12_sq; };
      if (sq(t) < 0.05 || std::abs(sq(t) - C) < 0.05) continue;
      EomState s;
      const double sum = poly2_closed_form(C, data, t).sum;
      const auto x12 = [&](double s) { return std::sqrt(sq(s)); };
      const double d1 = support::derivative(x12, t, 1e-4);
      const double h = 1e-4;
      const double d2 = (x12(t + h) - 2 * x12(t) + x12(t - h)) / (h * h);
      s.x = rvec({0.5 * (sum + x12(t)), 0.5 * (sum - x12(t))});
      s.v = rvec({0.5 * (data.v.sum() + d1), 0.5 * (data.v.sum() - d1)});
      s.a = rvec({0.5 * d2, -0.5 * d2});
      s.C = C;
      CHECK(residual_eom(EomKind::Polynomial2, s) < 1e-4 * (1 + std::abs(d2)));
    }
  }
}

TEST_CASE("closed form agrees with the root finder") {
  for (int trial = 0; trial < 30; ++trial) {
    const double C = support::uniform(-5, 5);
    const auto data = pair_data(support::uniform(-3, 3), support::uniform(-2, 2), support::uniform(-1, 1));
    const double x0 = data.x[0] - data.x[1];
    if (std::abs(x0 * x0 - C) < 0.05 || x0 == 0.0) continue;
    const auto pt = cauchy_poly2(C, data);
    for (double t : {-4.0, -1.0, 0.0, 2.5, 6.0}) {
      const auto expected = poly2_roots(C, data, t);
      if (expected.size() == 2 && expected[1] - expected[0] < 1e-3) continue;
      const auto snap = snapshot(PolynomialProduct{C}, pt, Dispersion::Quadratic, t, dense());
      const auto got = snap.positions(std::nullopt);
      REQUIRE(got.size() == expected.size());
      for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-9);
    }
  }
}

TEST_CASE("repulsion keeps x12^2 above C") {
  const auto data = pair_data(4.0, -1.3);
  for (double t = -20; t <= 20; t += 0.5) CHECK(poly2_closed_form(9.0, data, t).x12_sq >= 9.0);
}

TEST_CASE("five point stencil") {
  const auto f = [](double t) { return 2 - t + 3 * t * t - 0.5 * t * t * t; };
  const double h = 0.1, t = 0.7;
  const auto s = five_point({f(t - 2 * h), f(t - h), f(t), f(t + h), f(t + 2 * h)}, h);
  CHECK(s.x == doctest::Approx(f(t)));
  CHECK(s.v == doctest::Approx(-1 + 6 * t - 1.5 * t * t).epsilon(1e-12));
  CHECK(s.a == doctest::Approx(6 - 3 * t).epsilon(1e-12));
}

TEST_CASE("equations of motion along tracked roots") {
  SUBCASE("free motion") {
    EomState s{rvec({0, 1}), rvec({1, 2}), rvec({0, 0}), 0.0};
    CHECK(residual_eom(EomKind::Polynomial2, s) == 0.0);
  }
  SUBCASE("polynomial pair") {
    const auto pt = cauchy_poly2(2.5, pair_data(3.0, -1.0, 0.2, 0.4));
    const auto sampler = make_sampler(PolynomialProduct{2.5}, pt, Dispersion::Quadratic, dense());
    for (double t : {-2.0, 0.5, 3.0}) {
      auto s = state_at(sampler, t);
      s.C = 2.5;
      CAPTURE(t);
      CHECK(residual_eom(EomKind::Polynomial2, s) <= 1e-5);
    }
  }
  SUBCASE("sinh pair") {
    for (const auto [C, x12] : {std::pair{0.3, 1.5}, std::pair{-0.4, 1.0}, std::pair{2.0, 2.6}}) {
      const auto pt = cauchy_sinh2(C, pair_data(x12, 0.6));
      const auto sampler = make_sampler(SinhPair{C}, pt, Dispersion::Quadratic, dense());
      for (double t : {-0.5, 0.0, 0.7}) {
        auto s = state_at(sampler, t);
        if (s.x.size() != 2) continue;
        std::swap(s.x[0], s.x[1]);
        std::swap(s.v[0], s.v[1]);
        std::swap(s.a[0], s.a[1]);
        s.C = C;
        CHECK(residual_eom(EomKind::Sinh2, s) <= 1e-5);
        // The force separates a repelling pair: the left root accelerates left.
        if (C > 0 && s.x[0] > s.x[1]) CHECK(s.a[1] < 0);
      }
    }
  }
  SUBCASE("relativistic pair in cone variables") {
    const auto pt = PhasePoint::real(rvec({-1.0, 1.5}), rvec({0.8, 1.7}));
    for (const double C : {0.7, -0.3}) {
      const auto sampler = make_sampler(RelativisticPair{C}, pt, Dispersion::Inverse, dense());
      for (double eta : {-3.0, 2.0}) {
        auto s = state_at(sampler, eta);
        REQUIRE(s.x.size() == 2);
        s.C = C;
        CHECK(residual_eom(EomKind::Relativistic2, s) <= 1e-5);
      }
    }
  }
}

TEST_CASE("sinh-gordon pair relation in the centre-of-mass frame") {
  struct Case {
    PhasePoint point;
    int eps;
  };
  const double th = 0.9;
  const std::vector<Case> cases = {
      {PhasePoint::make(cvec({0.3, -0.2}), cvec({2.0, 0.5})), 1},
      {PhasePoint::make(cvec({0.3, -0.2}), cvec({1.7, 1 / 1.7}), {}, {1, -1}), -1},
      {support::conjugate_pair({0.1, 0.4}, std::polar(1.0, th)), -1},
  };
  auto opts = dense();
  opts.frame = Frame::Lab;
  for (const auto& c : cases) {
    const auto sampler = make_sampler(SinhGordonDeterminant{}, c.point, Dispersion::Inverse, opts);
    for (double t : {-2.3, -1.1, 1.4, 2.6}) {
      auto s = state_at(sampler, t);
      if (s.x.size() != 2 || std::abs(s.x[0] - s.x[1]) < 0.05) continue;
      s.epsilon = c.eps;
      CHECK(residual_eom(EomKind::SinhGordon2, s) <= 1e-4);
    }
  }
}

TEST_CASE("Lax matrices and projection") {
  const RMatrix L = build_L(LaxKind::CM, rvec({1, -1}), rvec({0, 0}), 1.0);
  CHECK(L(0, 1) == doctest::Approx(-0.5));
  CHECK(L(1, 0) == doctest::Approx(0.5));
  CHECK(build_L(LaxKind::RS, rvec({0.3, 1.2, -2}), rvec({1, 2, 3}), 0.7).trace() == doctest::Approx(6.0));
  CHECK(build_L(LaxKind::CM, rvec({4}), rvec({2.5}), 1.0)(0, 0) == 2.5);
  CHECK(support::error_of([] { build_L(LaxKind::CM, rvec({1, 1}), rvec({0, 0}), 1.0); }) ==
        ErrorCode::CoincidentPositions);
  CHECK(support::error_of([] { build_L(LaxKind::RS, rvec({1, 2}), rvec({0, 0}), 1.0); }) == ErrorCode::RSPoleAtGamma);

  // det = x^2 - 1 + t^2 / 4.
  const RVector X0 = rvec({1, -1});
  auto r = projection_roots(X0, L, 1.0);
  REQUIRE(r.size() == 2);
  CHECK(r[1] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK(projection_roots(X0, L, 2.5).empty());
  r = projection_roots(rvec({0.4}), RMatrix::Constant(1, 1, 2.0), 3.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(6.4));
}

TEST_CASE("projection roots solve the many-body equations") {
  for (const auto kind : {LaxKind::CM, LaxKind::RS}) {
    const RVector x = rvec({-2.1, 0.4, 3.0});
    const RVector v = rvec({0.9, 0.1, -0.6});
    const double gamma = 0.6;
    const RMatrix L0 = build_L(kind, x, v, gamma);
    const auto roots_at = [&](double t) { return projection_roots(x, L0, t); };
    const auto r0 = roots_at(0.0);
    REQUIRE(r0.size() == 3);
    for (size_t i = 0; i < 3; ++i) CHECK(r0[i] == doctest::Approx(x[static_cast<Index>(i)]).epsilon(1e-12));
    const double h = 1e-3;
    for (double t : {0.0, 0.6}) {
      std::array<std::vector<double>, 5> rs;
      for (int k = -2; k <= 2; ++k) rs[static_cast<size_t>(k + 2)] = roots_at(t + k * h);
      EomState s;
      s.gamma = gamma;
      s.x.resize(3);
      s.v.resize(3);
      s.a.resize(3);
      for (Index i = 0; i < 3; ++i) {
        const auto u = static_cast<size_t>(i);
        const auto st = five_point({rs[0][u], rs[1][u], rs[2][u], rs[3][u], rs[4][u]}, h);
        s.x[i] = st.x;
        s.v[i] = st.v;
        s.a[i] = st.a;
      }
      if (t == 0.0) CHECK((s.v - v).cwiseAbs().maxCoeff() < 1e-7);
      CHECK(residual_eom(kind == LaxKind::CM ? EomKind::CalogeroMoser : EomKind::RuijsenaarsSchneider, s) < 1e-5);
    }
  }
}

TEST_CASE("projection identity with the characteristic models") {
  const RVector x = rvec({-1.5, 0.2, 2.4});
  const RVector v = rvec({0.7, -0.1, 0.3});
  for (const auto kind : {LaxKind::CM, LaxKind::RS}) {
    const double gamma = 0.8;
    const ModelSpec m = kind == LaxKind::CM ? ModelSpec{CharacteristicCM{gamma}} : ModelSpec{CharacteristicRS{gamma}};
    const Dispersion d = default_dispersion(m);
    const auto pt = solve_cauchy(m, d, {x, v, 0.0});
    const RMatrix L0 = build_L(kind, x, v, gamma);
    for (double t : {-2.0, -0.5, 0.3, 1.7}) {
      const auto expected = projection_roots(x, L0, t);
      const auto got = snapshot(m, pt, d, t, dense()).positions(std::nullopt);
      REQUIRE(got.size() == expected.size());
      for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-8);
    }
  }
}

TEST_CASE("two-body Lagrangian structure") {
  CHECK(conjugate_momenta_p8(rvec({1, 0}), rvec({0.5, -0.2}), 0.0)[0] == 0.5);
  CHECK(induced_hamiltonian_p9(rvec({1, 0}), {0.5, -0.2}, 0.0) == doctest::Approx(0.145));
  CHECK(support::error_of([] { conjugate_momenta_p8(rvec({1, -1}), rvec({0, 0}), 4.0); }) ==
        ErrorCode::SingularConfiguration);

  // Legendre duality: dH/dP at P(x, v) gives v back.
  const RVector x = rvec({1.4, -0.9});
  const RVector v = rvec({0.3, 0.8});
  const double C = 1.7;
  const auto P = conjugate_momenta_p8(x, v, C);
  for (int i = 0; i < 2; ++i) {
    const auto H = [&](double s) {
      auto Q = P;
      Q[static_cast<size_t>(i)] = s;
      return induced_hamiltonian_p9(x, Q, C);
    };
    CHECK(support::derivative(H, P[static_cast<size_t>(i)]) == doctest::Approx(v[i]).epsilon(1e-8));
  }

  // Conserved along the motion and equal to the free energy.
  const auto data = pair_data(2.2, 0.9, 0.1, -0.3);
  const auto pt = cauchy_poly2(C, data);
  const double free_energy = hamiltonian(pt, Dispersion::Quadratic);
  const auto sampler = make_sampler(PolynomialProduct{C}, pt, Dispersion::Quadratic, dense());
  for (double t : {-3.0, -1.0, 0.0, 1.5, 4.0}) {
    const auto s = state_at(sampler, t);
    REQUIRE(s.x.size() == 2);
    const double H = induced_hamiltonian_p9(s.x, conjugate_momenta_p8(s.x, s.v, C), C);
    CHECK(H == doctest::Approx(free_energy).epsilon(1e-9));
  }
}

TEST_CASE("asymptotic decay") {
  const auto free = asymptotic_check(PolynomialProduct{0.0}, PhasePoint::real(rvec({0.5}), rvec({1.0})),
                                     Dispersion::Quadratic);
  for (double r : free.deviations) CHECK(r < 1e-9);

  const auto pt = PhasePoint::real(rvec({-1.0, 1.0}), rvec({0.6, -0.6}));
  const auto rep = asymptotic_check(CharacteristicCM{1.0}, pt, Dispersion::Quadratic);
  REQUIRE(rep.ratios.size() == 2);
  for (double r : rep.ratios) CHECK(std::abs(r - 2.0) <= 0.3);

  CHECK(support::error_of([] {
          asymptotic_check(PolynomialProduct{-4.0}, PhasePoint::real(rvec({0, 0}), rvec({0, 0})), Dispersion::Quadratic);
        }) == ErrorCode::EventInWindow);
}

TEST_CASE("boost covariance") {
  const auto one = PhasePoint::make(cvec({0.4}), cvec({1.3}));
  CHECK(boost_covariance_check(SinhGordonDeterminant{}, one, 1.0, {-1, 0, 2}) < 1e-12);
  CHECK(boost_covariance_check(SinhGordonDeterminant{}, one, 2.0, {-1, 0, 2}) < 1e-10);
  const auto two = PhasePoint::make(cvec({0.4, -0.3}), cvec({1.3, 0.6}), {}, {1, -1});
  for (double lambda : {0.5, 2.0, 3.0}) {
    CHECK(boost_covariance_check(SinhGordonDeterminant{}, two, lambda, {-2, -0.5, 1, 3}) < 1e-9);
    CHECK(boost_covariance_check(RelativisticPair{0.8}, PhasePoint::real(rvec({-1, 2}), rvec({0.7, 1.4})), lambda,
                                 {-2, 0.5, 3}) < 1e-9);
  }
  CHECK(support::error_of([&] { boost_covariance_check(KdVDeterminant{}, one, 2.0, {0}); }) == ErrorCode::DomainError);

  CHECK(cone_to_lab(1, 1) == std::pair<double, double>{1, 0});
  CHECK(cone_to_lab(2, 0) == std::pair<double, double>{1, 1});
  for (int k = 0; k < 20; ++k) {
    const double x = support::uniform(-5, 5), t = support::uniform(-5, 5);
    const auto [xi, eta] = lab_to_cone(x, t);
    const auto [x2, t2] = cone_to_lab(xi, eta);
    CHECK(x2 == doctest::Approx(x));
    CHECK(t2 == doctest::Approx(t));
  }
}

TEST_CASE("regime classification") {
  CHECK(regime_classify(PolynomialProduct{9.0}, pair_data(4, 1)) == Regime::Repulsion);
  CHECK(regime_classify(PolynomialProduct{2.0}, pair_data(1, 2)) == Regime::FiniteLife);
  CHECK(regime_classify(PolynomialProduct{-1.0}, pair_data(1, 2)) == Regime::Cheshirization);
  CHECK(support::error_of([] { regime_classify(PolynomialProduct{4.0}, pair_data(2, 1)); }) == ErrorCode::BoundaryCase);
  CHECK(support::error_of([] { regime_classify(PolynomialProduct{0.0}, pair_data(2, 1)); }) == ErrorCode::BoundaryCase);

  // cosh x12 - 2C in (-1, 1).
  CHECK(regime_classify(SinhPair{5.0}, pair_data(std::acosh(10.2), 0.5)) == Regime::Oscillation);
  CHECK(regime_classify(SinhPair{0.4}, pair_data(std::acosh(1.5), 0.5)) == Regime::VirtualCascade);
  CHECK(regime_classify(SinhPair{0.4}, pair_data(std::acosh(2.5), 0.5)) == Regime::Repulsion);
  CHECK(regime_classify(SinhPair{-0.4}, pair_data(1.0, 0.5)) == Regime::Cheshirization);

  // lhs = xi12^2 + C (xi1' + xi2').
  CHECK(regime_classify(RelativisticPair{0.5}, {rvec({1, -1}), rvec({0.3, 0.3}), 0}) == Regime::Repulsion);
  CHECK(regime_classify(RelativisticPair{0.5}, {rvec({1, -1}), rvec({-5, -5}), 0}) == Regime::FiniteLife);
  CHECK(regime_classify(RelativisticPair{-0.5}, {rvec({1, -1}), rvec({1, 1}), 0}) == Regime::Cheshirization);

  for (const auto r : {Regime::Repulsion, Regime::FiniteLife, Regime::Cheshirization, Regime::Oscillation,
                       Regime::VirtualCascade}) {
    CHECK(regime_from_string(to_string(r)) == r);
  }
  CHECK(expected_pattern(Regime::Repulsion) == EventPattern::None);
  CHECK(expected_pattern(Regime::FiniteLife) == EventPattern::CreateThenAnnihilate);
  CHECK(expected_pattern(Regime::Cheshirization) == EventPattern::AnnihilateThenCreate);
  CHECK(expected_pattern(Regime::VirtualCascade) == EventPattern::Recurring);
}

TEST_CASE("observed event patterns") {
  const auto ev = [](EventKind k, double t) { return Event{k, t, 0.0, {}}; };
  CHECK(observed_pattern({}) == EventPattern::None);
  CHECK(observed_pattern({ev(EventKind::Crossing, 1)}) == EventPattern::None);
  CHECK(observed_pattern({ev(EventKind::Creation, 0), ev(EventKind::Annihilation, 1)}) ==
        EventPattern::CreateThenAnnihilate);
  CHECK(observed_pattern({ev(EventKind::Annihilation, 0), ev(EventKind::Creation, 1)}) ==
        EventPattern::AnnihilateThenCreate);
  CHECK(observed_pattern({ev(EventKind::Creation, 0), ev(EventKind::Annihilation, 1), ev(EventKind::Creation, 2),
                          ev(EventKind::Annihilation, 3)}) == EventPattern::Recurring);
  CHECK(observed_pattern({ev(EventKind::Creation, 0), ev(EventKind::Creation, 1)}) == EventPattern::Other);
}

TEST_CASE("classification predicts tracked events") {
  struct Case {
    ModelSpec model;
    CauchyData data;
  };
  const std::vector<Case> cases = {
      {PolynomialProduct{9.0}, pair_data(4, -1.5)},
      {PolynomialProduct{2.0}, pair_data(1, 2)},
      {PolynomialProduct{-2.0}, pair_data(3, -1)},
      {SinhPair{0.4}, pair_data(std::acosh(2.5), -0.8)},
      {SinhPair{0.4}, pair_data(std::acosh(1.5), 0.5)},
      {SinhPair{-0.5}, pair_data(1.5, -1.0)},
  };
  for (const auto& c : cases) {
    const auto regime = regime_classify(c.model, c.data);
    const bool poly = std::holds_alternative<PolynomialProduct>(c.model);
    const auto pt = poly ? cauchy_poly2(std::get<PolynomialProduct>(c.model).C, c.data)
                         : cauchy_sinh2(std::get<SinhPair>(c.model).C, c.data);
    TrackerOptions o;
    o.roots.n_scan = 512;
    const auto tr = track(c.model, pt, Dispersion::Quadratic, {-15, 15, 0.05}, o);
    CAPTURE(to_string(regime));
    CHECK(observed_pattern(tr.events) == expected_pattern(regime));
  }
}
