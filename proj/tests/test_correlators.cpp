#include <doctest.h>

#include <numbers>

#include "fermigp/correlators.hpp"

using namespace fermigp;
using std::numbers::pi;

namespace {

QuadratureSpec small_grid(int d) {
  QuadratureSpec s;
  s.points_per_axis = d == 3 ? 96 : 256;
  s.refinement_levels = 2;
  return s;
}

}  // namespace

TEST_CASE("p3 vanishes at lambda = 0") {
  const auto r = correlations_tl({2, 1.0, 0.0}, QuadratureSpec::defaults(2));
  CHECK(std::abs(r.p.p30) < 1e-12);
  CHECK(r.p.p03 == r.p.p30);
  CHECK(r.p.p12 == 0);
  CHECK(r.p.p21 == 0);
}

TEST_CASE("without pairing p11 equals p22") {
  for (auto* route : {"grid", "walk"}) {
    CAPTURE(route);
    const auto r = std::string(route) == "grid" ? correlations_tl({1, 0.0, 0.5}, small_grid(1))
                                                : correlations_tl({1, 0.0, 0.5}, WalkSpec{});
    CHECK(r.p.p11 == doctest::Approx(r.p.p22).epsilon(1e-14));
    // p3 = P(cos k > 1/2) - P(cos k < 1/2)
    CHECK(r.p.p30 == doctest::Approx(-1.0 / 3).epsilon(2e-2));
  }
}

TEST_CASE("far from the band every site is empty") {
  const auto r = correlations_tl({2, 1.0, 10.0}, QuadratureSpec::defaults(2));
  CHECK(std::abs(r.p.p30 + 1) < 1e-2);
  // pairing correlations fall off only like 1/lambda: X = gamma <S^2/Lambda> / d
  // tends to gamma / (2 lambda) while Y is O(1/lambda^2)
  CHECK(r.p.p11 == doctest::Approx(0.05).epsilon(2e-2));
  CHECK(r.p.p22 == doctest::Approx(-0.05).epsilon(2e-2));
  CHECK(r.converged);
  const auto g = geometric_phase_tl({2, 1.0, 10.0}, QuadratureSpec::defaults(2));
  CHECK(std::abs(g.gamma_g - pi) < 1e-2);
}

TEST_CASE("geometric phase is pi/2 at lambda = 0 in every dimension") {
  for (int d = 1; d <= 3; ++d) {
    CAPTURE(d);
    const auto g = geometric_phase_tl({d, 1.0, 0.0}, QuadratureSpec::defaults(d));
    CHECK(std::abs(g.gamma_g - pi / 2) < 1e-6);
    const auto w = geometric_phase_tl({d, 1.0, 0.0}, WalkSpec{});
    CHECK(std::abs(w.gamma_g - pi / 2) < 1e-6);
  }
}

TEST_CASE("gamma = 0 conventions") {
  auto z = gp_gamma_zero({1, 0.0, 2.0}, small_grid(1));
  CHECK(z.filled_fraction.gamma_g == doctest::Approx(pi).epsilon(1e-12));
  CHECK(z.no_pairing == 0);
  z = gp_gamma_zero({1, 0.0, 0.0}, small_grid(1));
  CHECK(z.filled_fraction.gamma_g == doctest::Approx(pi / 2).epsilon(1e-12));
  z = gp_gamma_zero({3, 0.0, 3.5}, small_grid(3));
  CHECK(z.filled_fraction.gamma_g == doctest::Approx(pi).epsilon(1e-12));
  CHECK_THROWS_AS(gp_gamma_zero({2, 0.5, 1.0}, small_grid(2)), InputError);
}

TEST_CASE("flipping the sign of gamma trades p11 and p22") {
  for (int d = 1; d <= 3; ++d)
    for (double lam : {0.3, 1.0, 2.7}) {
      CAPTURE(d);
      CAPTURE(lam);
      const auto plus = correlations_tl({d, 1.0, lam}, small_grid(d));
      const auto minus = correlations_tl({d, -1.0, lam}, small_grid(d));
      CHECK(plus.p.p30 == doctest::Approx(minus.p.p30).epsilon(1e-12).scale(1));
      CHECK(plus.p.p33 == doctest::Approx(minus.p.p33).epsilon(1e-12).scale(1));
      CHECK(plus.p.p11 == doctest::Approx(minus.p.p22).epsilon(1e-12).scale(1));
      CHECK(plus.p.p22 == doctest::Approx(minus.p.p11).epsilon(1e-12).scale(1));
      const auto gp = geometric_phase_tl({d, 1.0, lam}, small_grid(d));
      const auto gm = geometric_phase_tl({d, -1.0, lam}, small_grid(d));
      CHECK(gp.gamma_g == doctest::Approx(gm.gamma_g).epsilon(1e-12));
    }
}

TEST_CASE("correlators follow from the three moments") {
  const auto m = tl_moments_walk(2, 0.8, 1.4, WalkSpec{});
  const auto p = correlations_from_moments(m.value);
  CHECK(p.p11 - p.p22 == doctest::Approx(2 * m.value.x));
  CHECK(p.p33 == doctest::Approx(p.p30 * p.p30 - p.p11 * p.p22));
  CHECK(m.converged);
}

TEST_CASE("walk and grid routes agree") {
  for (int d = 1; d <= 3; ++d)
    for (double lam : {0.4, 1.3, 2.2, 3.6}) {
      CAPTURE(d);
      CAPTURE(lam);
      const auto w = tl_moments_walk(d, 1.0, lam, WalkSpec{});
      const double lams[] = {lam};
      const auto g = tl_moments_grid(d, 1.0, lams, QuadratureSpec::defaults(d)).front();
      const double tol = std::abs(lam) > d ? 1e-10 : (d == 3 ? 2e-4 : 2e-5);
      CHECK(w.value.p3 == doctest::Approx(g.value.p3).scale(1).epsilon(tol));
      CHECK(w.value.x == doctest::Approx(g.value.x).scale(1).epsilon(tol));
      CHECK(w.value.y == doctest::Approx(g.value.y).scale(1).epsilon(tol));
    }
}

TEST_CASE("batched grid passes match single-lambda passes") {
  const double lams[] = {0.1, 0.9, 1.7, 2.5, 3.3};
  const auto batch = tl_moments_grid(2, 1.0, lams, small_grid(2));
  for (std::size_t i = 0; i < std::size(lams); ++i) {
    const double one[] = {lams[i]};
    const auto single = tl_moments_grid(2, 1.0, one, small_grid(2)).front();
    CHECK(batch[i].value.p3 == single.value.p3);
    CHECK(batch[i].value.x == single.value.x);
    CHECK(batch[i].value.y == single.value.y);
  }
}

TEST_CASE("geometric phase rises with lambda") {
  double prev = -1;
  for (double lam = 0; lam <= 4.0; lam += 0.5) {
    const auto g = geometric_phase_tl({2, 1.0, lam}, small_grid(2));
    CHECK(g.gamma_g >= prev - 1e-8);
    CHECK(g.gamma_g >= 0);
    CHECK(g.gamma_g <= pi);
    prev = g.gamma_g;
  }
}

TEST_CASE("differentiated integrands match finite differences") {
  const double h = 1e-3;
  for (int d = 1; d <= 3; ++d)
    for (double lam : {0.6, 3.4}) {
      if (d == 1 && lam < 1) continue;  // keep away from the gap closing at 1
      CAPTURE(d);
      CAPTURE(lam);
      const auto dv = tl_moment_derivatives_walk(d, 0.7, lam, WalkSpec{});
      auto at = [&](double l) { return tl_moments_walk(d, 0.7, l, WalkSpec{}).value; };
      const auto m2 = at(lam - 2 * h), m1 = at(lam - h), c = at(lam), p1 = at(lam + h),
                 p2 = at(lam + 2 * h);
      auto first = [&](auto get) {
        return (get(m2) - 8 * get(m1) + 8 * get(p1) - get(p2)) / (12 * h);
      };
      auto second = [&](auto get) {
        return (-get(m2) + 16 * get(m1) - 30 * get(c) + 16 * get(p1) - get(p2)) / (12 * h * h);
      };
      auto p3 = [](const TlMoments& m) { return m.p3; };
      auto x = [](const TlMoments& m) { return m.x; };
      auto y = [](const TlMoments& m) { return m.y; };
      CHECK(dv.rows[0].p3 == doctest::Approx(c.p3).epsilon(1e-12));
      CHECK(dv.rows[1].p3 == doctest::Approx(first(p3)).epsilon(1e-6));
      CHECK(dv.rows[1].x == doctest::Approx(first(x)).epsilon(1e-6));
      CHECK(dv.rows[1].y == doctest::Approx(first(y)).epsilon(1e-6));
      CHECK(dv.rows[2].p3 == doctest::Approx(second(p3)).epsilon(1e-4));
      CHECK(dv.rows[2].x == doctest::Approx(second(x)).epsilon(1e-4));
      CHECK(dv.rows[2].y == doctest::Approx(second(y)).epsilon(1e-4));
    }
}
