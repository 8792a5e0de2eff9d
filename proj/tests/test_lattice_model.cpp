#include <doctest.h>

#include <numbers>
#include <random>

#include "fermigp/error.hpp"
#include "fermigp/lattice_model.hpp"

using namespace fermigp;
using std::numbers::pi;

TEST_CASE("dispersion at simple momenta") {
  auto p = dispersion({1, 1.0, 0.0}, Momentum::Constant(1, pi / 2));
  CHECK(p.t == doctest::Approx(0).epsilon(1e-15));
  CHECK(p.delta == doctest::Approx(1));
  CHECK(p.energy == doctest::Approx(1));

  p = dispersion({2, 1.0, 0.0}, Momentum::Constant(2, pi / 2));
  CHECK(std::abs(p.t) < 1e-15);
  CHECK(p.delta == doctest::Approx(2));
  CHECK(p.energy == doctest::Approx(2));

  p = dispersion({3, 1.0, 3.0}, Momentum::Zero(3));
  CHECK(p.t == 0);
  CHECK(p.delta == 0);
  CHECK(p.energy == 0);
}

TEST_CASE("dispersion rejects a momentum of the wrong length") {
  CHECK_THROWS_AS(dispersion({2, 1.0, 0.0}, Momentum::Zero(3)), InputError);
  CHECK_THROWS_AS(dispersion({4, 1.0, 0.0}, Momentum::Zero(4)), InputError);
}

TEST_CASE("dispersion symmetries") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-pi, pi), coupling(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 3;
    Momentum k(d);
    for (int a = 0; a < d; ++a) k[a] = angle(rng);
    const double g = coupling(rng), lam = coupling(rng);

    const auto p = dispersion({d, g, lam}, k);
    CHECK(p.energy >= 0);
    CHECK(p.energy == doctest::Approx(std::sqrt(p.t * p.t + p.delta * p.delta)).epsilon(1e-15));

    // gamma -> -gamma together with k -> -k
    const auto q = dispersion({d, -g, lam}, Momentum(-k));
    CHECK(q.t == doctest::Approx(p.t).epsilon(1e-14));
    CHECK(q.delta == doctest::Approx(p.delta).epsilon(1e-14));

    // half-zone shift at lambda = 0
    const auto r0 = dispersion({d, g, 0.0}, k);
    const auto r1 = dispersion({d, g, 0.0}, Momentum(k.array() + pi));
    CHECK(r1.t == doctest::Approx(-r0.t).epsilon(1e-12).scale(1));
    CHECK(r1.delta == doctest::Approx(-r0.delta).epsilon(1e-12).scale(1));
    CHECK(r1.energy == doctest::Approx(r0.energy).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("couplings of a four-site ring without pairing") {
  const auto m = build_couplings(1, 4, 0.0, 1.0);
  Eigen::MatrixXd a(4, 4);
  a << -2, 1, 0, 1,
        1, -2, 1, 0,
        0, 1, -2, 1,
        1, 0, 1, -2;
  CHECK(m.a == a);
  CHECK(m.b.isZero(0));
  CHECK(m.total_sites == 4);
}

TEST_CASE("pairing matrix orientation") {
  const auto m = build_couplings(1, 4, 1.0, 0.0);
  CHECK(m.b(0, 1) == -1.0);
  CHECK(m.b(1, 0) == 1.0);
  CHECK(m.b(3, 0) == -1.0);  // the wrap-around bond points from 3 to 0
  CHECK(m.b == -m.b.transpose());
}

TEST_CASE("square torus coordination") {
  const auto m = build_couplings(2, 3, 0.7, 0.3);
  for (int i = 0; i < m.total_sites; ++i) {
    int ones = 0;
    for (int j = 0; j < m.total_sites; ++j)
      if (j != i && m.a(i, j) == 1.0) ++ones;
    CHECK(ones == 4);
  }
}

TEST_CASE("couplings are exactly symmetric and only on bonds") {
  for (int d = 1; d <= 3; ++d) {
    const auto m = build_couplings(d, 4, -1.3, 0.9);
    CHECK(m.a == m.a.transpose());
    CHECK(m.b == -m.b.transpose());
    for (int i = 0; i < m.total_sites; ++i)
      for (int j = 0; j < m.total_sites; ++j) {
        if (i == j) continue;
        bool bond = false;
        for (int dir = 0; dir < d; ++dir)
          bond = bond || m.neighbor(i, dir) == j || m.neighbor(j, dir) == i;
        if (!bond) {
          CHECK(m.a(i, j) == 0);
          CHECK(m.b(i, j) == 0);
        }
      }
  }
}

TEST_CASE("lattice size checks") {
  CHECK_THROWS_AS(build_couplings(1, 2, 1, 0), InputError);
  CHECK_THROWS_AS(build_couplings(3, 20, 1, 0), InputError);
  CHECK_THROWS_AS(build_couplings(2, 10, 1, 0, 50), InputError);
  CHECK_NOTHROW(build_couplings(3, 16, 1, 0));
}

TEST_CASE("phase labels") {
  auto l = phase_label({2, 1.0, 3.0});
  CHECK(l.region == PhaseRegion::gapped);
  CHECK(l.critical_lambdas == std::vector<double>{0.0, 2.0});

  l = phase_label({3, 1.0, 1.0});
  CHECK(l.region == PhaseRegion::gapless_degenerate);
  CHECK(l.critical_lambdas == std::vector<double>{3.0});

  l = phase_label({2, 0.0, 1.0});
  CHECK(l.region == PhaseRegion::gapless_degenerate);
  CHECK(l.critical_lambdas == std::vector<double>{2.0});

  CHECK(phase_label({2, 1.0, 0.0}).region == PhaseRegion::fermi_surface_point);
  CHECK(phase_label({2, 1.0, -1.5}).region == PhaseRegion::gapless_degenerate);
  // the pairing chain is gapped away from |lambda| = 1
  CHECK(phase_label({1, 1.0, 0.5}).region == PhaseRegion::gapped);
  CHECK(phase_label({1, 1.0, 1.0}).region == PhaseRegion::gapless_degenerate);
}

TEST_CASE("phase labels agree with the minimum gap on a dense grid") {
  // Grid containing k = 0 and k = pi so exact closings are sampled.
  auto min_gap = [](int d, double g, double lam) {
    const int n = d == 1 ? 4000 : d == 2 ? 400 : 60;
    double best = 1e300;
    Momentum k(d);
    const int total = static_cast<int>(std::pow(n, d));
    for (int idx = 0; idx < total; ++idx) {
      int rest = idx;
      for (int a = 0; a < d; ++a) {
        k[a] = -pi + 2 * pi * (rest % n) / n;
        rest /= n;
      }
      best = std::min(best, dispersion({d, g, lam}, k).energy);
    }
    return best;
  };
  for (int d = 1; d <= 3; ++d)
    for (double g : {0.0, 1.0})
      for (double lam : {0.0, 0.5, 1.0, 1.7, 2.5, 3.5, 4.5}) {
        const auto label = phase_label({d, g, lam});
        const double gap = min_gap(d, g, lam);
        CAPTURE(d);
        CAPTURE(g);
        CAPTURE(lam);
        if (label.region == PhaseRegion::gapped) {
          CHECK(gap > 0.05);
          if (lam > d) CHECK(gap >= 0.99 * (lam - d));
        } else {
          CHECK(gap < (d == 3 ? 0.2 : 0.05));
        }
      }
}
