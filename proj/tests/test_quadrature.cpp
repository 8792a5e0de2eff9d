#include <doctest.h>

#include <cstdlib>
#include <numbers>
#include <random>

#include "fermigp/correlators.hpp"
#include "fermigp/quadrature.hpp"

using namespace fermigp;
using std::numbers::pi;

namespace {

QuadratureSpec spec_of(int n, int levels = 3, double tol = 1e-8) {
  QuadratureSpec s;
  s.points_per_axis = n;
  s.refinement_levels = levels;
  s.rel_tol = tol;
  return s;
}

double p3_integrand(const BzPoint& p, double gamma, double lambda) {
  double c = 0, s = 0;
  for (std::size_t a = 0; a < p.k.size(); ++a) {
    c += p.cos_k[a];
    s += p.sin_k[a];
  }
  const double t = c - lambda, delta = gamma * s;
  const double e = std::sqrt(t * t + delta * delta);
  return e < kZeroGap ? 0.0 : t / e;
}

struct WorkerEnv {
  explicit WorkerEnv(const char* v) { setenv("FERMIGP_WORKERS", v, 1); }
  ~WorkerEnv() { unsetenv("FERMIGP_WORKERS"); }
};

}  // namespace

TEST_CASE("constant integrand gives the zone volume") {
  const auto r = integrate_bz([](const BzPoint&) { return 1.0; }, 2, spec_of(64));
  CHECK(r.value == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  CHECK(r.error_estimate >= 0);
  CHECK(r.converged);
}

TEST_CASE("full-period cosine integrates to zero") {
  const auto r = integrate_bz([](const BzPoint& p) { return p.cos_k[0]; }, 1, spec_of(64));
  CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("kinked integrand |cos(k/2)|") {
  auto f = [](const BzPoint& p) { return std::abs(std::cos(p.k[0] / 2)); };
  CHECK(midpoint_integral(f, 1, 64) == doctest::Approx(4).epsilon(1e-3 / 4));
  CHECK(midpoint_integral(f, 1, 4096) == doctest::Approx(4).epsilon(1e-3 / 4));
}

TEST_CASE("trigonometric polynomials below the grid degree are exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 16;
  for (int d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      // f = c0 + sum of products of cos / sin (m_a k_a) with 0 < m_a < n
      const double c0 = u(rng);
      std::vector<std::array<int, 3>> modes;
      std::vector<std::array<int, 3>> kinds;
      std::vector<double> coef;
      for (int term = 0; term < 6; ++term) {
        std::array<int, 3> m{}, kind{};
        for (int a = 0; a < 3; ++a) {
          m[a] = std::uniform_int_distribution<int>(0, n - 1)(rng);
          kind[a] = std::uniform_int_distribution<int>(0, 1)(rng);
        }
        m[0] = std::max(m[0], 1);  // every term has zero mean
        modes.push_back(m);
        kinds.push_back(kind);
        coef.push_back(u(rng));
      }
      auto f = [&](const BzPoint& p) {
        double v = c0;
        for (std::size_t t = 0; t < coef.size(); ++t) {
          double prod = coef[t];
          for (std::size_t a = 0; a < p.k.size(); ++a)
            prod *= kinds[t][a] ? std::sin(modes[t][a] * p.k[a]) : std::cos(modes[t][a] * p.k[a]);
          v += prod;
        }
        return v;
      };
      const double exact = c0 * std::pow(2 * pi, d);
      CHECK(midpoint_integral(f, d, n) == doctest::Approx(exact).epsilon(1e-12).scale(1));
    }
  }
}

TEST_CASE("results do not depend on the worker count") {
  auto f = [](const BzPoint& p) { return p3_integrand(p, 1.0, 1.3); };
  double one, four, seven;
  {
    WorkerEnv env("1");
    one = midpoint_integral(f, 2, 512);
  }
  {
    WorkerEnv env("4");
    four = midpoint_integral(f, 2, 512);
  }
  {
    WorkerEnv env("7");
    seven = midpoint_integral(f, 2, 512);
  }
  CHECK(one == four);
  CHECK(one == seven);
  CHECK(midpoint_integral(f, 2, 512) == one);
}

TEST_CASE("even integrands: full grid equals 2^d times the positive orthant") {
  auto f = [](const BzPoint& p) {
    double v = 1;
    for (std::size_t a = 0; a < p.k.size(); ++a) v *= std::exp(std::cos(p.k[a])) + p.k[a] * p.k[a];
    return v;
  };
  for (int d = 1; d <= 3; ++d) {
    const int n = 32;
    // positive orthant of the same grid: nodes with m >= n/2
    double orthant = 0;
    const int half = n / 2;
    const int total = static_cast<int>(std::pow(half, d));
    for (int idx = 0; idx < total; ++idx) {
      std::array<double, 3> k{}, c{}, s{};
      int rest = idx;
      for (int a = 0; a < d; ++a) {
        const int m = half + rest % half;
        rest /= half;
        k[a] = -pi + (2.0 * m + 1) * pi / n;
        c[a] = std::cos(k[a]);
        s[a] = std::sin(k[a]);
      }
      const std::size_t dd = d;
      orthant += f(BzPoint{{k.data(), dd}, {c.data(), dd}, {s.data(), dd}});
    }
    orthant *= std::pow(2 * pi / n, d);
    CHECK(midpoint_integral(f, d, n) == doctest::Approx(std::pow(2.0, d) * orthant).epsilon(1e-12));
  }
}

TEST_CASE("refinement stops early for smooth integrands") {
  auto one = refine_until([](const BzPoint&) { return 1.0; }, 2, spec_of(256, 3));
  CHECK(one.converged);
  CHECK(one.points_per_axis == 128);  // converged at the first refinement

  auto gapped = refine_until([](const BzPoint& p) { return p3_integrand(p, 1.0, 4.0); }, 2,
                             spec_of(256, 5, 1e-10));
  CHECK(gapped.converged);
  CHECK(gapped.points_per_axis <= 256);
}

TEST_CASE("gapless integrand is flagged when the tolerance is out of reach") {
  auto gapless = refine_until([](const BzPoint& p) { return p3_integrand(p, 1.0, 1.0); }, 2,
                              spec_of(512, 4, 1e-10));
  CHECK_FALSE(gapless.converged);
  CHECK(gapless.points_per_axis == 512);
  CHECK(gapless.error_estimate > 0);
}

TEST_CASE("array-valued integrands") {
  using A2 = Eigen::Array2d;
  auto r = integrate_bz([](const BzPoint& p) { return A2(1.0, p.cos_k[0] * p.cos_k[0]); }, 1,
                        spec_of(64));
  CHECK(r.value[0] == doctest::Approx(2 * pi));
  CHECK(r.value[1] == doctest::Approx(pi));
  CHECK(r.converged);
}

TEST_CASE("non-finite samples report the momentum") {
  auto f = [](const BzPoint& p) { return p.k[0] > 3.0 ? std::nan("") : 1.0; };
  try {
    midpoint_integral(f, 1, 64);
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    REQUIRE(e.where().size() == 1);
    CHECK(e.where()[0] > 3.0);
  }
}

TEST_CASE("quadrature spec validation") {
  CHECK_THROWS_AS(spec_of(30, 3).validate(), InputError);  // not divisible by 8
  CHECK_THROWS_AS(spec_of(32, 4).validate(), InputError);  // coarsest level would have 4 points
  CHECK_NOTHROW(spec_of(64, 3).validate());
  CHECK_THROWS_AS(spec_of(64, 0).validate(), InputError);
  CHECK_THROWS_AS(spec_of(64, 3, 0.0).validate(), InputError);
  CHECK_NOTHROW(QuadratureSpec::defaults(1).validate());
  CHECK_NOTHROW(QuadratureSpec::defaults(2).validate());
  CHECK_NOTHROW(QuadratureSpec::defaults(3).validate());
  CHECK(QuadratureSpec::defaults(3).level_points(0) == 48);
}

TEST_CASE("worker count override") {
  {
    WorkerEnv env("3");
    CHECK(worker_count() == 3);
  }
  {
    WorkerEnv env("zero");
    CHECK_THROWS_AS(worker_count(), InputError);
  }
  CHECK(worker_count() >= 1);
}
