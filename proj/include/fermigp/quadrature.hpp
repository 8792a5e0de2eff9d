#pragma once

// Midpoint-rule integration over the Brillouin zone [-pi, pi)^d.
//
// The grid is k = -pi + (2m+1) pi / N, so k = 0 and k = pi are never sampled.
// Sums are formed block by block (kBlockSize points, pairwise inside each
// block) and the block sums are combined by a fixed pairwise tree. Workers only
// decide who computes which block, so the result is bit-identical for any
// worker count.
//
// Integrands take a BzPoint and return either double or an Eigen array type
// (a concrete array, not an expression). They are called concurrently.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "fermigp/error.hpp"

namespace fermigp {

struct QuadratureSpec {
  int points_per_axis = 1024;  // finest level
  int refinement_levels = 3;
  double rel_tol = 1e-8;

  static QuadratureSpec defaults(int d);
  // Points per axis of level `level`, 0 being the coarsest.
  int level_points(int level) const {
    return points_per_axis >> (refinement_levels - 1 - level);
  }
  void validate() const;
};

template <class Value>
struct IntegralResult {
  Value value{};
  Value error_estimate{};
  long long points_used = 0;
  int points_per_axis = 0;  // finest level actually evaluated
  bool converged = false;
};

struct BzPoint {
  std::span<const double> k;
  std::span<const double> cos_k;
  std::span<const double> sin_k;
};

// Worker threads for grid sums: FERMIGP_WORKERS if set, else the hardware count.
int worker_count();

inline constexpr long long kBlockSize = 4096;

namespace detail {

inline double zero_like(double) { return 0.0; }
template <class Derived>
typename Derived::PlainObject zero_like(const Eigen::ArrayBase<Derived>& v) {
  return Derived::PlainObject::Zero(v.size());
}

inline bool all_finite(double v) { return std::isfinite(v); }
template <class Derived>
bool all_finite(const Eigen::ArrayBase<Derived>& v) {
  return v.allFinite();
}

inline double abs_of(double v) { return std::abs(v); }
template <class Derived>
typename Derived::PlainObject abs_of(const Eigen::ArrayBase<Derived>& v) {
  return v.abs();
}

inline bool within(double err, double value, double tol) {
  return err <= tol * std::max(1.0, std::abs(value));
}
template <class Derived>
bool within(const Eigen::ArrayBase<Derived>& err, const Eigen::ArrayBase<Derived>& value,
            double tol) {
  return (err <= tol * value.abs().max(1.0)).all();
}

// Runs job(b) for b in [0, count) on up to `workers` threads; the first
// exception by block index is rethrown.
template <class Job>
void run_blocks(long long count, int workers, Job&& job) {
  if (workers <= 1 || count <= 1) {
    for (long long b = 0; b < count; ++b) job(b);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<long long> next{0};
  auto loop = [&] {
    for (long long b; (b = next.fetch_add(1)) < count;) {
      try {
        job(b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const long long n = std::min<long long>(workers, count);
  for (long long w = 1; w < n; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class Value>
Value tree_sum(const std::vector<Value>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Value(tree_sum(parts, lo, mid) + tree_sum(parts, mid, hi));
}

}  // namespace detail

template <class F>
using IntegrandValue = std::decay_t<std::invoke_result_t<F&, const BzPoint&>>;

// Integral of f over one N^d midpoint grid.
template <class F>
IntegrandValue<F> midpoint_integral(F&& f, int d, int n) {
  using Value = IntegrandValue<F>;
  if (d < 1 || d > 3) throw InputError("dimension must be 1, 2 or 3");
  if (n < 1) throw InputError("grid needs at least one point per axis");

  std::vector<double> nodes(n), cs(n), sn(n);
  for (int m = 0; m < n; ++m) {
    nodes[m] = -std::numbers::pi + (2.0 * m + 1.0) * std::numbers::pi / n;
    cs[m] = std::cos(nodes[m]);
    sn[m] = std::sin(nodes[m]);
  }
  long long total = 1;
  for (int a = 0; a < d; ++a) total *= n;

  auto sample = [&](long long idx) -> Value {
    std::array<double, 3> k{}, c{}, s{};
    for (int a = 0; a < d; ++a) {
      const int m = static_cast<int>(idx % n);
      idx /= n;
      k[a] = nodes[m];
      c[a] = cs[m];
      s[a] = sn[m];
    }
    const std::size_t dd = d;
    Value v = f(BzPoint{{k.data(), dd}, {c.data(), dd}, {s.data(), dd}});
    if (!detail::all_finite(v))
      throw EvaluationError("integrand is not finite",
                            std::vector<double>(k.begin(), k.begin() + d));
    return v;
  };
  auto pairwise = [&](auto& self, long long lo, long long hi) -> Value {
    if (hi - lo <= 8) {
      Value acc = sample(lo);
      for (long long i = lo + 1; i < hi; ++i) acc += sample(i);
      return acc;
    }
    const long long mid = lo + (hi - lo) / 2;
    return Value(self(self, lo, mid) + self(self, mid, hi));
  };

  const long long blocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<Value> parts(blocks);
  detail::run_blocks(blocks, worker_count(), [&](long long b) {
    const long long lo = b * kBlockSize;
    parts[b] = pairwise(pairwise, lo, std::min(total, lo + kBlockSize));
  });
  const double cell = std::pow(2.0 * std::numbers::pi / n, d);
  return Value(detail::tree_sum(parts, 0, parts.size()) * cell);
}

namespace detail {

template <class F>
IntegralResult<IntegrandValue<F>> ladder(F& f, int d, const QuadratureSpec& spec,
                                         bool stop_early) {
  spec.validate();
  IntegralResult<IntegrandValue<F>> out;
  for (int level = 0; level < spec.refinement_levels; ++level) {
    const int n = spec.level_points(level);
    auto value = midpoint_integral(f, d, n);
    long long pts = 1;
    for (int a = 0; a < d; ++a) pts *= n;
    out.points_used += pts;
    out.points_per_axis = n;
    if (level == 0) {
      out.value = value;
      out.error_estimate = zero_like(value) + std::numeric_limits<double>::infinity();
      continue;
    }
    out.error_estimate = abs_of(value - out.value);
    out.value = value;
    out.converged = within(out.error_estimate, out.value, spec.rel_tol);
    if (stop_early && out.converged) break;
  }
  return out;
}

}  // namespace detail

// All refinement levels; value from the finest, error = |finest - previous|.
// A single level has no error estimate (infinity) and is never converged.
template <class F>
IntegralResult<IntegrandValue<F>> integrate_bz(F&& f, int d, const QuadratureSpec& spec) {
  return detail::ladder(f, d, spec, false);
}

// Walks the same ladder but stops at the first level that meets rel_tol.
template <class F>
IntegralResult<IntegrandValue<F>> refine_until(F&& f, int d, const QuadratureSpec& spec) {
  return detail::ladder(f, d, spec, true);
}

}  // namespace fermigp
