#include "fermigp/analysis.hpp"

#include <algorithm>
#include <numeric>

namespace fermigp {

DerivativeEstimate derivative_from_samples(const std::array<double, 7>& f, double h, int order) {
  // f at -2h, -h, -h/2, 0, h/2, h, 2h
  DerivativeEstimate out;
  out.order = order;
  out.step = h;
  double coarse = 0, fine = 0;
  if (order == 1) {
    coarse = central_first(f[0], f[1], f[5], f[6], h);
    fine = central_first(f[1], f[2], f[4], f[5], h / 2);
  } else {
    coarse = central_second(f[0], f[1], f[3], f[5], f[6], h);
    fine = central_second(f[1], f[2], f[3], f[4], f[5], h / 2);
  }
  out.value = coarse;
  out.error_estimate = std::abs(coarse - fine);
  return out;
}

EvaluationSettings EvaluationSettings::defaults(int d, Route route) {
  EvaluationSettings s;
  s.route = route;
  s.grid = QuadratureSpec::defaults(d);
  return s;
}

namespace {

PointValues make_point(double lambda, const MomentEvaluation& ev) {
  PointValues v;
  v.lambda = lambda;
  v.moments = ev.value;
  v.moment_error = ev.error;
  v.p = correlations_from_moments(ev.value);
  v.c = concurrence_closed(v.p);
  v.gamma_g = gp_from_p3(ev.value.p3);
  v.quad_error = std::max({ev.error.p3, ev.error.x, ev.error.y});
  v.converged = ev.converged;
  return v;
}

}  // namespace

std::vector<PointValues> evaluate_points(int d, double gamma, std::span<const double> lambdas,
                                         const EvaluationSettings& settings) {
  std::vector<PointValues> out(lambdas.size());
  if (settings.route == Route::grid) {
    for (std::size_t lo = 0; lo < lambdas.size(); lo += kMaxBatch) {
      const auto chunk = lambdas.subspan(lo, std::min<std::size_t>(kMaxBatch, lambdas.size() - lo));
      const auto evs = tl_moments_grid(d, gamma, chunk, settings.grid);
      for (std::size_t j = 0; j < chunk.size(); ++j) out[lo + j] = make_point(chunk[j], evs[j]);
    }
  } else {
    detail::run_blocks(static_cast<long long>(lambdas.size()), worker_count(), [&](long long j) {
      out[j] = make_point(lambdas[j], tl_moments_walk(d, gamma, lambdas[j], settings.walk));
    });
  }
  return out;
}

double quantity_value(const PointValues& v, Quantity q) {
  return q == Quantity::c_two ? v.c.c_two : v.gamma_g;
}

const char* to_string(Quantity q) {
  return q == Quantity::c_two ? "c_two" : "gamma_g";
}

StencilDerivatives stencil_derivatives(int d, double gamma, double x0, double h,
                                       const EvaluationSettings& settings) {
  if (!(h > 0)) throw InputError("derivative step must be positive");
  std::array<double, 7> lambdas{};
  for (int k = 0; k < 7; ++k) lambdas[k] = x0 + kStencilOffsets[k] * h;
  const auto points = evaluate_points(d, gamma, lambdas, settings);
  std::array<double, 7> c2{}, gp{};
  StencilDerivatives out;
  for (int k = 0; k < 7; ++k) {
    c2[k] = points[k].c.c_two;
    gp[k] = points[k].gamma_g;
    out.quad_error = std::max(out.quad_error, points[k].quad_error);
  }
  out.centre = points[3];
  out.d1_c_two = derivative_from_samples(c2, h, 1);
  out.d2_c_two = derivative_from_samples(c2, h, 2);
  out.d1_gp = derivative_from_samples(gp, h, 1);
  out.d2_gp = derivative_from_samples(gp, h, 2);
  return out;
}

const char* to_string(Singularity s) {
  switch (s) {
    case Singularity::divergent_first_derivative: return "divergent-first-derivative";
    case Singularity::divergent_second_derivative: return "divergent-second-derivative";
    case Singularity::cusp_finite_second: return "cusp-finite-second";
    case Singularity::regular: return "regular";
  }
  return "?";
}

StencilFn stencil_of(std::function<double(double)> f) {
  return [f = std::move(f)](double lambda, double h) {
    std::array<double, 7> samples{};
    for (int k = 0; k < 7; ++k) {
      const double x = lambda + kStencilOffsets[k] * h;
      samples[k] = f(x);
      if (!std::isfinite(samples[k])) throw EvaluationError("non-finite sample", {x});
    }
    return std::array<DerivativeEstimate, 2>{derivative_from_samples(samples, h, 1),
                                             derivative_from_samples(samples, h, 2)};
  };
}

StencilFn quantity_stencil(int d, double gamma, Quantity quantity,
                           const EvaluationSettings& settings) {
  ModelParams{d, gamma, 0.0}.validate();
  return [=](double lambda, double h) {
    EvaluationSettings s = settings;
    if (s.route == Route::grid && h < 1e-3) {
      s.grid.points_per_axis *= 2;
      s.grid.refinement_levels += 1;
    }
    const StencilDerivatives sd = stencil_derivatives(d, gamma, lambda, h, s);
    auto with_error = [&](DerivativeEstimate e) {
      // Quadrature noise enters a k-th difference roughly as err / h^k.
      e.error_estimate += 16.0 * sd.quad_error / std::pow(h, e.order);
      return e;
    };
    return quantity == Quantity::c_two
               ? std::array<DerivativeEstimate, 2>{with_error(sd.d1_c_two), with_error(sd.d2_c_two)}
               : std::array<DerivativeEstimate, 2>{with_error(sd.d1_gp), with_error(sd.d2_gp)};
  };
}

std::array<double, 3> quantity_derivatives_walk(int d, double gamma, Quantity quantity,
                                                double lambda, const WalkSpec& spec) {
  const MomentDerivatives m = tl_moment_derivatives_walk(d, gamma, lambda, spec);
  const TlMoments &v = m.rows[0], &d1 = m.rows[1], &d2 = m.rows[2];
  if (quantity == Quantity::geometric_phase) {
    const double k = -0.5 * std::numbers::pi;
    return {gp_from_p3(v.p3), k * d1.p3, k * d2.p3};
  }
  // With p30 = p03: c_II = |X| - (1 - p3^2 + Y^2 - X^2) / 2.
  const double sx = v.x < 0 ? -1.0 : 1.0;
  const double c = concurrence_closed(correlations_from_moments(v)).c_two;
  const double c1 = sx * d1.x + v.p3 * d1.p3 - v.y * d1.y + v.x * d1.x;
  const double c2 = sx * d2.x + d1.p3 * d1.p3 + v.p3 * d2.p3 - d1.y * d1.y - v.y * d2.y +
                    d1.x * d1.x + v.x * d2.x;
  return {c, c1, c2};
}

bool diverges(std::span<const double> m, double increment_retention) {
  if (m.size() < 3) return false;
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    if (!(m[i + 1] > m[i])) return false;
  const double first = m[1] - m[0];
  const double last = m[m.size() - 1] - m[m.size() - 2];
  return last >= increment_retention * first;
}

namespace {

const GrowthSample* find_sample(const std::vector<GrowthSample>& s, int side, int order,
                                double eps) {
  for (const auto& g : s)
    if (g.side == side && g.order == order && g.epsilon == eps && g.ok) return &g;
  return nullptr;
}

// A finite jump across lambda* that the local slope on either side cannot
// account for.
bool jumps(const std::vector<GrowthSample>& s, int order, double e_min, double e_mid) {
  const GrowthSample* plus = find_sample(s, 1, order, e_min);
  const GrowthSample* minus = find_sample(s, -1, order, e_min);
  const GrowthSample* plus_mid = find_sample(s, 1, order, e_mid);
  const GrowthSample* minus_mid = find_sample(s, -1, order, e_mid);
  if (!plus || !minus || !plus_mid || !minus_mid) return false;
  const double slope = std::max(std::abs(plus_mid->signed_value - plus->signed_value),
                                std::abs(minus_mid->signed_value - minus->signed_value)) /
                       (e_mid - e_min);
  const double jump = std::abs(plus->signed_value - minus->signed_value);
  const double scale = std::max(std::abs(plus->signed_value), std::abs(minus->signed_value));
  const double noise = plus->error_estimate + minus->error_estimate;
  return jump > 4.0 * (2.0 * e_min * slope) + 1e-2 * scale + 2.0 * noise + 1e-8;
}

}  // namespace

SingularityReport classify_point(double lambda_star, const StencilFn& derivatives,
                                 const ScanOptions& options) {
  std::vector<double> eps = options.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (eps.empty() || eps.back() <= 0) throw InputError("epsilons must be positive");

  SingularityReport report;
  report.lambda_star = lambda_star;
  for (int side : {1, -1}) {
    for (double e : eps) {
      GrowthSample first, second;
      first.epsilon = second.epsilon = e;
      first.side = second.side = side;
      second.order = 2;
      try {
        const auto est = derivatives(lambda_star + side * e, stencil_step(e));
        first.signed_value = est[0].value;
        first.error_estimate = est[0].error_estimate;
        second.signed_value = est[1].value;
        second.error_estimate = est[1].error_estimate;
      } catch (const std::exception& ex) {
        first.ok = second.ok = false;
        first.failure = second.failure = ex.what();
      }
      first.magnitude = std::abs(first.signed_value);
      second.magnitude = std::abs(second.signed_value);
      report.growth_factors.push_back(first);
      report.growth_factors.push_back(second);
    }
  }

  auto series_diverges = [&](int order) {
    for (int side : {1, -1}) {
      std::vector<double> mags;
      for (double e : eps) {
        const GrowthSample* g = find_sample(report.growth_factors, side, order, e);
        if (!g) break;
        mags.push_back(g->magnitude);
      }
      if (mags.size() == eps.size() && diverges(mags, options.increment_retention)) return true;
    }
    return false;
  };

  if (series_diverges(1)) {
    report.classification = Singularity::divergent_first_derivative;
  } else if (series_diverges(2)) {
    report.classification = Singularity::divergent_second_derivative;
  } else if (eps.size() >= 2 && (jumps(report.growth_factors, 1, eps.back(), eps[eps.size() - 2]) ||
                                 jumps(report.growth_factors, 2, eps.back(), eps[eps.size() - 2]))) {
    report.classification = Singularity::cusp_finite_second;
  }
  return report;
}

std::vector<SingularityReport> critical_scan(int d, double gamma, std::span<const double> grid,
                                             Quantity quantity, const ScanOptions& options) {
  if (grid.size() < 3) throw InputError("scan grid needs at least 3 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i])) throw InputError("scan grid must be strictly increasing");
  const StencilFn stencil = quantity_stencil(d, gamma, quantity, options.settings);
  // Second derivative used to screen the grid and to bisect; exact
  // differentiated integrands on the walk route, a stencil of step h otherwise.
  auto screen = [&](double lambda, double h) {
    if (options.settings.route == Route::walk)
      return quantity_derivatives_walk(d, gamma, quantity, lambda, options.settings.walk)[2];
    return stencil(lambda, h)[1].value;
  };

  std::vector<double> known;
  for (double lc : phase_label({d, gamma, 0.0}).critical_lambdas)
    for (double c : {lc, -lc})
      if (c >= grid.front() && c <= grid.back() &&
          std::find(known.begin(), known.end(), c) == known.end())
        known.push_back(c);

  // Second derivative along the grid.
  double spacing = grid.back() - grid.front();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) spacing = std::min(spacing, grid[i + 1] - grid[i]);
  const double h = std::min(1e-3, spacing / 10);
  std::vector<double> second(grid.size());
  std::vector<char> ok(grid.size(), 1);
  auto sample = [&](long long i) {
    try {
      second[i] = screen(grid[i], h);
    } catch (const std::exception&) {
      ok[i] = 0;
    }
  };
  // The grid route already spreads each stencil over the workers.
  const auto n = static_cast<long long>(grid.size());
  if (options.settings.route == Route::walk)
    detail::run_blocks(n, worker_count(), sample);
  else
    for (long long i = 0; i < n; ++i) sample(i);

  std::vector<double> jump(grid.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (ok[i] && ok[i + 1]) jump[i] = std::abs(second[i + 1] - second[i]);
  std::vector<double> sorted = jump;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  double top = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (ok[i]) top = std::max(top, std::abs(second[i]));

  auto near_known = [&](double a, double b) {
    for (double c : known)
      if (c > a - 2 * spacing && c < b + 2 * spacing) return true;
    return false;
  };

  // Clusters of outlying jumps away from the known critical points.
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  for (std::size_t i = 0; i < jump.size(); ++i) {
    const bool flagged = jump[i] > options.cusp_outlier_factor * median &&
                         jump[i] > 1e-6 * (1 + top) && !near_known(grid[i], grid[i + 1]);
    if (!flagged) continue;
    if (!clusters.empty() && clusters.back().second == i)
      clusters.back().second = i + 1;
    else
      clusters.push_back({i, i + 1});
  }

  std::vector<SingularityReport> reports;
  for (double c : known) {
    SingularityReport r = classify_point(c, stencil, options);
    r.known_critical = true;
    reports.push_back(std::move(r));
  }
  for (auto [a, b] : clusters) {
    double lo = grid[a], hi = grid[b];
    double f_lo = second[a], f_hi = second[b];
    // Keep the half that carries more of the change in the second derivative.
    while (hi - lo > options.locate_tolerance) {
      const double mid = 0.5 * (lo + hi);
      double f_mid;
      try {
        f_mid = screen(mid, std::min(1e-3, (hi - lo) / 10));
      } catch (const std::exception&) {
        break;
      }
      if (std::abs(f_mid - f_lo) > std::abs(f_hi - f_mid)) {
        hi = mid;
        f_hi = f_mid;
      } else {
        lo = mid;
        f_lo = f_mid;
      }
    }
    // A grid outlier that turns out smooth up close is not reported.
    SingularityReport r = classify_point(0.5 * (lo + hi), stencil, options);
    if (r.classification != Singularity::regular) reports.push_back(std::move(r));
  }
  std::sort(reports.begin(), reports.end(),
            [](const auto& x, const auto& y) { return x.lambda_star < y.lambda_star; });
  return reports;
}

ScalingFit least_squares(std::vector<std::array<double, 2>> samples) {
  if (samples.size() < 3) throw InputError("scaling fit needs at least 3 valid samples");
  const double n = static_cast<double>(samples.size());
  double mx = 0, my = 0;
  for (const auto& s : samples) {
    mx += s[0] / n;
    my += s[1] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& s : samples) {
    sxx += (s[0] - mx) * (s[0] - mx);
    sxy += (s[0] - mx) * (s[1] - my);
    syy += (s[1] - my) * (s[1] - my);
  }
  if (!(sxx > 0)) throw InputError("scaling fit needs distinct abscissae");

  ScalingFit fit;
  fit.samples = std::move(samples);
  if (syy <= 1e-24 * n * (1 + my * my)) {
    fit.degenerate = true;
    fit.slope = 0;
    fit.intercept = my;
    fit.r_squared = 0;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& s : fit.samples) {
    const double r = s[1] - (fit.intercept + fit.slope * s[0]);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

ScalingFit scaling_fit(const StencilFn& derivatives, double lambda_c,
                       std::span<const double> epsilons, int side) {
  if (side != 1 && side != -1) throw InputError("side must be +1 or -1");
  if (lambda_c == 0) throw InputError("lambda_c must be nonzero for ln(eps / lambda_c)");
  std::vector<std::array<double, 2>> samples;
  std::vector<std::string> skipped;
  for (double e : epsilons) {
    if (!(e > 0)) throw InputError("epsilons must be positive");
    try {
      const double v = derivatives(lambda_c + side * e, stencil_step(e))[1].value;
      samples.push_back({std::log(e / std::abs(lambda_c)), v});
    } catch (const std::exception& ex) {
      skipped.push_back(ex.what());
    }
  }
  ScalingFit fit = least_squares(std::move(samples));
  fit.skipped = std::move(skipped);
  return fit;
}

ScalingFit scaling_fit(int d, double gamma, Quantity quantity, double lambda_c,
                       std::span<const double> epsilons, int side,
                       const EvaluationSettings& settings) {
  return scaling_fit(quantity_stencil(d, gamma, quantity, settings), lambda_c, epsilons, side);
}

}  // namespace fermigp
