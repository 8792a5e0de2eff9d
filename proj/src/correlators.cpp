#include "fermigp/correlators.hpp"

#include <cmath>
#include <string>

namespace fermigp {

namespace {

using MomentArray = Eigen::Array<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3 * kMaxBatch, 1>;

struct Ratios {
  double q, x, y;
};

// t/Lambda, gamma S^2/Lambda, t C/Lambda (the last two not yet divided by d).
inline Ratios ratios(double c, double s, double gamma, double lambda) {
  const double t = c - lambda;
  const double delta = gamma * s;
  const double energy = std::sqrt(t * t + delta * delta);
  if (energy < kZeroGap) return {0.0, 0.0, 0.0};
  const double inv = 1.0 / energy;
  return {t * inv, delta * s * inv, t * c * inv};
}

void check(int d, double gamma, double lambda) {
  ModelParams{d, gamma, lambda}.validate();
}

TlMoments moments_at(const MomentArray& a, int j, int d) {
  return {a[3 * j], a[3 * j + 1] / d, a[3 * j + 2] / d};
}

}  // namespace

std::vector<MomentEvaluation> tl_moments_grid(int d, double gamma,
                                              std::span<const double> lambdas,
                                              const QuadratureSpec& spec) {
  if (lambdas.empty()) return {};
  if (lambdas.size() > static_cast<std::size_t>(kMaxBatch))
    throw InputError("at most " + std::to_string(kMaxBatch) + " lambdas per grid pass");
  for (double lam : lambdas) check(d, gamma, lam);
  const int nl = static_cast<int>(lambdas.size());

  auto integrand = [&](const BzPoint& p) {
    double c = 0, s = 0;
    for (std::size_t a = 0; a < p.cos_k.size(); ++a) {
      c += p.cos_k[a];
      s += p.sin_k[a];
    }
    MomentArray out(3 * nl);
    for (int j = 0; j < nl; ++j) {
      const Ratios r = ratios(c, s, gamma, lambdas[j]);
      out[3 * j] = r.q;
      out[3 * j + 1] = r.x;
      out[3 * j + 2] = r.y;
    }
    return out;
  };
  const auto res = integrate_bz(integrand, d, spec);
  const double volume = std::pow(2.0 * std::numbers::pi, d);
  const MomentArray value = res.value / volume;
  const MomentArray error = res.error_estimate / volume;

  std::vector<MomentEvaluation> out(nl);
  for (int j = 0; j < nl; ++j) {
    out[j].value = moments_at(value, j, d);
    out[j].error = moments_at(error, j, d);
    out[j].converged = detail::within(error.segment(3 * j, 3), value.segment(3 * j, 3),
                                      spec.rel_tol);
    out[j].points_used = res.points_used;
  }
  return out;
}

MomentEvaluation tl_moments_walk(int d, double gamma, double lambda, const WalkSpec& spec) {
  check(d, gamma, lambda);
  auto f = [&](double c, double s) {
    const Ratios r = ratios(c, s, gamma, lambda);
    return Eigen::Array3d(r.q, r.x, r.y);
  };
  const double focus[] = {lambda};
  const auto res = walk_average(d, f, focus, spec);
  MomentEvaluation out;
  out.value = {res.value[0], res.value[1] / d, res.value[2] / d};
  out.error = {res.error_estimate[0], res.error_estimate[1] / d, res.error_estimate[2] / d};
  out.converged = res.converged;
  return out;
}

MomentDerivatives tl_moment_derivatives_walk(int d, double gamma, double lambda,
                                             const WalkSpec& spec) {
  check(d, gamma, lambda);
  using Array9 = Eigen::Array<double, 9, 1>;
  // dt/dlambda = -1; with w = 1/Lambda: w' = t w^3, w'' = (3t^2 - Lambda^2) w^5.
  auto f = [&](double c, double s) {
    const double t = c - lambda;
    const double delta = gamma * s;
    const double e2 = t * t + delta * delta;
    Array9 v = Array9::Zero();
    if (std::sqrt(e2) < kZeroGap) return v;
    const double w = 1.0 / std::sqrt(e2);
    const double w1 = t * w * w * w;
    const double w2 = (3.0 * t * t - e2) * w * w * w * w * w;
    const double pair = gamma * s * s;
    v << t * w, -delta * delta * w * w * w, -3.0 * t * delta * delta * w * w * w * w * w,
        pair * w, pair * w1, pair * w2,
        t * c * w, c * (t * w1 - w), c * (t * w2 - 2.0 * w1);
    return v;
  };
  const double focus[] = {lambda};
  const auto res = walk_average(d, f, focus, spec);
  MomentDerivatives out;
  for (int r = 0; r < 3; ++r) {
    out.rows[r] = {res.value[r], res.value[3 + r] / d, res.value[6 + r] / d};
    out.error[r] = {res.error_estimate[r], res.error_estimate[3 + r] / d,
                    res.error_estimate[6 + r] / d};
  }
  return out;
}

CorrelationSet correlations_from_moments(const TlMoments& m) {
  CorrelationSet p;
  p.p03 = p.p30 = m.p3;
  p.p11 = m.x - m.y;
  p.p22 = -m.x - m.y;
  p.p33 = m.p3 * m.p3 - m.y * m.y + m.x * m.x;
  return p;
}

CorrelationSet correlation_errors(const TlMoments& m, const TlMoments& e) {
  CorrelationSet p;
  p.p00 = 0;
  p.p03 = p.p30 = e.p3;
  p.p11 = p.p22 = e.x + e.y;
  p.p33 = 2.0 * (std::abs(m.p3) * e.p3 + std::abs(m.y) * e.y + std::abs(m.x) * e.x);
  return p;
}

namespace {

CorrelationResult to_result(const MomentEvaluation& ev) {
  return {correlations_from_moments(ev.value), correlation_errors(ev.value, ev.error),
          ev.converged};
}

GeometricPhaseResult gp_result(const MomentEvaluation& ev) {
  return {gp_from_p3(ev.value.p3), 0.5 * std::numbers::pi * ev.error.p3, ev.converged};
}

}  // namespace

CorrelationResult correlations_tl(const ModelParams& params, const QuadratureSpec& spec) {
  const double lam[] = {params.lambda};
  return to_result(tl_moments_grid(params.d, params.gamma, lam, spec).front());
}

CorrelationResult correlations_tl(const ModelParams& params, const WalkSpec& spec) {
  return to_result(tl_moments_walk(params.d, params.gamma, params.lambda, spec));
}

GeometricPhaseResult geometric_phase_tl(const ModelParams& params, const QuadratureSpec& spec) {
  const double lam[] = {params.lambda};
  return gp_result(tl_moments_grid(params.d, params.gamma, lam, spec).front());
}

GeometricPhaseResult geometric_phase_tl(const ModelParams& params, const WalkSpec& spec) {
  return gp_result(tl_moments_walk(params.d, params.gamma, params.lambda, spec));
}

GammaZeroPhase gp_gamma_zero(const ModelParams& params, const QuadratureSpec& spec) {
  if (params.gamma != 0.0) throw InputError("gp_gamma_zero needs gamma = 0");
  GammaZeroPhase out;
  out.filled_fraction = geometric_phase_tl(params, spec);
  return out;
}

}  // namespace fermigp
