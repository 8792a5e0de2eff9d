#pragma once

// Lambda-derivatives of c_II and gamma_g, classification of candidate
// critical points, and log-scaling fits of the second derivative.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fermigp/concurrence.hpp"
#include "fermigp/correlators.hpp"
#include "fermigp/error.hpp"

namespace fermigp {

struct DerivativeEstimate {
  double value = 0;
  int order = 1;
  double step = 0;
  double error_estimate = 0;
};

// Offsets (in units of h) at which a stencil pair (h and h/2) samples f.
inline constexpr std::array<double, 7> kStencilOffsets{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

// Five-point central differences at step s from samples f(x0 + k s), k = -2..2.
template <class T>
T central_first(const T& m2, const T& m1, const T& p1, const T& p2, double s) {
  return T((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * s));
}
template <class T>
T central_second(const T& m2, const T& m1, const T& c, const T& p1, const T& p2, double s) {
  return T((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * s * s));
}

// Value from step h; error = |D(h) - D(h/2)|. f holds samples at kStencilOffsets.
DerivativeEstimate derivative_from_samples(const std::array<double, 7>& f, double h, int order);

template <class F>
DerivativeEstimate derivative(F&& f, double x0, int order, double h) {
  if (order != 1 && order != 2) throw InputError("derivative order must be 1 or 2");
  if (!(h > 0)) throw InputError("derivative step must be positive");
  std::array<double, 7> samples{};
  for (int k = 0; k < 7; ++k) {
    const double x = x0 + kStencilOffsets[k] * h;
    samples[k] = f(x);
    if (!std::isfinite(samples[k])) throw EvaluationError("non-finite sample", {x});
  }
  return derivative_from_samples(samples, h, order);
}

// How thermodynamic-limit values are obtained.
enum class Route { grid, walk };

struct EvaluationSettings {
  Route route = Route::grid;
  QuadratureSpec grid;
  WalkSpec walk;

  static EvaluationSettings defaults(int d, Route route);
};

struct PointValues {
  double lambda = 0;
  TlMoments moments;
  TlMoments moment_error;
  CorrelationSet p;
  ConcurrenceResult<double> c;
  double gamma_g = 0;
  double quad_error = 0;  // largest error estimate over the moments
  bool converged = false;
};

// Values at each lambda, in input order. The grid route batches lambdas into
// shared passes; the walk route runs lambdas on separate workers.
std::vector<PointValues> evaluate_points(int d, double gamma, std::span<const double> lambdas,
                                         const EvaluationSettings& settings);

enum class Quantity { c_two, geometric_phase };

double quantity_value(const PointValues& v, Quantity q);
const char* to_string(Quantity q);

// First and second derivatives of c_II and gamma_g at x0 from one stencil.
struct StencilDerivatives {
  PointValues centre;
  DerivativeEstimate d1_c_two, d2_c_two, d1_gp, d2_gp;
  double quad_error = 0;  // worst over all stencil samples
};

StencilDerivatives stencil_derivatives(int d, double gamma, double x0, double h,
                                       const EvaluationSettings& settings);

enum class Singularity {
  divergent_first_derivative,
  divergent_second_derivative,
  cusp_finite_second,
  regular
};

const char* to_string(Singularity s);

struct GrowthSample {
  double epsilon = 0;
  int side = 1;            // +1: lambda* + eps, -1: lambda* - eps
  int order = 1;
  double magnitude = 0;    // |derivative|
  double signed_value = 0;
  double error_estimate = 0;
  bool ok = true;
  std::string failure;     // set when the sample could not be evaluated
};

struct SingularityReport {
  double lambda_star = 0;
  Singularity classification = Singularity::regular;
  std::vector<GrowthSample> growth_factors;
  bool known_critical = false;  // from the phase diagram rather than the grid
};

struct ScanOptions {
  EvaluationSettings settings;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  // A series |D(eps)| diverges when it increases strictly as eps shrinks and
  // its last increment keeps at least this fraction of the first. Bounded
  // cusps settle geometrically; log and power divergences do not.
  double increment_retention = 0.5;
  double cusp_outlier_factor = 8.0;  // grid jump vs median jump
  double locate_tolerance = 1e-7;
};

// First and second derivative at lambda with step h.
using StencilFn = std::function<std::array<DerivativeEstimate, 2>(double lambda, double h)>;

// StencilFn for a plain function of lambda.
StencilFn stencil_of(std::function<double(double)> f);

// StencilFn for c_II or gamma_g of the model. On the grid route, steps below
// 1e-3 get one extra refinement level.
StencilFn quantity_stencil(int d, double gamma, Quantity quantity,
                           const EvaluationSettings& settings);

// Value, first and second lambda-derivative of c_II or gamma_g from
// differentiated walk integrands. Used to screen scan grids cheaply.
std::array<double, 3> quantity_derivatives_walk(int d, double gamma, Quantity quantity,
                                                double lambda, const WalkSpec& spec);

// Whether |D(eps)| for decreasing eps diverges (see ScanOptions).
bool diverges(std::span<const double> magnitudes, double increment_retention);

SingularityReport classify_point(double lambda_star, const StencilFn& derivatives,
                                 const ScanOptions& options);

std::vector<SingularityReport> critical_scan(int d, double gamma, std::span<const double> grid,
                                             Quantity quantity, const ScanOptions& options);

struct ScalingFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::vector<std::array<double, 2>> samples;  // (ln(eps / lambda_c), second derivative)
  bool degenerate = false;                     // no variance in the second derivative
  std::vector<std::string> skipped;            // samples that failed to evaluate
};

// Ordinary least squares of y on x.
ScalingFit least_squares(std::vector<std::array<double, 2>> samples);

// Regresses f''(lambda_c + side eps) on ln(eps / lambda_c).
ScalingFit scaling_fit(const StencilFn& derivatives, double lambda_c,
                       std::span<const double> epsilons, int side);

ScalingFit scaling_fit(int d, double gamma, Quantity quantity, double lambda_c,
                       std::span<const double> epsilons, int side,
                       const EvaluationSettings& settings);

// Step for a stencil eps away from a candidate point.
inline double stencil_step(double eps) { return std::min(1e-3, eps / 10.0); }

}  // namespace fermigp
