#pragma once

// Thermodynamic-limit correlators and geometric phase of the hypercubic model.
//
// Everything reduces to three Brillouin-zone averages
//   p3 = <t/Lambda>,  X = <gamma S^2 / Lambda> / d,  Y = <t C / Lambda> / d
// with C = sum cos k, S = sum sin k. Then p11 = X - Y, p22 = -X - Y,
// p33 = p3^2 - Y^2 + X^2 and gamma_g = (pi/2)(1 - p3). X and Y are kept apart
// so gamma -> -gamma only flips the sign of X (p11 and p22 trade places).

#include <Eigen/Core>
#include <numbers>
#include <span>
#include <vector>

#include "fermigp/correlation_set.hpp"
#include "fermigp/lattice_model.hpp"
#include "fermigp/quadrature.hpp"
#include "fermigp/walk_quadrature.hpp"

namespace fermigp {

struct TlMoments {
  double p3 = 0;
  double x = 0;
  double y = 0;
};

struct MomentEvaluation {
  TlMoments value;
  TlMoments error;
  bool converged = false;
  long long points_used = 0;
};

// Largest number of lambdas a single grid pass carries.
inline constexpr int kMaxBatch = 8;

// One tensor-grid pass for several lambdas at once.
std::vector<MomentEvaluation> tl_moments_grid(int d, double gamma,
                                              std::span<const double> lambdas,
                                              const QuadratureSpec& spec);

MomentEvaluation tl_moments_walk(int d, double gamma, double lambda, const WalkSpec& spec);

// Moments with their first and second lambda-derivatives from differentiated
// integrands: row 0 value, row 1 first, row 2 second derivative.
struct MomentDerivatives {
  TlMoments rows[3];
  TlMoments error[3];
};
MomentDerivatives tl_moment_derivatives_walk(int d, double gamma, double lambda,
                                             const WalkSpec& spec);

CorrelationSet correlations_from_moments(const TlMoments& m);

// Linear error propagation from moment errors to correlators.
CorrelationSet correlation_errors(const TlMoments& m, const TlMoments& err);

inline double gp_from_p3(double p3) { return 0.5 * std::numbers::pi * (1.0 - p3); }

struct CorrelationResult {
  CorrelationSet p;
  CorrelationSet error;
  bool converged = false;
};

struct GeometricPhaseResult {
  double gamma_g = 0;
  double error_estimate = 0;
  bool converged = false;
};

CorrelationResult correlations_tl(const ModelParams& params, const QuadratureSpec& spec);
CorrelationResult correlations_tl(const ModelParams& params, const WalkSpec& spec);

GeometricPhaseResult geometric_phase_tl(const ModelParams& params, const QuadratureSpec& spec);
GeometricPhaseResult geometric_phase_tl(const ModelParams& params, const WalkSpec& spec);

// gamma = 0 has two readings: the Lambda >= 0 convention gives pi times the
// Brillouin-zone fraction where t < 0; dropping the Bogoliubov rotation
// altogether (h = 0) gives 0.
struct GammaZeroPhase {
  GeometricPhaseResult filled_fraction;
  double no_pairing = 0.0;
};

GammaZeroPhase gp_gamma_zero(const ModelParams& params, const QuadratureSpec& spec);

}  // namespace fermigp
