#include "fermigp/cli_io.hpp"

#include <cmath>
#include <cstdio>

namespace fermigp {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RunConfig::validate() const {
  require(subcommand == "sweep" || subcommand == "finite" || subcommand == "scan" ||
              subcommand == "scaling" || subcommand == "bounds",
          "unknown subcommand '" + subcommand + "'");
  require(d >= 1 && d <= 3, "dim must be 1, 2 or 3");
  require(finite(gamma), "gamma must be finite");
  require(finite(lambda), "lambda must be finite");
  require(method == "grid" || method == "walk", "method must be 'grid' or 'walk'");
  require(refine >= 1 && refine <= 12, "refine must be in [1, 12]");
  require(tol > 0 && finite(tol), "tol must be positive");
  require(grid >= 0, "grid must be positive (or 0 for the default)");
  if (grid > 0 || method == "grid") settings().grid.validate();
  require(output.size() > 0, "output path must not be empty");

  if (subcommand == "sweep" || subcommand == "scan") {
    require(finite(lambda_start) && finite(lambda_end), "lambda range must be finite");
    require(steps >= 1, "steps must be at least 1");
    require(steps == 1 || lambda_end > lambda_start,
            "lambda-end must exceed lambda-start when steps > 1");
    require(fd_step > 0 && fd_step < 1, "fd-step must lie in (0, 1)");
  }
  if (subcommand == "scan") require(steps >= 3, "scan needs at least 3 steps");
  if (subcommand == "scan" || subcommand == "scaling") {
    require(quantity == "c_two" || quantity == "gamma_g", "quantity must be 'c_two' or 'gamma_g'");
  }
  if (subcommand == "scaling") {
    require(finite(lambda_c) && lambda_c != 0, "lambda-c must be finite and nonzero");
    require(side == 1 || side == -1, "side must be 1 or -1");
    require(eps_min > 0 && eps_max > eps_min && eps_max < 1, "need 0 < eps-min < eps-max < 1");
    require(samples >= 3, "samples must be at least 3");
  }
  if (subcommand == "finite" || subcommand == "bounds") {
    require(lattice_n >= 3, "lattice-n must be at least 3");
    long long sites = 1;
    for (int a = 0; a < d; ++a) sites *= lattice_n;
    require(sites <= kMaxSites, "lattice too large");
    require(site >= -1 && site < sites, "site out of range");
    require(direction >= -1 && direction < d, "direction out of range");
    if (oracle) require(sites <= kManyBodyMaxSites, "oracle needs at most 12 sites");
  }
  if (subcommand == "bounds") require(count >= 1, "count must be at least 1");
}

EvaluationSettings RunConfig::settings() const {
  EvaluationSettings s = EvaluationSettings::defaults(d, method == "walk" ? Route::walk : Route::grid);
  if (grid > 0) s.grid.points_per_axis = grid;
  s.grid.refinement_levels = refine;
  s.grid.rel_tol = tol;
  return s;
}

Quantity RunConfig::parsed_quantity() const {
  return quantity == "gamma_g" ? Quantity::geometric_phase : Quantity::c_two;
}

std::vector<double> RunConfig::lambdas() const {
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i)
    out[i] = steps == 1 ? lambda_start
                        : lambda_start + (lambda_end - lambda_start) * i / (steps - 1);
  return out;
}

std::vector<double> RunConfig::epsilons() const {
  std::vector<double> out(samples);
  const double a = std::log10(eps_max), b = std::log10(eps_min);
  for (int i = 0; i < samples; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (samples - 1));
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.d;
    for (double v : {r.gamma, r.lambda, r.p3, r.p11, r.p22, r.p33, r.c_one, r.c_two, r.c,
                     r.gamma_g, r.d1_cII, r.d2_cII, r.d1_gp, r.d2_gp, r.quad_error})
      out << ',' << format_real(v);
    out << '\n';
  }
}

}  // namespace fermigp
