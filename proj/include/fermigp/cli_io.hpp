#pragma once

// Run configuration and CSV output for the command-line driver.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fermigp/analysis.hpp"
#include "fermigp/finite_lattice.hpp"

namespace fermigp {

struct SweepRow {
  int d = 1;
  double gamma = 0;
  double lambda = 0;
  double p3 = 0;
  double p11 = 0;
  double p22 = 0;
  double p33 = 0;
  double c_one = 0;
  double c_two = 0;
  double c = 0;
  double gamma_g = 0;
  double d1_cII = 0;
  double d2_cII = 0;
  double d1_gp = 0;
  double d2_gp = 0;
  double quad_error = 0;
};

inline constexpr const char* kSweepHeader =
    "d,gamma,lambda,p3,p11,p22,p33,c_one,c_two,c,gamma_g,d1_cII,d2_cII,d1_gp,d2_gp,quad_error";

struct RunConfig {
  std::string subcommand;
  int d = 1;
  double gamma = 1.0;
  double lambda = 0.5;  // single-point commands
  double lambda_start = 0.0;
  double lambda_end = 4.0;
  int steps = 81;
  int grid = 0;  // 0: per-dimension default
  int refine = 3;
  double tol = 1e-8;
  std::string method = "grid";  // sweep default; scan and scaling use walk
  double fd_step = 1e-3;
  int lattice_n = 8;
  int site = -1;       // -1: all sites
  int direction = -1;  // -1: all directions
  bool oracle = false;
  bool bounds = false;
  std::uint64_t seed = 1;
  int count = 100;
  std::string quantity = "c_two";
  double lambda_c = 3.0;
  int side = 1;
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  int samples = 7;
  std::string output = "-";

  // Throws InputError naming the offending field.
  void validate() const;
  EvaluationSettings settings() const;
  Quantity parsed_quantity() const;
  std::vector<double> lambdas() const;
  std::vector<double> epsilons() const;
};

// 17 significant digits, C locale; enough to round-trip any double.
std::string format_real(double v);

std::vector<SweepRow> run_sweep(const RunConfig& cfg);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// The remaining commands write CSV to `out` and a plain-text summary to
// `summary`. Return value is the process exit status.
int run_finite(const RunConfig& cfg, std::ostream& out, std::ostream& summary);
int run_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& summary);
int run_scan(const RunConfig& cfg, std::ostream& out, std::ostream& summary);
int run_scaling(const RunConfig& cfg, std::ostream& out, std::ostream& summary);

}  // namespace fermigp
