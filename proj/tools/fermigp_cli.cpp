// fermigp: sweeps, finite lattices, singularity scans and scaling fits.
//
// Every option lives on the top-level app so a key = value config file
// (--config) can set any of them; command-line flags win over the file.
// Worker threads: FERMIGP_WORKERS.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fermigp/cli_io.hpp"

namespace {

int fail(const char* kind, const std::string& message, int status) {
  std::string line = message;
  for (char& ch : line)
    if (ch == '\n') ch = ' ';
  std::cerr << "fermigp: error[" << kind << "]: " << line << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  using fermigp::RunConfig;
  RunConfig cfg;
  CLI::App app{"Concurrence and geometric phase of hypercubic free-fermion models"};
  app.set_config("--config", "", "key = value file; flags override it");
  app.require_subcommand(1);

  app.add_option("--dim", cfg.d, "lattice dimension (1-3)");
  app.add_option("--gamma", cfg.gamma, "pairing potential");
  app.add_option("--lambda", cfg.lambda, "chemical potential (finite)");
  app.add_option("--lambda-start", cfg.lambda_start, "first lambda of a sweep or scan");
  app.add_option("--lambda-end", cfg.lambda_end, "last lambda");
  app.add_option("--steps", cfg.steps, "number of lambda samples");
  app.add_option("--grid", cfg.grid, "finest points per axis (0 = default)");
  app.add_option("--refine", cfg.refine, "refinement levels");
  app.add_option("--tol", cfg.tol, "relative tolerance for convergence flags");
  auto* method = app.add_option("--method", cfg.method, "grid or walk");
  app.add_option("--fd-step", cfg.fd_step, "finite-difference step for sweeps");
  app.add_option("--lattice-n", cfg.lattice_n, "sites per side (finite, bounds)");
  app.add_option("--site", cfg.site, "site index (-1 = all)");
  app.add_option("--direction", cfg.direction, "bond direction (-1 = all)");
  app.add_flag("--oracle", cfg.oracle, "compare with the Fock-space oracle");
  app.add_flag("--bounds", cfg.bounds, "add concurrence bound columns");
  app.add_option("--seed", cfg.seed, "random seed (bounds)");
  app.add_option("--count", cfg.count, "random instances (bounds)");
  app.add_option("--quantity", cfg.quantity, "c_two or gamma_g (scan, scaling)");
  app.add_option("--lambda-c", cfg.lambda_c, "critical point (scaling)");
  app.add_option("--side", cfg.side, "+1 or -1 (scaling)");
  app.add_option("--eps-min", cfg.eps_min, "smallest distance to lambda-c");
  app.add_option("--eps-max", cfg.eps_max, "largest distance to lambda-c");
  app.add_option("--samples", cfg.samples, "log-spaced distances (scaling)");
  app.add_option("--output", cfg.output, "CSV path, - for stdout");

  for (const char* name : {"sweep", "finite", "scan", "scaling", "bounds"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (method->count() == 0 && (cfg.subcommand == "scan" || cfg.subcommand == "scaling"))
    cfg.method = "walk";

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    return fail("invalid-config", e.what(), 2);
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (cfg.output != "-") {
    file.open(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) return fail("io", "cannot open '" + cfg.output + "' for writing", 4);
    out = &file;
  }

  std::ostringstream csv, summary;
  int status = 0;
  try {
    if (cfg.subcommand == "sweep") {
      fermigp::write_sweep_csv(csv, fermigp::run_sweep(cfg));
    } else if (cfg.subcommand == "finite") {
      status = fermigp::run_finite(cfg, csv, summary);
    } else if (cfg.subcommand == "bounds") {
      status = fermigp::run_bounds(cfg, csv, summary);
    } else if (cfg.subcommand == "scan") {
      status = fermigp::run_scan(cfg, csv, summary);
    } else {
      status = fermigp::run_scaling(cfg, csv, summary);
    }
  } catch (const fermigp::InputError& e) {
    return fail("invalid-config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("computation", e.what(), 3);
  }

  *out << csv.str();
  out->flush();
  if (!*out) return fail("io", "write to '" + cfg.output + "' failed", 4);

  const std::string text = summary.str();
  if (!text.empty()) {
    if (cfg.output == "-") {
      std::cerr << text;
    } else {
      std::cout << text;
      std::ofstream side(cfg.output + ".summary.txt", std::ios::binary | std::ios::trunc);
      side << text;
      if (!side) return fail("io", "cannot write summary next to '" + cfg.output + "'", 4);
    }
  }
  return status;
}
