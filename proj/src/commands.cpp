#include <algorithm>
#include <random>

#include "fermigp/cli_io.hpp"

namespace fermigp {

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const EvaluationSettings settings = cfg.settings();
  std::vector<SweepRow> rows;
  for (double lam : cfg.lambdas()) {
    const StencilDerivatives sd = stencil_derivatives(cfg.d, cfg.gamma, lam, cfg.fd_step, settings);
    const PointValues& v = sd.centre;
    SweepRow r;
    r.d = cfg.d;
    r.gamma = cfg.gamma;
    r.lambda = lam;
    r.p3 = v.p.p30;
    r.p11 = v.p.p11;
    r.p22 = v.p.p22;
    r.p33 = v.p.p33;
    r.c_one = v.c.c_one;
    r.c_two = v.c.c_two;
    r.c = v.c.c;
    r.gamma_g = v.gamma_g;
    r.d1_cII = sd.d1_c_two.value;
    r.d2_cII = sd.d2_c_two.value;
    r.d1_gp = sd.d1_gp.value;
    r.d2_gp = sd.d2_gp.value;
    r.quad_error = v.quad_error;
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::vector<int> directions_of(const RunConfig& cfg) {
  std::vector<int> dirs;
  for (int dir = 0; dir < cfg.d; ++dir)
    if (cfg.direction < 0 || cfg.direction == dir) dirs.push_back(dir);
  return dirs;
}

double max_abs_diff(const CorrelationSet& a, const CorrelationSet& b) {
  return std::max({std::abs(a.p00 - b.p00), std::abs(a.p03 - b.p03), std::abs(a.p30 - b.p30),
                   std::abs(a.p11 - b.p11), std::abs(a.p22 - b.p22), std::abs(a.p33 - b.p33),
                   std::abs(a.p12 - b.p12), std::abs(a.p21 - b.p21)});
}

}  // namespace

int run_finite(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
  cfg.validate();
  const CouplingMatrices m = build_couplings(cfg.d, cfg.lattice_n, cfg.gamma, cfg.lambda);
  const BogoliubovSpectrum s = diagonalize(m);
  const SiteGeometricPhase gp = site_gp(s);
  const int L = s.total_sites;

  ManyBodyResult mb;
  const ManyBodyState* state = nullptr;
  if (cfg.oracle) {
    mb = many_body_oracle(m);
    // Within a degenerate multiplet, compare with the member whose parity
    // matches the free-fermion vacuum.
    for (const auto& st : mb.multiplet)
      if ((st.parity > 0) == (s.vacuum_parity > 0)) state = &st;
    if (!state) state = &mb.multiplet.front();
  }

  out << "site,direction,neighbor,p30,p03,p11,p22,p33,c_one,c_two,c,gamma_gi,gamma_gj,gp_total,"
         "degenerate";
  if (cfg.bounds) out << ",c1_bound,c2_bound,ok_one,ok_two";
  if (cfg.oracle) out << ",oracle_p30,oracle_p03,oracle_p11,oracle_p22,oracle_p33,oracle_p12,oracle_p21,"
                         "energy,oracle_energy,max_abs_diff";
  out << '\n';

  double worst = 0;
  bool all_ok = true;
  for (int i = 0; i < L; ++i) {
    if (cfg.site >= 0 && cfg.site != i) continue;
    for (int dir : directions_of(cfg)) {
      const int j = s.neighbor(i, dir);
      const CorrelationSet p = correlations_finite(s, i, dir);
      const auto c = concurrence_closed(p);
      out << i << ',' << dir << ',' << j;
      for (double v : {p.p30, p.p03, p.p11, p.p22, p.p33, c.c_one, c.c_two, c.c, gp.per_site[i],
                       gp.per_site[j], gp.total})
        out << ',' << format_real(v);
      out << ',' << (s.degenerate ? 1 : 0);
      if (cfg.bounds) {
        const BoundCheck b = check_bounds(s, i, dir);
        all_ok = all_ok && b.satisfied[0] && b.satisfied[1];
        out << ',' << format_real(b.c1_bound) << ',' << format_real(b.c2_bound) << ','
            << b.satisfied[0] << ',' << b.satisfied[1];
      }
      if (cfg.oracle) {
        const CorrelationSet& q = state->bonds[dir * L + i];
        const double diff = std::max(max_abs_diff(p, q), std::abs(s.ground_energy - mb.ground_energy));
        worst = std::max(worst, diff);
        for (double v : {q.p30, q.p03, q.p11, q.p22, q.p33, q.p12, q.p21, s.ground_energy,
                         mb.ground_energy, diff})
          out << ',' << format_real(v);
      }
      out << '\n';
    }
  }

  summary << "finite lattice d=" << cfg.d << " n=" << cfg.lattice_n << " gamma=" << format_real(cfg.gamma)
          << " lambda=" << format_real(cfg.lambda) << '\n'
          << "ground energy " << format_real(s.ground_energy) << ", vacuum parity "
          << s.vacuum_parity << (s.degenerate ? ", zero modes present" : "") << '\n'
          << "total geometric phase " << format_real(gp.total) << '\n';
  if (cfg.bounds) summary << "bounds satisfied: " << (all_ok ? "yes" : "no") << '\n';
  if (cfg.oracle)
    summary << "oracle max abs diff " << format_real(worst)
            << (mb.degenerate ? " (degenerate multiplet, parity-matched member)" : "") << '\n';
  return 0;
}

int run_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> gamma_dist(-2.0, 2.0), lambda_dist(0.0, 4.0);
  out << "instance,gamma,lambda,site,direction,c1_raw,c1_bound,c2_raw,c2_bound,ok_one,ok_two\n";
  int failures = 0;
  double margin_one = -1e300, margin_two = -1e300;
  for (int inst = 0; inst < cfg.count; ++inst) {
    const double gamma = gamma_dist(rng);
    const double lambda = lambda_dist(rng);
    const BogoliubovSpectrum s = diagonalize(build_couplings(cfg.d, cfg.lattice_n, gamma, lambda));
    for (int i = 0; i < s.total_sites; ++i) {
      if (cfg.site >= 0 && cfg.site != i) continue;
      for (int dir : directions_of(cfg)) {
        const BoundCheck b = check_bounds(s, i, dir);
        failures += !b.satisfied[0] + !b.satisfied[1];
        margin_one = std::max(margin_one, b.c1_raw - b.c1_bound);
        margin_two = std::max(margin_two, b.c2_raw - b.c2_bound);
        out << inst << ',' << format_real(gamma) << ',' << format_real(lambda) << ',' << i << ','
            << dir << ',' << format_real(b.c1_raw) << ',' << format_real(b.c1_bound) << ','
            << format_real(b.c2_raw) << ',' << format_real(b.c2_bound) << ',' << b.satisfied[0]
            << ',' << b.satisfied[1] << '\n';
      }
    }
  }
  summary << cfg.count << " random instances, d=" << cfg.d << " n=" << cfg.lattice_n
          << ", seed " << cfg.seed << '\n'
          << "largest c_I - bound: " << format_real(margin_one) << '\n'
          << "largest c_II - bound: " << format_real(margin_two) << '\n'
          << "violations: " << failures << '\n';
  return 0;
}

int run_scan(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
  cfg.validate();
  ScanOptions opt;
  opt.settings = cfg.settings();
  const auto grid = cfg.lambdas();
  const auto reports = critical_scan(cfg.d, cfg.gamma, grid, cfg.parsed_quantity(), opt);
  out << "lambda_star,classification,known_critical,side,epsilon,order,derivative,error_estimate,ok\n";
  summary << "scan d=" << cfg.d << " gamma=" << format_real(cfg.gamma) << " quantity="
          << cfg.quantity << " method=" << cfg.method << '\n';
  for (const auto& r : reports) {
    for (const auto& g : r.growth_factors)
      out << format_real(r.lambda_star) << ',' << to_string(r.classification) << ','
          << r.known_critical << ',' << g.side << ',' << format_real(g.epsilon) << ',' << g.order
          << ',' << format_real(g.signed_value) << ',' << format_real(g.error_estimate) << ','
          << g.ok << '\n';
    summary << "lambda* = " << format_real(r.lambda_star) << "  " << to_string(r.classification)
            << (r.known_critical ? "  (phase boundary)" : "  (grid cusp)") << '\n';
  }
  if (reports.empty()) summary << "no candidate points\n";
  return 0;
}

int run_scaling(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
  cfg.validate();
  const auto eps = cfg.epsilons();
  const ScalingFit fit = scaling_fit(cfg.d, cfg.gamma, cfg.parsed_quantity(), cfg.lambda_c, eps,
                                     cfg.side, cfg.settings());
  out << "log_ratio,second_derivative\n";
  for (const auto& s : fit.samples) out << format_real(s[0]) << ',' << format_real(s[1]) << '\n';
  summary << "scaling d=" << cfg.d << " gamma=" << format_real(cfg.gamma) << " quantity="
          << cfg.quantity << " lambda_c=" << format_real(cfg.lambda_c) << " side=" << cfg.side
          << " method=" << cfg.method << '\n'
          << "slope = " << format_real(fit.slope) << '\n'
          << "intercept = " << format_real(fit.intercept) << '\n'
          << "r_squared = " << format_real(fit.r_squared) << '\n'
          << "degenerate = " << (fit.degenerate ? "yes" : "no") << '\n'
          << "samples = " << fit.samples.size() << ", skipped = " << fit.skipped.size() << '\n';
  return 0;
}

}  // namespace fermigp
