#include "fermigp/walk_quadrature.hpp"

#include <algorithm>
#include <string>

namespace fermigp {

void WalkSpec::validate() const {
  if (nodes_per_panel < 4 || nodes_per_panel > 200)
    throw InputError("nodes_per_panel must be in [4, 200]");
  if (!(grading_ratio > 0 && grading_ratio < 1))
    throw InputError("grading_ratio must lie in (0, 1)");
  if (!(min_width > 0)) throw InputError("min_width must be positive");
  if (!(rel_tol > 0)) throw InputError("rel_tol must be positive");
}

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// Legendre recurrence, weights 2 * (first eigenvector component)^2.
GaussRule gauss_legendre(int n) {
  if (n < 1) throw InputError("Gauss rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

double hypergeometric_2f1_third(double z, double w) {
  constexpr double a = 1.0 / 3.0, b = 2.0 / 3.0;
  if (w >= 0.5) {
    double sum = 1.0, term = 1.0;
    for (int n = 0; n < 400; ++n) {
      term *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * z;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  // Logarithmic case c = a + b (Abramowitz & Stegun 15.3.10).
  constexpr double euler = 0.57721566490153286061;
  const double ln3 = std::log(3.0);
  const double shift = std::numbers::pi / (2.0 * std::sqrt(3.0));
  double psi_a = -euler - 1.5 * ln3 - shift;
  double psi_b = -euler - 1.5 * ln3 + shift;
  double psi_1 = -euler;
  const double lw = std::log(w);
  double sum = 0.0, coef = 1.0;
  for (int n = 0; n < 400; ++n) {
    const double term = coef * (2.0 * psi_1 - psi_a - psi_b - lw);
    sum += term;
    if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
    psi_a += 1.0 / (a + n);
    psi_b += 1.0 / (b + n);
    psi_1 += 1.0 / (n + 1.0);
  }
  return std::sqrt(3.0) / (2.0 * std::numbers::pi) * sum;
}

double walk_density(int d, double r) {
  if (d == 2) {
    if (r <= 0 || r >= 2) return 0.0;
    return 2.0 / (std::numbers::pi * std::sqrt(4.0 - r * r));
  }
  if (d == 3) {
    if (r <= 0 || r >= 3) return r == 3 ? std::sqrt(3.0) / (2.0 * std::numbers::pi) : 0.0;
    const double x2 = r * r;
    const double q = 3.0 + x2;
    const double z = x2 * (9.0 - x2) * (9.0 - x2) / (q * q * q);
    const double w = 27.0 * (1.0 - x2) * (1.0 - x2) / (q * q * q);
    return 2.0 * std::sqrt(3.0) * r / (std::numbers::pi * q) * hypergeometric_2f1_third(z, w);
  }
  throw InputError("walk_density is defined for d = 2, 3 only");
}

std::vector<double> graded_breakpoints(double a, double b, std::span<const double> focus,
                                       const WalkSpec& spec) {
  std::vector<double> centres{a, b};
  for (double p : focus)
    if (p > a && p < b) centres.push_back(p);
  std::vector<double> br = centres;
  for (double p : centres) {
    for (double w = b - a; w > spec.min_width; w *= spec.grading_ratio) {
      if (p - w > a) br.push_back(p - w);
      if (p + w < b) br.push_back(p + w);
    }
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

namespace detail {

WeightedNodes composite_rule(const std::vector<double>& breaks, const GaussRule& rule) {
  WeightedNodes out;
  const auto n = rule.nodes.size();
  out.x.reserve((breaks.size() - 1) * n);
  out.w.reserve((breaks.size() - 1) * n);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.x.push_back(mid + half * rule.nodes[i]);
      out.w.push_back(half * rule.weights[i]);
    }
  }
  return out;
}

WeightedNodes radial_rule(int d, std::span<const double> focus_c, const GaussRule& rule,
                          const WalkSpec& spec) {
  std::vector<double> focus;
  if (d == 2) {
    for (double c : focus_c)
      if (std::abs(c) < 2) focus.push_back(std::asin(std::abs(c) / 2));
    auto nodes = composite_rule(graded_breakpoints(0, std::numbers::pi / 2, focus, spec), rule);
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      nodes.x[i] = 2.0 * std::sin(nodes.x[i]);
      nodes.w[i] *= 2.0 / std::numbers::pi;
    }
    return nodes;
  }
  focus.push_back(1.0);
  for (double c : focus_c)
    if (std::abs(c) < 3) focus.push_back(std::abs(c));
  auto nodes = composite_rule(graded_breakpoints(0, 3, focus, spec), rule);
  for (std::size_t i = 0; i < nodes.x.size(); ++i) nodes.w[i] *= walk_density(3, nodes.x[i]);
  return nodes;
}

}  // namespace detail
}  // namespace fermigp
