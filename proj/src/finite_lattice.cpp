#include "fermigp/finite_lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fermigp/concurrence.hpp"
#include "fermigp/error.hpp"

namespace fermigp {

int BogoliubovSpectrum::neighbor(int i, int direction) const {
  return periodic_neighbor(site_shape, i, direction);
}

BogoliubovSpectrum diagonalize(const CouplingMatrices& m) {
  const int L = m.total_sites;
  if (L < 1 || m.a.rows() != L || m.b.rows() != L)
    throw InputError("coupling matrices do not match total_sites");
  const Eigen::MatrixXd sum = m.a + m.b;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sum, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();

  BogoliubovSpectrum s;
  s.total_sites = L;
  s.site_shape = m.site_shape;
  s.energies = svd.singularValues();

  // Sign tie-break: first nonzero component of each phi_k positive. Flipping
  // u and v together keeps A + B = U S V^T and det(U V^T).
  for (int k = 0; k < L; ++k) {
    Eigen::Index first = 0;
    while (first < L && std::abs(v(first, k)) < 1e-12) ++first;
    if (first < L && v(first, k) < 0) {
      v.col(k) *= -1.0;
      u.col(k) *= -1.0;
    }
  }
  const double root_l = std::sqrt(static_cast<double>(L));
  s.phi = root_l * v.transpose();
  s.psi = root_l * u.transpose();
  s.g = 0.5 * (s.phi + s.psi);
  s.h = 0.5 * (s.phi - s.psi);

  const double scale = std::max(1.0, s.energies.size() ? s.energies[0] : 0.0);
  s.degenerate = (s.energies.array() < kZeroModeTolerance * scale).any();
  s.ground_energy = 0.5 * (m.a.trace() - s.energies.sum());
  s.vacuum_parity = (u * v.transpose()).determinant() > 0 ? 1 : -1;
  return s;
}

namespace {

void check_site(const BogoliubovSpectrum& s, int i, int direction) {
  if (i < 0 || i >= s.total_sites)
    throw InputError("site " + std::to_string(i) + " outside lattice of " +
                     std::to_string(s.total_sites) + " sites");
  if (direction < 0 || direction >= s.dimension())
    throw InputError("direction " + std::to_string(direction) + " outside a " +
                     std::to_string(s.dimension()) + "-dimensional lattice");
}

}  // namespace

CorrelationSet correlations_finite(const BogoliubovSpectrum& s, int i, int direction) {
  check_site(s, i, direction);
  const int j = s.neighbor(i, direction);
  const double L = s.total_sites;
  const auto hi = s.h.col(i), hj = s.h.col(j);
  const auto gi = s.g.col(i), gj = s.g.col(j);

  CorrelationSet p;
  p.p30 = 1.0 - 2.0 / L * hi.squaredNorm();
  p.p03 = 1.0 - 2.0 / L * hj.squaredNorm();
  p.p11 = (hi - gi).dot(hj + gj) / L;
  p.p22 = (hi + gi).dot(hj - gj) / L;
  p.p33 = p.p30 * p.p03 + 4.0 / (L * L) * (hi.dot(hj) * gi.dot(gj) - hi.dot(gj) * hj.dot(gi));
  return p;
}

CorrelationSet correlations_direction_average(const BogoliubovSpectrum& s, int i) {
  const int d = s.dimension();
  CorrelationSet avg;
  avg.p00 = 1;
  for (int dir = 0; dir < d; ++dir) {
    const CorrelationSet p = correlations_finite(s, i, dir);
    avg.p03 += p.p03 / d;
    avg.p30 += p.p30 / d;
    avg.p11 += p.p11 / d;
    avg.p22 += p.p22 / d;
    avg.p33 += p.p33 / d;
    avg.p12 += p.p12 / d;
    avg.p21 += p.p21 / d;
  }
  return avg;
}

SiteGeometricPhase site_gp(const BogoliubovSpectrum& s) {
  SiteGeometricPhase out;
  out.per_site = std::numbers::pi * s.h.colwise().squaredNorm().transpose();
  const double L = s.total_sites;
  out.total = out.per_site.sum() / (L * L);
  return out;
}

BoundCheck check_bounds(const BogoliubovSpectrum& s, int i, int direction) {
  const CorrelationSet p = correlations_finite(s, i, direction);
  const SiteGeometricPhase gp = site_gp(s);
  const int j = s.neighbor(i, direction);
  const double lpi = s.total_sites * std::numbers::pi;
  const double diff = gp.per_site[i] - gp.per_site[j];
  const double r1 = (1 + p.p33) * (1 + p.p33) - (p.p30 + p.p03) * (p.p30 + p.p03);

  BoundCheck b;
  b.c1_bound = (gp.per_site[i] + gp.per_site[j]) / lpi - detail::radicand_sqrt(r1, "c_I bound");
  b.c2_bound = 1.0 + diff / lpi - diff * diff / (2.0 * lpi * lpi);
  const auto c = concurrence_closed(p);
  b.c1_raw = c.c_one;
  b.c2_raw = c.c_two;
  b.satisfied = {b.c1_raw <= b.c1_bound + kBoundTolerance,
                 b.c2_raw <= b.c2_bound + kBoundTolerance};
  return b;
}

}  // namespace fermigp
