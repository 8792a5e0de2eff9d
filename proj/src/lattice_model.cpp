#include "fermigp/lattice_model.hpp"

#include <cmath>
#include <string>

#include "fermigp/error.hpp"

namespace fermigp {

void ModelParams::validate() const {
  if (d < 1 || d > 3)
    throw InputError("dimension must be 1, 2 or 3, got " + std::to_string(d));
  if (!std::isfinite(gamma) || !std::isfinite(lambda))
    throw InputError("gamma and lambda must be finite");
}

DispersionPoint dispersion(const ModelParams& p, const Momentum& k) {
  p.validate();
  if (k.size() != p.d)
    throw InputError("momentum has " + std::to_string(k.size()) +
                     " components for a d=" + std::to_string(p.d) + " model");
  return dispersion_from_sums(k.array().cos().sum(), k.array().sin().sum(),
                              p.gamma, p.lambda);
}

int periodic_neighbor(const std::vector<int>& shape, int i, int direction) {
  int stride = 1;
  for (int a = 0; a < direction; ++a) stride *= shape[a];
  const int n = shape[direction];
  const int coord = (i / stride) % n;
  return i + (((coord + 1) % n) - coord) * stride;
}

CouplingMatrices build_couplings(int d, int n, double gamma, double lambda,
                                 int max_sites) {
  ModelParams{d, gamma, lambda}.validate();
  if (n < 3)
    throw InputError("need at least 3 sites per side, got " + std::to_string(n));
  long long sites = 1;
  for (int a = 0; a < d; ++a) {
    sites *= n;
    if (sites > max_sites)
      throw InputError("lattice of " + std::to_string(n) + "^" +
                       std::to_string(d) + " sites exceeds the limit of " +
                       std::to_string(max_sites));
  }

  CouplingMatrices m;
  m.site_shape.assign(d, n);
  m.total_sites = static_cast<int>(sites);
  const int L = m.total_sites;
  m.a = Eigen::MatrixXd::Zero(L, L);
  m.b = Eigen::MatrixXd::Zero(L, L);
  m.a.diagonal().setConstant(-2.0 * lambda);
  for (int i = 0; i < L; ++i) {
    for (int dir = 0; dir < d; ++dir) {
      const int j = m.neighbor(i, dir);
      m.a(i, j) = 1.0;
      m.a(j, i) = 1.0;
      m.b(i, j) = -gamma;
      m.b(j, i) = gamma;
    }
  }
  return m;
}

CouplingMatrices ring_couplings(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols())
    throw InputError("A and B must be square and of equal size");
  if (a.rows() < 3) throw InputError("ring needs at least 3 sites");
  if (a != a.transpose()) throw InputError("A must be symmetric");
  if (b != -b.transpose()) throw InputError("B must be antisymmetric");
  CouplingMatrices m;
  m.total_sites = static_cast<int>(a.rows());
  m.site_shape = {m.total_sites};
  m.a = std::move(a);
  m.b = std::move(b);
  return m;
}

PhaseLabel phase_label(const ModelParams& p) {
  p.validate();
  const double lam = std::abs(p.lambda);  // spectrum is symmetric in lambda
  PhaseLabel out;
  const bool pairing = p.gamma != 0.0;
  if (p.d == 2 && pairing) out.critical_lambdas.push_back(0.0);
  out.critical_lambdas.push_back(p.d);

  if (!pairing) {
    out.region = lam <= p.d ? PhaseRegion::gapless_degenerate : PhaseRegion::gapped;
  } else if (p.d == 1) {
    // Sum of sines vanishes only at k = 0, pi, so the chain closes its gap
    // only at |lambda| = 1.
    out.region = lam == 1.0 ? PhaseRegion::gapless_degenerate : PhaseRegion::gapped;
  } else if (p.d == 2 && lam == 0.0) {
    out.region = PhaseRegion::fermi_surface_point;
  } else {
    out.region = lam <= p.d ? PhaseRegion::gapless_degenerate : PhaseRegion::gapped;
  }
  return out;
}

const char* to_string(PhaseRegion r) {
  switch (r) {
    case PhaseRegion::gapless_degenerate: return "gapless-degenerate";
    case PhaseRegion::gapped: return "gapped";
    case PhaseRegion::fermi_surface_point: return "fermi-surface-point";
  }
  return "?";
}

}  // namespace fermigp
