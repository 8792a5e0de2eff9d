#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace fermigp {

// Finite lattices beyond this many sites are refused by build_couplings.
inline constexpr int kMaxSites = 4096;

// A finite (A, B) lattice has Bogoliubov energies 2 * Lambda(k) in terms of
// the momentum-space dispersion below.
inline constexpr double kBogoliubovEnergyScale = 2.0;

// Lambda below this is treated as an exact gap closing (ratios set to 0).
inline constexpr double kZeroGap = 1e-12;

struct ModelParams {
  int d = 1;
  double gamma = 1.0;
  double lambda = 0.0;

  void validate() const;
};

using Momentum = Eigen::VectorXd;

struct DispersionPoint {
  double t = 0;
  double delta = 0;
  double energy = 0;
};

DispersionPoint dispersion(const ModelParams& p, const Momentum& k);

// Same thing from the lattice sums C = sum cos k, S = sum sin k.
inline DispersionPoint dispersion_from_sums(double sum_cos, double sum_sin,
                                            double gamma, double lambda) {
  DispersionPoint out;
  out.t = sum_cos - lambda;
  out.delta = gamma * sum_sin;
  out.energy = std::sqrt(out.t * out.t + out.delta * out.delta);
  return out;
}

// Site index of the +direction neighbour of i on a periodic lattice whose
// first axis varies fastest.
int periodic_neighbor(const std::vector<int>& shape, int i, int direction);

struct CouplingMatrices {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  std::vector<int> site_shape;
  int total_sites = 0;

  int dimension() const { return static_cast<int>(site_shape.size()); }
  int neighbor(int i, int direction) const {
    return periodic_neighbor(site_shape, i, direction);
  }
};

// Hypercubic XY model on an n^d periodic lattice. A_ii = -2 lambda,
// A_ij = 1 on bonds, B_ij = -gamma with j the +direction neighbour of i.
CouplingMatrices build_couplings(int d, int n, double gamma, double lambda,
                                 int max_sites = kMaxSites);

// Wrap arbitrary (A, B) on a 1D ring so bonds are (i, i+1 mod L).
CouplingMatrices ring_couplings(Eigen::MatrixXd a, Eigen::MatrixXd b);

enum class PhaseRegion { gapless_degenerate, gapped, fermi_surface_point };

struct PhaseLabel {
  PhaseRegion region = PhaseRegion::gapped;
  std::vector<double> critical_lambdas;
};

PhaseLabel phase_label(const ModelParams& p);

const char* to_string(PhaseRegion r);

}  // namespace fermigp
