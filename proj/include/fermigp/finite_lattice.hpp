#pragma once

// Free fermions on a finite lattice,
//   H = sum_ij c+_i A_ij c_j + (1/2) sum_ij (c+_i B_ij c+_j + h.c.),
// solved exactly through the singular value decomposition A + B = U S V^T:
//   Lambda_k = S_k,  phi_k = sqrt(L) v_k,  psi_k = sqrt(L) u_k,
//   g = (phi + psi)/2,  h = (phi - psi)/2,
// with eta_k = (1/sqrt L) sum_i (g_ki c_i + h_ki c+_i) and
// H = sum_k Lambda_k eta+_k eta_k + (tr A - sum_k Lambda_k)/2.

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "fermigp/correlation_set.hpp"
#include "fermigp/lattice_model.hpp"

namespace fermigp {

// Lambda_k below this (relative to the largest) counts as a zero mode.
inline constexpr double kZeroModeTolerance = 1e-10;

struct BogoliubovSpectrum {
  Eigen::VectorXd energies;  // Lambda_k, decreasing
  Eigen::MatrixXd phi;       // row k is phi_k, squared norm L
  Eigen::MatrixXd psi;
  Eigen::MatrixXd g;
  Eigen::MatrixXd h;
  std::vector<int> site_shape;
  int total_sites = 0;
  double ground_energy = 0;
  int vacuum_parity = 1;     // eigenvalue of prod_i (1 - 2 n_i) on the eta vacuum
  bool degenerate = false;   // zero modes present: psi for them is a basis choice

  int neighbor(int i, int direction) const;
  int dimension() const { return static_cast<int>(site_shape.size()); }
};

BogoliubovSpectrum diagonalize(const CouplingMatrices& m);

// Correlators of sites i and its +direction neighbour in the ground state
// (sigma^z = 1 - 2n). Zero modes make these basis-dependent; check
// s.degenerate.
CorrelationSet correlations_finite(const BogoliubovSpectrum& s, int i, int direction);

// Componentwise average over the lattice directions at site i.
CorrelationSet correlations_direction_average(const BogoliubovSpectrum& s, int i);

struct SiteGeometricPhase {
  Eigen::VectorXd per_site;  // gamma_gi = pi sum_k h_ki^2, in [0, pi L]
  double total = 0;          // (1/L^2) sum_i gamma_gi, in [0, pi]
};

SiteGeometricPhase site_gp(const BogoliubovSpectrum& s);

struct BoundCheck {
  double c1_bound = 0;
  double c2_bound = 0;
  double c1_raw = 0;
  double c2_raw = 0;
  std::array<bool, 2> satisfied{};
};

inline constexpr double kBoundTolerance = 1e-9;

BoundCheck check_bounds(const BogoliubovSpectrum& s, int i, int direction);

// Brute-force check in the full 2^L Fock space.

inline constexpr int kManyBodyMaxSites = 12;

struct ManyBodyState {
  double energy = 0;
  double parity = 0;               // <prod_i (1 - 2 n_i)>
  std::vector<CorrelationSet> bonds;  // index direction * L + i
};

struct ManyBodyResult {
  double ground_energy = 0;
  bool degenerate = false;
  std::vector<ManyBodyState> multiplet;  // parity-resolved ground states
  Eigen::VectorXd spectrum;              // all 2^L levels, increasing
};

ManyBodyResult many_body_oracle(const CouplingMatrices& m, int max_sites = kManyBodyMaxSites);

}  // namespace fermigp
