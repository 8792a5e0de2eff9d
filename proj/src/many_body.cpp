// Fock-space oracle. Basis state bits are site occupations; operators carry
// Jordan-Wigner signs from the occupied sites with smaller index.

#include <bit>
#include <complex>
#include <cstdint>
#include <string>

#include "fermigp/error.hpp"
#include "fermigp/finite_lattice.hpp"

namespace fermigp {

namespace {

using State = std::uint32_t;
using Vec = Eigen::VectorXcd;

inline double jw_sign(State s, int i) {
  return std::popcount(s & ((State(1) << i) - 1)) % 2 ? -1.0 : 1.0;
}

Vec annihilate(const Vec& v, int i) {
  Vec out = Vec::Zero(v.size());
  for (State s = 0; s < v.size(); ++s)
    if (s >> i & 1) out[s ^ (State(1) << i)] += jw_sign(s, i) * v[s];
  return out;
}

Vec create(const Vec& v, int i) {
  Vec out = Vec::Zero(v.size());
  for (State s = 0; s < v.size(); ++s)
    if (!(s >> i & 1)) out[s | (State(1) << i)] += jw_sign(s, i) * v[s];
  return out;
}

// 1 - 2 n_i
Vec string_op(const Vec& v, int i) {
  Vec out = v;
  for (State s = 0; s < v.size(); ++s)
    if (s >> i & 1) out[s] = -out[s];
  return out;
}

// sigma^a on the first site of the pair: z = 1 - 2n, x = c + c+, y = -i(c - c+).
Vec sigma_first(const Vec& v, int a, int i) {
  const std::complex<double> mi(0, -1);
  switch (a) {
    case 0: return v;
    case 1: return annihilate(v, i) + create(v, i);
    case 2: return mi * (annihilate(v, i) - create(v, i));
    default: return string_op(v, i);
  }
}

// sigma^b on the second site j, dressed with the string (1 - 2 n_i) of the
// first site for b = x, y.
Vec sigma_second(const Vec& v, int b, int i, int j) {
  if (b == 0 || b == 3) return sigma_first(v, b, j);
  return string_op(sigma_first(v, b, j), i);
}

CorrelationSet bond_correlators(const Vec& psi, int i, int j) {
  auto corr = [&](int a, int b) {
    const std::complex<double> value = psi.dot(sigma_first(sigma_second(psi, b, i, j), a, i));
    if (std::abs(value.imag()) > 1e-10)
      throw EvaluationError("two-site correlator is not real",
                            {double(i), double(j), double(a), double(b)});
    return value.real();
  };
  CorrelationSet p;
  p.p00 = corr(0, 0);
  p.p03 = corr(0, 3);
  p.p30 = corr(3, 0);
  p.p11 = corr(1, 1);
  p.p22 = corr(2, 2);
  p.p33 = corr(3, 3);
  p.p12 = corr(1, 2);
  p.p21 = corr(2, 1);
  return p;
}

}  // namespace

ManyBodyResult many_body_oracle(const CouplingMatrices& m, int max_sites) {
  const int L = m.total_sites;
  if (L > max_sites || L > kManyBodyMaxSites)
    throw InputError("Fock-space oracle limited to " + std::to_string(std::min(max_sites, kManyBodyMaxSites)) +
                     " sites, got " + std::to_string(L));
  if (L < 2) throw InputError("Fock-space oracle needs at least 2 sites");
  const State dim = State(1) << L;

  // H = sum_ij A_ij c+_i c_j + sum_{i<j} B_ij (c+_i c+_j + c_j c_i)
  Eigen::MatrixXd hamiltonian = Eigen::MatrixXd::Zero(dim, dim);
  for (State s = 0; s < dim; ++s) {
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        const double a = m.a(i, j);
        if (a != 0 && (s >> j & 1)) {
          const State t = s ^ (State(1) << j);
          if (!(t >> i & 1))
            hamiltonian(t | (State(1) << i), s) += a * jw_sign(s, j) * jw_sign(t, i);
        }
        const double b = m.b(i, j);
        if (i < j && b != 0) {
          if (!(s >> j & 1) && !(s >> i & 1)) {
            const State t = s | (State(1) << j);
            hamiltonian(t | (State(1) << i), s) += b * jw_sign(s, j) * jw_sign(t, i);
          }
          if ((s >> i & 1) && (s >> j & 1)) {
            const State t = s ^ (State(1) << i);
            hamiltonian(t ^ (State(1) << j), s) += b * jw_sign(s, i) * jw_sign(t, j);
          }
        }
      }
    }
  }
  if (!hamiltonian.isApprox(hamiltonian.transpose(), 1e-14))
    throw EvaluationError("many-body Hamiltonian is not symmetric", {});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian);
  ManyBodyResult out;
  out.spectrum = es.eigenvalues();
  out.ground_energy = out.spectrum[0];
  const double tol = 1e-9 * std::max(1.0, std::abs(out.ground_energy));
  int count = 1;
  while (count < static_cast<int>(dim) && out.spectrum[count] - out.ground_energy < tol) ++count;
  out.degenerate = count > 1;

  // Resolve the multiplet into parity eigenstates.
  Eigen::MatrixXd vectors = es.eigenvectors().leftCols(count);
  Eigen::VectorXd parity_diag(dim);
  for (State s = 0; s < dim; ++s) parity_diag[s] = std::popcount(s) % 2 ? -1.0 : 1.0;
  const Eigen::MatrixXd sub = vectors.transpose() * parity_diag.asDiagonal() * vectors;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(sub);
  vectors = vectors * ps.eigenvectors();

  const int d = m.dimension();
  for (int n = 0; n < count; ++n) {
    ManyBodyState st;
    const Vec psi = vectors.col(n).cast<std::complex<double>>();
    st.energy = psi.dot(hamiltonian.cast<std::complex<double>>() * psi).real();
    st.parity = vectors.col(n).dot(parity_diag.cwiseProduct(vectors.col(n)));
    st.bonds.resize(static_cast<std::size_t>(d) * L);
    for (int dir = 0; dir < d; ++dir)
      for (int i = 0; i < L; ++i) st.bonds[dir * L + i] = bond_correlators(psi, i, m.neighbor(i, dir));
    out.multiplet.push_back(std::move(st));
  }
  return out;
}

}  // namespace fermigp
