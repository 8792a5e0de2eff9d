#pragma once

// Wootters concurrence of a two-site reduced state, two ways: the closed form
// for parity-symmetric (X-shaped) states and a brute-force 4x4 computation.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>

#include "fermigp/correlation_set.hpp"
#include "fermigp/error.hpp"

namespace fermigp {

inline constexpr double kRadicandClamp = 1e-9;
inline constexpr double kPsdTolerance = 1e-10;

template <class Scalar>
struct ConcurrenceResult {
  Scalar c_one = 0;  // raw, may be negative; NaN on the oracle path
  Scalar c_two = 0;
  Scalar c = 0;      // max(0, c_one, c_two) or max(0, l1 - l2 - l3 - l4)
  std::optional<std::array<Scalar, 4>> wootters_roots;  // decreasing
};

namespace detail {

template <class Scalar>
Scalar radicand_sqrt(Scalar x, const char* which) {
  using std::sqrt;
  if (x < Scalar(-kRadicandClamp))
    throw UnphysicalInputError(std::string("negative radicand in ") + which + ": " +
                               std::to_string(static_cast<double>(x)));
  return sqrt(std::max(x, Scalar(0)));
}

template <class Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> pauli(int a) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 2, 2> m;
  switch (a) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    default: m << C(1), C(0), C(0), C(-1); break;
  }
  return m;
}

template <class Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> kron(const Eigen::Matrix<std::complex<Scalar>, 2, 2>& x,
                                               const Eigen::Matrix<std::complex<Scalar>, 2, 2>& y) {
  Eigen::Matrix<std::complex<Scalar>, 4, 4> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
  return out;
}

}  // namespace detail

// c_I = (1/2)[sqrt((p11+p22)^2 + (p12-p21)^2) - sqrt((1+p33)^2 - (p30+p03)^2)]
// c_II = (1/2)[sqrt((p11-p22)^2 + (p12+p21)^2) - sqrt((1-p33)^2 - (p30-p03)^2)]
// Radicands down to -1e-9 are clamped to zero; anything lower is rejected.
template <class Scalar>
ConcurrenceResult<Scalar> concurrence_closed(const BasicCorrelationSet<Scalar>& p) {
  using std::sqrt;
  const Scalar s_plus = p.p30 + p.p03;
  const Scalar s_minus = p.p30 - p.p03;
  const Scalar r1 = (1 + p.p33) * (1 + p.p33) - s_plus * s_plus;
  const Scalar r2 = (1 - p.p33) * (1 - p.p33) - s_minus * s_minus;
  const Scalar a = p.p11 + p.p22, b = p.p12 - p.p21;
  const Scalar e = p.p11 - p.p22, f = p.p12 + p.p21;

  ConcurrenceResult<Scalar> out;
  out.c_one = (sqrt(a * a + b * b) - detail::radicand_sqrt(r1, "c_I")) / 2;
  out.c_two = (sqrt(e * e + f * f) - detail::radicand_sqrt(r2, "c_II")) / 2;
  out.c = std::max({Scalar(0), out.c_one, out.c_two});
  return out;
}

// rho = (1/4) sum p_ab sigma^a (x) sigma^b over the stored correlators.
template <class Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> two_site_density(const BasicCorrelationSet<Scalar>& p) {
  using detail::kron;
  using detail::pauli;
  const std::array<std::pair<int, int>, 8> ab{{{0, 0}, {0, 3}, {3, 0}, {1, 1},
                                               {2, 2}, {3, 3}, {1, 2}, {2, 1}}};
  const std::array<Scalar, 8> v{p.p00, p.p03, p.p30, p.p11, p.p22, p.p33, p.p12, p.p21};
  Eigen::Matrix<std::complex<Scalar>, 4, 4> rho = Eigen::Matrix<std::complex<Scalar>, 4, 4>::Zero();
  for (int n = 0; n < 8; ++n)
    rho += (v[n] / 4) * kron(pauli<Scalar>(ab[n].first), pauli<Scalar>(ab[n].second));
  return rho;
}

// Wootters: the roots are the singular values of W^T (sy (x) sy) W for any
// factor rho = W W^dagger. W comes from a pivoted LDL^T, which keeps exact
// zeros of rank-deficient states exact, so no square root of rounding noise
// leaks into the roots.
template <class Scalar>
ConcurrenceResult<Scalar> wootters_oracle(const BasicCorrelationSet<Scalar>& p) {
  using Complex = std::complex<Scalar>;
  using Mat4 = Eigen::Matrix<Complex, 4, 4>;
  const Mat4 rho = two_site_density(p);

  using std::abs;
  if (abs(rho.trace().real() - Scalar(1)) > Scalar(1e-12))
    throw UnphysicalInputError("two-site density does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Mat4> spectrum(rho, Eigen::EigenvaluesOnly);
  if (spectrum.eigenvalues().minCoeff() < Scalar(-kPsdTolerance))
    throw UnphysicalInputError("two-site density is not positive semidefinite (eigenvalue " +
                               std::to_string(static_cast<double>(spectrum.eigenvalues().minCoeff())) +
                               ")");

  Eigen::LDLT<Mat4> ldlt(rho);
  Eigen::Matrix<Complex, 4, 1> root_d;
  for (int i = 0; i < 4; ++i) {
    using std::sqrt;
    root_d[i] = Complex(sqrt(std::max(ldlt.vectorD()[i].real(), Scalar(0))));
  }
  const Mat4 lower = ldlt.matrixL();
  Mat4 w = ldlt.transpositionsP().transpose() * (lower * root_d.asDiagonal());
  const Mat4 flip = detail::kron(detail::pauli<Scalar>(2), detail::pauli<Scalar>(2));
  const Mat4 tau = w.transpose() * flip * w;
  Eigen::JacobiSVD<Mat4> svd(tau);
  const auto& s = svd.singularValues();

  ConcurrenceResult<Scalar> out;
  out.c_one = out.c_two = std::numeric_limits<Scalar>::quiet_NaN();
  out.wootters_roots = std::array<Scalar, 4>{s[0], s[1], s[2], s[3]};
  out.c = std::max(Scalar(0), s[0] - s[1] - s[2] - s[3]);
  return out;
}

}  // namespace fermigp
