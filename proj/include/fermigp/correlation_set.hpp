#pragma once

namespace fermigp {

// Nonvanishing two-site correlators p_ab = <sigma^a_i sigma^b_j> of a
// parity-symmetric state (a, b in {0, x=1, y=2, z=3}).
template <class Scalar>
struct BasicCorrelationSet {
  Scalar p00 = 1;
  Scalar p03 = 0;
  Scalar p30 = 0;
  Scalar p11 = 0;
  Scalar p22 = 0;
  Scalar p33 = 0;
  Scalar p12 = 0;
  Scalar p21 = 0;

  // Same correlators seen from site j: p03 <-> p30, p12 <-> p21.
  BasicCorrelationSet swapped() const {
    BasicCorrelationSet s = *this;
    s.p03 = p30;
    s.p30 = p03;
    s.p12 = p21;
    s.p21 = p12;
    return s;
  }

  template <class Other>
  BasicCorrelationSet<Other> cast() const {
    return {Other(p00), Other(p03), Other(p30), Other(p11),
            Other(p22), Other(p33), Other(p12), Other(p21)};
  }
};

using CorrelationSet = BasicCorrelationSet<double>;

}  // namespace fermigp
