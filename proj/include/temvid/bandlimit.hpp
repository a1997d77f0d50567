#pragma once

#include <cmath>

#include "temvid/errors.hpp"

namespace temvid {

/// Bandwidth indices and periods of a periodic bandlimited scene.
///
/// A scene has (2*K0+1) temporal and (2*K1+1)*(2*K2+1) spatial Fourier
/// series coefficients, with period T in time and D1, D2 in space.
struct BandlimitParams {
  int K0 = 0;
  int K1 = 0;
  int K2 = 0;
  double T = 1.0;
  double D1 = 1.0;
  double D2 = 1.0;

  void validate() const {
    if (K0 < 0 || K1 < 0 || K2 < 0) {
      throw OutOfRangeError("bandwidth indices must be nonnegative");
    }
    if (!(T > 0.0) || !(D1 > 0.0) || !(D2 > 0.0)) {
      throw OutOfRangeError("periods T, D1, D2 must be positive");
    }
  }

  // Per-axis coefficient counts.
  int n0() const { return 2 * K0 + 1; }
  int n1() const { return 2 * K1 + 1; }
  int n2() const { return 2 * K2 + 1; }

  /// K = 2*K0 + 1, the temporal coefficient count of one pixel signal.
  int temporal_count() const { return n0(); }

  /// J = (2*K1+1)(2*K2+1), the number of spatial frequencies.
  int spatial_count() const { return n1() * n2(); }

  /// Total coefficient count K*J.
  int coefficient_count() const { return temporal_count() * spatial_count(); }

  bool same_shape(const BandlimitParams& other) const {
    return K0 == other.K0 && K1 == other.K1 && K2 == other.K2;
  }

  bool operator==(const BandlimitParams& other) const {
    return same_shape(other) && T == other.T && D1 == other.D1 && D2 == other.D2;
  }
};

}  // namespace temvid
