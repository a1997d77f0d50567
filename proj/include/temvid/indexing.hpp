#pragma once

#include <utility>

#include "temvid/errors.hpp"

namespace temvid {

/// Bijection between spatial frequency pairs (k1, k2), |k1| <= K1, |k2| <= K2,
/// and the flat index j = 1..J with J = (2*K1+1)(2*K2+1).
///
/// j enumerates (k1, k2) row-major: j = (k1+K1)*(2*K2+1) + (k2+K2+1).
struct IndexMap {
  int K1 = 0;
  int K2 = 0;

  int J() const { return (2 * K1 + 1) * (2 * K2 + 1); }

  int index_of(int k1, int k2) const {
    if (k1 < -K1 || k1 > K1 || k2 < -K2 || k2 > K2) {
      throw OutOfRangeError("spatial frequency index out of range");
    }
    return (k1 + K1) * (2 * K2 + 1) + (k2 + K2 + 1);
  }

  std::pair<int, int> inverse_index(int j) const {
    if (j < 1 || j > J()) {
      throw OutOfRangeError("flat index j out of range");
    }
    const int j0 = j - 1;
    const int n2 = 2 * K2 + 1;
    return {j0 / n2 - K1, j0 % n2 - K2};
  }
};

}  // namespace temvid
