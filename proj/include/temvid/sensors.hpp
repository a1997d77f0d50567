#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "temvid/bandlimit.hpp"
#include "temvid/errors.hpp"
#include "temvid/indexing.hpp"
#include "temvid/video.hpp"

namespace temvid {

/// Viewing direction of one sensor, reduced into [0, D1) x [0, D2).
struct SensorDirection {
  double d1 = 0.0;
  double d2 = 0.0;

  static SensorDirection reduced(double d1, double d2, double D1, double D2) {
    auto wrap = [](double x, double period) {
      double r = std::fmod(x, period);
      if (r < 0.0) r += period;
      return r;
    };
    return SensorDirection{wrap(d1, D1), wrap(d2, D2)};
  }
};

/// An ordered set of sensor directions observing one scene.
struct SensorGrid {
  std::vector<SensorDirection> directions;
  BandlimitParams params;

  SensorGrid() = default;

  SensorGrid(std::vector<SensorDirection> dirs, BandlimitParams p)
      : directions(std::move(dirs)), params(p) {
    params.validate();
    if (directions.empty()) {
      throw OutOfRangeError("sensor grid must contain at least one sensor");
    }
    for (size_t a = 0; a < directions.size(); ++a) {
      for (size_t b = a + 1; b < directions.size(); ++b) {
        if (directions[a].d1 == directions[b].d1 && directions[a].d2 == directions[b].d2) {
          throw ConfigError("sensor directions must be pairwise distinct");
        }
      }
    }
  }

  int size() const { return static_cast<int>(directions.size()); }
};

/// The I x J matrix linking proxy signals to sensor inputs,
/// a_{ij} = exp(j*2*pi*(d1_i*k1(j)/D1 + d2_i*k2(j)/D2)). Entries have unit
/// modulus by construction.
struct MixingMatrix {
  Eigen::MatrixXcd entries;
  BandlimitParams params;

  int sensors() const { return static_cast<int>(entries.rows()); }
  int J() const { return static_cast<int>(entries.cols()); }
};

/// Row-major uniform gridding: d1 = p*D1/n1, d2 = q*D2/n2.
inline SensorGrid uniform_grid(int n1, int n2, const BandlimitParams& p) {
  if (n1 < 1 || n2 < 1) {
    throw OutOfRangeError("grid dimensions must be at least 1");
  }
  std::vector<SensorDirection> dirs;
  dirs.reserve(static_cast<size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i) {
    for (int q = 0; q < n2; ++q) {
      dirs.push_back(SensorDirection{i * p.D1 / n1, q * p.D2 / n2});
    }
  }
  return SensorGrid(std::move(dirs), p);
}

inline MixingMatrix build_mixing(const SensorGrid& grid) {
  const BandlimitParams& p = grid.params;
  const IndexMap map{p.K1, p.K2};
  MixingMatrix m;
  m.params = p;
  m.entries.resize(grid.size(), map.J());
  for (int i = 0; i < grid.size(); ++i) {
    const SensorDirection& d = grid.directions[i];
    for (int j = 1; j <= map.J(); ++j) {
      const auto [k1, k2] = map.inverse_index(j);
      m.entries(i, j - 1) = detail::unit_phase(
          kTwoPi * (d.d1 * k1 / p.D1 + d.d2 * k2 / p.D2));
    }
  }
  return m;
}

/// Full-rank test via SVD: true iff I >= J and sigma_min > tol * sigma_max.
/// Also returns sigma_max / sigma_min as a condition estimate.
inline std::pair<bool, double> full_rank_check(const MixingMatrix& a, double tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.entries);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  const bool full = a.sensors() >= a.J() && smin > tol * smax;
  return {full, cond};
}

/// Samples `trials` uniformly random J-row subsets and returns the fraction
/// whose smallest singular value exceeds tol * largest. Exhaustively checking
/// all C(I, J) subsets is infeasible; this is the randomized surrogate.
inline double subset_independence_check(const MixingMatrix& a, int trials, uint64_t seed,
                                        double tol = 1e-10) {
  const int I = a.sensors();
  const int J = a.J();
  if (I < J) {
    throw ShapeMismatchError("need at least J sensors to sample J-row subsets");
  }
  if (trials < 1) {
    throw OutOfRangeError("trials must be at least 1");
  }
  std::mt19937_64 gen(seed);
  std::vector<int> rows(static_cast<size_t>(I));
  std::iota(rows.begin(), rows.end(), 0);

  int passed = 0;
  Eigen::MatrixXcd sub(J, J);
  for (int trial = 0; trial < trials; ++trial) {
    // Partial Fisher-Yates: the first J entries become the sampled subset.
    for (int k = 0; k < J; ++k) {
      std::uniform_int_distribution<int> pick(k, I - 1);
      std::swap(rows[k], rows[pick(gen)]);
    }
    for (int k = 0; k < J; ++k) sub.row(k) = a.entries.row(rows[k]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > tol * sv(0)) ++passed;
  }
  return static_cast<double>(passed) / trials;
}

/// Counts the useful spike pairs sum_i min(n_i - 1, K) and compares it with
/// the unknown count J*K. `strict` demands a strictly larger count.
inline std::pair<bool, long> feasibility(const std::vector<int>& spike_counts, int J,
                                         int K, bool strict) {
  if (J < 1 || K < 1) {
    throw OutOfRangeError("J and K must be positive");
  }
  long useful = 0;
  for (int n : spike_counts) {
    if (n < 0) throw OutOfRangeError("spike counts must be nonnegative");
    useful += std::max(0, std::min(n - 1, K));
  }
  const long needed = static_cast<long>(J) * K;
  return {strict ? useful > needed : useful >= needed, useful};
}

}  // namespace temvid
