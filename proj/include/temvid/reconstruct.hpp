#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "temvid/bandlimit.hpp"
#include "temvid/encoder.hpp"
#include "temvid/errors.hpp"
#include "temvid/sensors.hpp"
#include "temvid/video.hpp"

namespace temvid {

/// One linear constraint extracted from a consecutive spike pair:
/// the integral of the sensor input over (t_start, t_end) equals b.
struct Measurement {
  int sensor_id = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double b = 0.0;
};

/// Integrals of the temporal exponentials over one spike interval,
/// entry k+K0 = integral of exp(j*2*pi*k*u/T) du. The zero-frequency entry
/// equals the interval length and entry(-k) = conj(entry(k)).
struct ForwardBlock {
  std::vector<cplx> entries;

  int K0() const { return (static_cast<int>(entries.size()) - 1) / 2; }
  const cplx& at(int k) const { return entries[static_cast<size_t>(k + K0())]; }
};

/// The assembled rank-one sensing system: row (i, l) is
/// vec(a_i * F_l^T) over the (j, k) ordering of coefficient_vector, and the
/// right-hand side holds the measured integrals b.
struct LinearSystem {
  Eigen::MatrixXcd rows;
  Eigen::VectorXd rhs;
  int sensors = 0;
  int J = 0;
  int K = 0;
  std::vector<int> row_sensor_ids;

  int size() const { return static_cast<int>(rows.rows()); }
};

struct ReconstructionReport {
  CoefficientTensor estimate;
  int rank = 0;
  double residual_norm = 0.0;
  double condition_estimate = 0.0;
  std::optional<double> relative_coeff_mse;
};

inline std::vector<Measurement> measurements_from_spikes(const SpikeTrain& train,
                                                         const TemParams& params) {
  params.validate();
  train.validate();
  std::vector<Measurement> out;
  if (train.n_spikes() < 2) return out;
  out.reserve(static_cast<size_t>(train.n_spikes() - 1));
  for (size_t l = 0; l + 1 < train.times.size(); ++l) {
    Measurement m;
    m.sensor_id = train.sensor_id;
    m.t_start = train.times[l];
    m.t_end = train.times[l + 1];
    m.b = 2.0 * params.kappa * params.delta - params.beta * (m.t_end - m.t_start);
    out.push_back(m);
  }
  return out;
}

inline ForwardBlock forward_block(double t0, double t1, int K0, double T) {
  if (!(t1 > t0)) throw DegenerateIntervalError("spike interval has nonpositive length");
  if (K0 < 0 || !(T > 0.0)) throw OutOfRangeError("invalid bandwidth or period");
  ForwardBlock fb;
  fb.entries.assign(static_cast<size_t>(2 * K0 + 1), cplx(0.0, 0.0));
  fb.entries[static_cast<size_t>(K0)] = cplx(t1 - t0, 0.0);
  for (int k = 1; k <= K0; ++k) {
    const double omega = kTwoPi * k / T;
    const cplx value =
        (detail::unit_phase(omega * t1) - detail::unit_phase(omega * t0)) / cplx(0.0, omega);
    fb.entries[static_cast<size_t>(K0 + k)] = value;
    fb.entries[static_cast<size_t>(K0 - k)] = std::conj(value);
  }
  return fb;
}

/// Stacks one row per consecutive spike pair. Trains are matched to mixing
/// rows and TEM parameters through their sensor_id.
inline LinearSystem assemble_system(const MixingMatrix& a,
                                    const std::vector<SpikeTrain>& trains,
                                    const std::vector<TemParams>& params,
                                    const BandlimitParams& blp) {
  blp.validate();
  if (a.J() != blp.spatial_count()) {
    throw ShapeMismatchError("mixing matrix does not match spatial bandwidth");
  }
  if (static_cast<int>(params.size()) != a.sensors()) {
    throw ShapeMismatchError("need one TemParams per mixing row");
  }

  long m = 0;
  for (const SpikeTrain& train : trains) {
    if (train.sensor_id < 0 || train.sensor_id >= a.sensors()) {
      throw ShapeMismatchError("spike train sensor_id outside mixing matrix");
    }
    m += std::max(0, train.n_spikes() - 1);
  }

  const int J = blp.spatial_count();
  const int K = blp.temporal_count();
  LinearSystem sys;
  sys.sensors = a.sensors();
  sys.J = J;
  sys.K = K;
  sys.rows.resize(m, static_cast<long>(J) * K);
  sys.rhs.resize(m);
  sys.row_sensor_ids.reserve(static_cast<size_t>(m));

  long r = 0;
  for (const SpikeTrain& train : trains) {
    const int i = train.sensor_id;
    const auto measurements = measurements_from_spikes(train, params[static_cast<size_t>(i)]);
    for (const Measurement& meas : measurements) {
      const ForwardBlock fb = forward_block(meas.t_start, meas.t_end, blp.K0, blp.T);
      for (int j0 = 0; j0 < J; ++j0) {
        const cplx aij = a.entries(i, j0);
        for (int k = 0; k < K; ++k) {
          sys.rows(r, static_cast<long>(j0) * K + k) = aij * fb.entries[static_cast<size_t>(k)];
        }
      }
      sys.rhs(r) = meas.b;
      sys.row_sensor_ids.push_back(i);
      ++r;
    }
  }
  return sys;
}

namespace detail {

// Free real parameters of a Hermitian-symmetric coefficient vector. Each
// conjugate pair contributes (Re, Im) of its canonical half; the DC entry
// contributes its real part. Total J*K real unknowns.
struct HermitianBasis {
  struct Entry {
    int v = 0;        // canonical complex index
    int vbar = 0;     // mirrored complex index (== v for DC)
    int p_re = 0;     // real parameter slot
    int p_im = -1;    // imaginary parameter slot, -1 for DC
  };
  std::vector<Entry> entries;
  int complex_dim = 0;
  int real_dim = 0;

  explicit HermitianBasis(const BandlimitParams& p) {
    const IndexMap map{p.K1, p.K2};
    const int K = p.temporal_count();
    complex_dim = p.coefficient_count();
    int next = 0;
    for (int j = 1; j <= map.J(); ++j) {
      const auto [k1, k2] = map.inverse_index(j);
      for (int m0 = 0; m0 < K; ++m0) {
        const int k0 = m0 - p.K0;
        const int v = (j - 1) * K + m0;
        if (k0 == 0 && k1 == 0 && k2 == 0) {
          entries.push_back({v, v, next, -1});
          next += 1;
        } else if (triple_is_positive(k0, k1, k2)) {
          const int jbar = map.index_of(-k1, -k2);
          const int vbar = (jbar - 1) * K + (p.K0 - k0);
          entries.push_back({v, vbar, next, next + 1});
          next += 2;
        }
      }
    }
    real_dim = next;
  }

  // Real row such that row . u == Re(r . z) for every Hermitian z(u).
  Eigen::RowVectorXd real_row(const Eigen::RowVectorXcd& r) const {
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(real_dim);
    for (const Entry& e : entries) {
      if (e.p_im < 0) {
        out(e.p_re) = r(e.v).real();
      } else {
        out(e.p_re) = r(e.v).real() + r(e.vbar).real();
        out(e.p_im) = -r(e.v).imag() + r(e.vbar).imag();
      }
    }
    return out;
  }

  Eigen::VectorXcd complex_from_params(const Eigen::VectorXd& u) const {
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(complex_dim);
    for (const Entry& e : entries) {
      if (e.p_im < 0) {
        z(e.v) = cplx(u(e.p_re), 0.0);
      } else {
        z(e.v) = cplx(u(e.p_re), u(e.p_im));
        z(e.vbar) = std::conj(z(e.v));
      }
    }
    return z;
  }
};

}  // namespace detail

/// Relative squared Frobenius error ||est - truth||^2 / ||truth||^2.
inline double coefficient_mse(const CoefficientTensor& estimate,
                              const CoefficientTensor& truth) {
  if (!estimate.params.same_shape(truth.params)) {
    throw ShapeMismatchError("coefficient tensors have different shapes");
  }
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < truth.values.size(); ++i) {
    num += std::norm(estimate.values[i] - truth.values[i]);
    den += std::norm(truth.values[i]);
  }
  if (den == 0.0) throw DivisionByZeroError("truth tensor is identically zero");
  return num / den;
}

/// Least-squares solve of the sensing system with the unknowns parameterized
/// by the Hermitian non-redundant half (the scene is real-valued, so the
/// problem has exactly J*K real degrees of freedom). Singular values below
/// rcond * sigma_max are truncated; rank-deficient systems yield the
/// minimum-norm solution.
inline ReconstructionReport solve(const LinearSystem& system, const BandlimitParams& blp,
                                  double rcond = 1e-10,
                                  const CoefficientTensor* truth = nullptr) {
  if (system.size() == 0) {
    throw InsufficientDataError("no spike pairs to reconstruct from");
  }
  if (system.rows.cols() != blp.coefficient_count()) {
    throw ShapeMismatchError("system width does not match bandwidth");
  }

  const detail::HermitianBasis basis(blp);
  Eigen::MatrixXd real_rows(system.size(), basis.real_dim);
  for (int r = 0; r < system.size(); ++r) {
    real_rows.row(r) = basis.real_row(system.rows.row(r));
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(real_rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rcond);
  const Eigen::VectorXd u = svd.solve(system.rhs);
  const int rank = static_cast<int>(svd.rank());

  ReconstructionReport report;
  report.rank = rank;
  report.residual_norm = (real_rows * u - system.rhs).norm();
  const auto& sv = svd.singularValues();
  report.condition_estimate =
      (rank > 0 && sv(rank - 1) > 0.0) ? sv(0) / sv(rank - 1)
                                       : std::numeric_limits<double>::infinity();

  CoefficientTensor estimate = tensor_from_vector(basis.complex_from_params(u), blp);
  estimate.hermitianize();
  report.estimate = std::move(estimate);

  if (truth != nullptr) {
    report.relative_coeff_mse = coefficient_mse(report.estimate, *truth);
  }
  return report;
}

}  // namespace temvid
