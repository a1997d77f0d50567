#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "temvid/bandlimit.hpp"
#include "temvid/errors.hpp"
#include "temvid/indexing.hpp"

namespace temvid {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace detail {

// Lexicographic sign of a frequency triple. The "positive" half together
// with the DC triple (0,0,0) forms the non-redundant storage half of a
// Hermitian-symmetric tensor.
inline bool triple_is_positive(int k0, int k1, int k2) {
  if (k0 != 0) return k0 > 0;
  if (k1 != 0) return k1 > 0;
  return k2 > 0;
}

inline cplx unit_phase(double angle) { return std::polar(1.0, angle); }

// Takes the real part of a complex accumulation, guarding against a large
// imaginary residue (which would indicate a non-Hermitian coefficient set).
inline double real_part_checked(cplx value, const char* what) {
  const double re = value.real();
  if (!(std::abs(value.imag()) < 1e-10 * (1.0 + std::abs(re)))) {
    throw NumericalError(std::string(what) + ": imaginary residue too large");
  }
  return re;
}

}  // namespace detail

/// 3D Fourier series coefficients c_{k0,k1,k2} of a scene, stored row-major
/// over (k0+K0, k1+K1, k2+K2). When real_flag is set the tensor is
/// Hermitian-symmetric bitwise: c_{-k0,-k1,-k2} = conj(c_{k0,k1,k2}).
struct CoefficientTensor {
  BandlimitParams params;
  std::vector<cplx> values;
  bool real_flag = false;

  CoefficientTensor() = default;

  CoefficientTensor(BandlimitParams p, std::vector<cplx> v, bool real)
      : params(p), values(std::move(v)), real_flag(false) {
    params.validate();
    if (static_cast<int>(values.size()) != params.coefficient_count()) {
      throw ShapeMismatchError("coefficient array size does not match bandwidth");
    }
    check_finite();
    if (real) hermitianize();
  }

  static CoefficientTensor zeros(const BandlimitParams& p) {
    p.validate();
    CoefficientTensor t;
    t.params = p;
    t.values.assign(static_cast<size_t>(p.coefficient_count()), cplx(0.0, 0.0));
    t.real_flag = true;
    return t;
  }

  int flat(int m0, int m1, int m2) const {
    return (m0 * params.n1() + m1) * params.n2() + m2;
  }

  const cplx& at(int k0, int k1, int k2) const {
    if (std::abs(k0) > params.K0 || std::abs(k1) > params.K1 || std::abs(k2) > params.K2) {
      throw OutOfRangeError("frequency triple out of range");
    }
    return values[flat(k0 + params.K0, k1 + params.K1, k2 + params.K2)];
  }

  cplx& at(int k0, int k1, int k2) {
    return const_cast<cplx&>(std::as_const(*this).at(k0, k1, k2));
  }

  void check_finite() const {
    for (const cplx& c : values) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw NonFiniteError("coefficient tensor contains NaN or Inf");
      }
    }
  }

  /// Enforces Hermitian symmetry bitwise by mirroring the non-redundant half
  /// onto the negative half. Rejects tensors whose halves disagree by more
  /// than `tol` relative to the entry magnitude; the tensor is left untouched
  /// on rejection.
  void hermitianize(double tol = 1e-9) {
    if (!is_hermitian(tol)) {
      throw ConfigError("coefficient tensor is not Hermitian-symmetric");
    }
    for_each_canonical([&](int v, int vbar) {
      if (v == vbar) {
        values[v] = cplx(values[v].real(), 0.0);
      } else {
        values[vbar] = std::conj(values[v]);
      }
    });
    real_flag = true;
  }

  bool is_hermitian(double tol = 1e-9) const {
    bool ok = true;
    for_each_canonical([&](int v, int vbar) {
      if (v == vbar) {
        ok = ok && std::abs(values[v].imag()) <= tol * (1.0 + std::abs(values[v].real()));
      } else {
        ok = ok && std::abs(values[vbar] - std::conj(values[v])) <=
                       tol * (1.0 + std::abs(values[v]));
      }
    });
    return ok;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& c : values) s += std::norm(c);
    return std::sqrt(s);
  }

private:
  // Visits each canonical (DC or lexicographically positive) triple with its
  // flat index and the flat index of its mirror.
  template <typename F>
  void for_each_canonical(F&& fn) const {
    for (int m0 = 0; m0 < params.n0(); ++m0) {
      for (int m1 = 0; m1 < params.n1(); ++m1) {
        for (int m2 = 0; m2 < params.n2(); ++m2) {
          const int k0 = m0 - params.K0, k1 = m1 - params.K1, k2 = m2 - params.K2;
          if (k0 == 0 && k1 == 0 && k2 == 0) {
            fn(flat(m0, m1, m2), flat(m0, m1, m2));
          } else if (detail::triple_is_positive(k0, k1, k2)) {
            fn(flat(m0, m1, m2),
               flat(params.n0() - 1 - m0, params.n1() - 1 - m1, params.n2() - 1 - m2));
          }
        }
      }
    }
  }
};

/// A real-valued periodic bandlimited scene. Construction enforces the
/// Hermitian symmetry that makes point evaluations real.
struct PeriodicBandlimitedVideo {
  CoefficientTensor coefficients;

  PeriodicBandlimitedVideo() = default;

  explicit PeriodicBandlimitedVideo(CoefficientTensor tensor)
      : coefficients(std::move(tensor)) {
    if (!coefficients.real_flag) coefficients.hermitianize();
  }

  const BandlimitParams& params() const { return coefficients.params; }
};

/// Temporal Fourier coefficients of one pixel's 1D signal, c_k for
/// k = -K0..K0, Hermitian-symmetric so evaluations are real.
struct PixelSignal1D {
  std::vector<cplx> coeffs;
  double T = 1.0;

  int K0() const { return (static_cast<int>(coeffs.size()) - 1) / 2; }

  const cplx& at(int k) const { return coeffs[static_cast<size_t>(k + K0())]; }
};

/// Uniformly sampled frames of a scene: value (p, q, r) sits at
/// d1 = p*D1/n1, d2 = q*D2/n2, t = r*T/nt.
struct FrameCube {
  int n1 = 0;
  int n2 = 0;
  int nt = 0;
  double T = 1.0;
  double D1 = 1.0;
  double D2 = 1.0;
  std::vector<double> data;

  double& at(int p, int q, int r) { return data[static_cast<size_t>((p * n2 + q) * nt + r)]; }
  double at(int p, int q, int r) const { return data[static_cast<size_t>((p * n2 + q) * nt + r)]; }
};

inline double eval_video(const PeriodicBandlimitedVideo& video, double d1, double d2,
                         double t) {
  const BandlimitParams& p = video.params();
  std::vector<cplx> e0(static_cast<size_t>(p.n0()));
  std::vector<cplx> e1(static_cast<size_t>(p.n1()));
  std::vector<cplx> e2(static_cast<size_t>(p.n2()));
  for (int m = 0; m < p.n0(); ++m) e0[m] = detail::unit_phase(kTwoPi * (m - p.K0) * t / p.T);
  for (int m = 0; m < p.n1(); ++m) e1[m] = detail::unit_phase(kTwoPi * (m - p.K1) * d1 / p.D1);
  for (int m = 0; m < p.n2(); ++m) e2[m] = detail::unit_phase(kTwoPi * (m - p.K2) * d2 / p.D2);

  cplx sum(0.0, 0.0);
  const std::vector<cplx>& c = video.coefficients.values;
  size_t idx = 0;
  for (int m0 = 0; m0 < p.n0(); ++m0) {
    for (int m1 = 0; m1 < p.n1(); ++m1) {
      const cplx e01 = e0[m0] * e1[m1];
      for (int m2 = 0; m2 < p.n2(); ++m2, ++idx) {
        sum += c[idx] * e01 * e2[m2];
      }
    }
  }
  return detail::real_part_checked(sum, "eval_video");
}

inline double eval_signal(const PixelSignal1D& sig, double t) {
  const int K0 = sig.K0();
  cplx sum(0.0, 0.0);
  for (int k = -K0; k <= K0; ++k) {
    sum += sig.at(k) * detail::unit_phase(kTwoPi * k * t / sig.T);
  }
  return detail::real_part_checked(sum, "eval_signal");
}

/// Restriction of the scene to one viewing direction:
/// c_k = sum_{k1,k2} c_{k,k1,k2} exp(j*2*pi*(d1*k1/D1 + d2*k2/D2)).
/// The nonnegative half is computed and mirrored so the result is
/// Hermitian-symmetric bitwise.
inline PixelSignal1D pixel_signal(const PeriodicBandlimitedVideo& video, double d1,
                                  double d2) {
  const BandlimitParams& p = video.params();
  std::vector<cplx> phase(static_cast<size_t>(p.spatial_count()));
  size_t s = 0;
  for (int m1 = 0; m1 < p.n1(); ++m1) {
    for (int m2 = 0; m2 < p.n2(); ++m2, ++s) {
      phase[s] = detail::unit_phase(
          kTwoPi * (d1 * (m1 - p.K1) / p.D1 + d2 * (m2 - p.K2) / p.D2));
    }
  }

  PixelSignal1D sig;
  sig.T = p.T;
  sig.coeffs.assign(static_cast<size_t>(p.n0()), cplx(0.0, 0.0));
  const std::vector<cplx>& c = video.coefficients.values;
  for (int k = 0; k <= p.K0; ++k) {
    const int m0 = k + p.K0;
    cplx sum(0.0, 0.0);
    size_t idx = static_cast<size_t>(m0) * phase.size();
    for (size_t j = 0; j < phase.size(); ++j) {
      sum += c[idx + j] * phase[j];
    }
    if (k == 0) sum = cplx(sum.real(), 0.0);
    sig.coeffs[static_cast<size_t>(m0)] = sum;
    sig.coeffs[static_cast<size_t>(p.K0 - k)] = std::conj(sum);
  }
  return sig;
}

/// Rows are the temporal coefficient vectors of the proxy signals x^(j):
/// row j-1, column k+K0 holds c_{k,k1(j),k2(j)}.
inline Eigen::MatrixXcd proxy_coefficients(const PeriodicBandlimitedVideo& video,
                                           const IndexMap& map) {
  const BandlimitParams& p = video.params();
  if (map.K1 != p.K1 || map.K2 != p.K2) {
    throw ShapeMismatchError("index map does not match video bandwidth");
  }
  Eigen::MatrixXcd m(p.spatial_count(), p.temporal_count());
  for (int j = 1; j <= map.J(); ++j) {
    const auto [k1, k2] = map.inverse_index(j);
    for (int m0 = 0; m0 < p.n0(); ++m0) {
      m(j - 1, m0) = video.coefficients.at(m0 - p.K0, k1, k2);
    }
  }
  return m;
}

/// Rebuilds a tensor from a proxy coefficient matrix; exact inverse of
/// proxy_coefficients.
inline CoefficientTensor tensor_from_proxy(const Eigen::MatrixXcd& m,
                                           const BandlimitParams& p) {
  if (m.rows() != p.spatial_count() || m.cols() != p.temporal_count()) {
    throw ShapeMismatchError("proxy matrix shape does not match bandwidth");
  }
  CoefficientTensor t = CoefficientTensor::zeros(p);
  const IndexMap map{p.K1, p.K2};
  for (int j = 1; j <= map.J(); ++j) {
    const auto [k1, k2] = map.inverse_index(j);
    for (int m0 = 0; m0 < p.n0(); ++m0) {
      t.at(m0 - p.K0, k1, k2) = m(j - 1, m0);
    }
  }
  t.real_flag = false;
  return t;
}

/// Flattens the tensor into the unknown vector of the sensing system:
/// entry (j-1)*K + (k0+K0) holds c_{k0,k1(j),k2(j)}.
inline Eigen::VectorXcd coefficient_vector(const CoefficientTensor& t) {
  const BandlimitParams& p = t.params;
  const IndexMap map{p.K1, p.K2};
  const int K = p.temporal_count();
  Eigen::VectorXcd v(p.coefficient_count());
  for (int j = 1; j <= map.J(); ++j) {
    const auto [k1, k2] = map.inverse_index(j);
    for (int m0 = 0; m0 < K; ++m0) {
      v((j - 1) * K + m0) = t.at(m0 - p.K0, k1, k2);
    }
  }
  return v;
}

inline CoefficientTensor tensor_from_vector(const Eigen::VectorXcd& v,
                                            const BandlimitParams& p) {
  if (v.size() != p.coefficient_count()) {
    throw ShapeMismatchError("coefficient vector length does not match bandwidth");
  }
  CoefficientTensor t = CoefficientTensor::zeros(p);
  const IndexMap map{p.K1, p.K2};
  const int K = p.temporal_count();
  for (int j = 1; j <= map.J(); ++j) {
    const auto [k1, k2] = map.inverse_index(j);
    for (int m0 = 0; m0 < K; ++m0) {
      t.at(m0 - p.K0, k1, k2) = v((j - 1) * K + m0);
    }
  }
  t.real_flag = false;
  return t;
}

/// Fits a periodic bandlimited scene to a frame cube by the centered 3D DFT
/// at critical sampling: K1 = (n1-1)/2, K2 = (n2-1)/2, K0 = (nt-1)/2.
/// Evaluating the result at the grid points reproduces the frames.
inline PeriodicBandlimitedVideo from_frames(const FrameCube& cube) {
  if (cube.n1 < 1 || cube.n2 < 1 || cube.nt < 1) {
    throw OutOfRangeError("frame cube dimensions must be positive");
  }
  if (cube.n1 % 2 == 0 || cube.n2 % 2 == 0 || cube.nt % 2 == 0) {
    throw EvenDimensionError("frame cube dimensions must be odd");
  }
  if (static_cast<int>(cube.data.size()) != cube.n1 * cube.n2 * cube.nt) {
    throw ShapeMismatchError("frame cube data size does not match dimensions");
  }
  for (double x : cube.data) {
    if (!std::isfinite(x)) throw NonFiniteError("frame cube contains NaN or Inf");
  }

  BandlimitParams p;
  p.K1 = (cube.n1 - 1) / 2;
  p.K2 = (cube.n2 - 1) / 2;
  p.K0 = (cube.nt - 1) / 2;
  p.T = cube.T;
  p.D1 = cube.D1;
  p.D2 = cube.D2;
  p.validate();

  const int n1 = cube.n1, n2 = cube.n2, nt = cube.nt;
  auto axis_table = [](int n, int Kax) {
    std::vector<cplx> w(static_cast<size_t>(n) * n);
    for (int s = 0; s < n; ++s) {
      for (int m = 0; m < n; ++m) {
        w[static_cast<size_t>(s) * n + m] =
            detail::unit_phase(-kTwoPi * s * (m - Kax) / n);
      }
    }
    return w;
  };
  const std::vector<cplx> wt = axis_table(nt, p.K0);
  const std::vector<cplx> w1 = axis_table(n1, p.K1);
  const std::vector<cplx> w2 = axis_table(n2, p.K2);

  // Temporal axis: g1[(p,q,m0)]
  std::vector<cplx> g1(static_cast<size_t>(n1) * n2 * nt);
  for (int pp = 0; pp < n1; ++pp) {
    for (int q = 0; q < n2; ++q) {
      for (int m0 = 0; m0 < nt; ++m0) {
        cplx s(0.0, 0.0);
        for (int r = 0; r < nt; ++r) {
          s += cube.at(pp, q, r) * wt[static_cast<size_t>(r) * nt + m0];
        }
        g1[static_cast<size_t>((pp * n2 + q) * nt + m0)] = s;
      }
    }
  }
  // Second spatial axis: g2[(p,m2,m0)]
  std::vector<cplx> g2(static_cast<size_t>(n1) * n2 * nt);
  for (int pp = 0; pp < n1; ++pp) {
    for (int m2 = 0; m2 < n2; ++m2) {
      for (int m0 = 0; m0 < nt; ++m0) {
        cplx s(0.0, 0.0);
        for (int q = 0; q < n2; ++q) {
          s += g1[static_cast<size_t>((pp * n2 + q) * nt + m0)] *
               w2[static_cast<size_t>(q) * n2 + m2];
        }
        g2[static_cast<size_t>((pp * n2 + m2) * nt + m0)] = s;
      }
    }
  }
  // First spatial axis, into tensor layout (m0,m1,m2).
  CoefficientTensor t = CoefficientTensor::zeros(p);
  const double scale = 1.0 / (static_cast<double>(n1) * n2 * nt);
  for (int m0 = 0; m0 < nt; ++m0) {
    for (int m1 = 0; m1 < n1; ++m1) {
      for (int m2 = 0; m2 < n2; ++m2) {
        cplx s(0.0, 0.0);
        for (int pp = 0; pp < n1; ++pp) {
          s += g2[static_cast<size_t>((pp * n2 + m2) * nt + m0)] *
               w1[static_cast<size_t>(pp) * n1 + m1];
        }
        t.values[static_cast<size_t>(t.flat(m0, m1, m2))] = s * scale;
      }
    }
  }
  t.real_flag = false;
  t.hermitianize();
  return PeriodicBandlimitedVideo(std::move(t));
}

/// Samples the scene on a uniform (n1, n2, nt) grid over one period cell.
inline FrameCube render(const PeriodicBandlimitedVideo& video, int n1, int n2, int nt) {
  if (n1 < 1 || n2 < 1 || nt < 1) {
    throw OutOfRangeError("render grid dimensions must be positive");
  }
  const BandlimitParams& p = video.params();
  FrameCube cube;
  cube.n1 = n1;
  cube.n2 = n2;
  cube.nt = nt;
  cube.T = p.T;
  cube.D1 = p.D1;
  cube.D2 = p.D2;
  cube.data.assign(static_cast<size_t>(n1) * n2 * nt, 0.0);

  auto axis_table = [](int nsamples, int ncoeff, int Kax) {
    std::vector<cplx> w(static_cast<size_t>(nsamples) * ncoeff);
    for (int s = 0; s < nsamples; ++s) {
      for (int m = 0; m < ncoeff; ++m) {
        w[static_cast<size_t>(s) * ncoeff + m] =
            detail::unit_phase(kTwoPi * s * (m - Kax) / nsamples);
      }
    }
    return w;
  };
  const std::vector<cplx> wt = axis_table(nt, p.n0(), p.K0);
  const std::vector<cplx> w1 = axis_table(n1, p.n1(), p.K1);
  const std::vector<cplx> w2 = axis_table(n2, p.n2(), p.K2);

  // Contract m1, then m2, then m0.
  std::vector<cplx> h1(static_cast<size_t>(n1) * p.n2() * p.n0());
  for (int pp = 0; pp < n1; ++pp) {
    for (int m0 = 0; m0 < p.n0(); ++m0) {
      for (int m2 = 0; m2 < p.n2(); ++m2) {
        cplx s(0.0, 0.0);
        for (int m1 = 0; m1 < p.n1(); ++m1) {
          s += video.coefficients.values[static_cast<size_t>(
                   video.coefficients.flat(m0, m1, m2))] *
               w1[static_cast<size_t>(pp) * p.n1() + m1];
        }
        h1[static_cast<size_t>((pp * p.n2() + m2) * p.n0() + m0)] = s;
      }
    }
  }
  std::vector<cplx> h2(static_cast<size_t>(n1) * n2 * p.n0());
  for (int pp = 0; pp < n1; ++pp) {
    for (int q = 0; q < n2; ++q) {
      for (int m0 = 0; m0 < p.n0(); ++m0) {
        cplx s(0.0, 0.0);
        for (int m2 = 0; m2 < p.n2(); ++m2) {
          s += h1[static_cast<size_t>((pp * p.n2() + m2) * p.n0() + m0)] *
               w2[static_cast<size_t>(q) * p.n2() + m2];
        }
        h2[static_cast<size_t>((pp * n2 + q) * p.n0() + m0)] = s;
      }
    }
  }
  for (int pp = 0; pp < n1; ++pp) {
    for (int q = 0; q < n2; ++q) {
      for (int r = 0; r < nt; ++r) {
        cplx s(0.0, 0.0);
        for (int m0 = 0; m0 < p.n0(); ++m0) {
          s += h2[static_cast<size_t>((pp * n2 + q) * p.n0() + m0)] *
               wt[static_cast<size_t>(r) * p.n0() + m0];
        }
        cube.at(pp, q, r) = detail::real_part_checked(s, "render");
      }
    }
  }
  return cube;
}

inline FrameCube render(const PeriodicBandlimitedVideo& video) {
  const BandlimitParams& p = video.params();
  return render(video, p.n1(), p.n2(), p.n0());
}

/// Draws a random real-valued scene: the non-redundant half i.i.d. complex
/// Gaussian with standard deviation 1/sqrt(K*J) (DC real), mirrored onto the
/// negative half. The resulting signal has unit RMS in expectation.
inline PeriodicBandlimitedVideo random_video(const BandlimitParams& p, uint64_t seed) {
  p.validate();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(p.coefficient_count()));
  const double half_sigma = sigma / std::sqrt(2.0);

  CoefficientTensor t = CoefficientTensor::zeros(p);
  for (int m0 = 0; m0 < p.n0(); ++m0) {
    for (int m1 = 0; m1 < p.n1(); ++m1) {
      for (int m2 = 0; m2 < p.n2(); ++m2) {
        const int k0 = m0 - p.K0, k1 = m1 - p.K1, k2 = m2 - p.K2;
        if (k0 == 0 && k1 == 0 && k2 == 0) {
          t.values[static_cast<size_t>(t.flat(m0, m1, m2))] =
              cplx(sigma * normal(gen), 0.0);
        } else if (detail::triple_is_positive(k0, k1, k2)) {
          const cplx c(half_sigma * normal(gen), half_sigma * normal(gen));
          t.values[static_cast<size_t>(t.flat(m0, m1, m2))] = c;
          t.values[static_cast<size_t>(t.flat(p.n0() - 1 - m0, p.n1() - 1 - m1,
                                              p.n2() - 1 - m2))] = std::conj(c);
        }
      }
    }
  }
  t.real_flag = true;
  return PeriodicBandlimitedVideo(std::move(t));
}

}  // namespace temvid
