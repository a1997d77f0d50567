#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "temvid/errors.hpp"
#include "temvid/sensors.hpp"
#include "temvid/video.hpp"

namespace temvid {

/// Integrate-and-fire parameters: the device integrates (y(t) + beta) / kappa
/// and spikes whenever the integral since the last spike reaches 2*delta,
/// i.e. each inter-spike interval satisfies
///   integral of y over (t_l, t_{l+1}) = 2*kappa*delta - beta*(t_{l+1} - t_l).
struct TemParams {
  double kappa = 1.0;
  double delta = 1.0;
  double beta = 0.0;

  void validate() const {
    if (!(kappa > 0.0) || !(delta > 0.0)) {
      throw OutOfRangeError("kappa and delta must be positive");
    }
    if (!std::isfinite(beta)) {
      throw NonFiniteError("beta must be finite");
    }
  }
};

struct SpikeTrain {
  int sensor_id = 0;
  std::vector<double> times;
  double window_start = 0.0;
  double window_end = 0.0;

  int n_spikes() const { return static_cast<int>(times.size()); }

  void validate() const {
    if (!(window_end > window_start)) {
      throw WindowEmptyError("spike train window is empty");
    }
    for (size_t i = 0; i < times.size(); ++i) {
      if (times[i] < window_start || times[i] > window_end) {
        throw OutOfRangeError("spike time outside observation window");
      }
      if (i > 0 && !(times[i] > times[i - 1])) {
        throw OutOfRangeError("spike times must be strictly increasing");
      }
    }
  }
};

/// Closed-form integral of the signal from 0 to t:
///   c0*t + sum_{k!=0} c_k * (exp(j*2*pi*k*t/T) - 1) / (j*2*pi*k/T).
inline double antiderivative(const PixelSignal1D& sig, double t) {
  const int K0 = sig.K0();
  cplx sum(sig.at(0).real() * t, 0.0);
  for (int k = 1; k <= K0; ++k) {
    const double omega = kTwoPi * k / sig.T;
    const cplx jw(0.0, omega);
    const cplx up = (detail::unit_phase(omega * t) - 1.0) / jw;
    sum += sig.at(k) * up + sig.at(-k) * std::conj(up);
  }
  return detail::real_part_checked(sum, "antiderivative");
}

namespace detail {

// Sum of |c_k| over k != 0; bounds the oscillating part of the signal.
inline double oscillation_bound(const PixelSignal1D& sig) {
  double amp = 0.0;
  for (int k = 1; k <= sig.K0(); ++k) amp += 2.0 * std::abs(sig.at(k));
  return amp;
}

inline void require_spiking(const PixelSignal1D& sig, double beta) {
  // Conservative: min_t y(t) >= c0 - sum_{k!=0} |c_k|.
  const double min_bound = sig.at(0).real() - oscillation_bound(sig);
  if (!(beta + min_bound > 0.0)) {
    throw NonSpikingInputError("bias too small: beta + min y(t) may be nonpositive");
  }
}

}  // namespace detail

/// Simulates the integrate-and-fire loop over [window.first, window.second].
/// The integrator starts at -delta, so the first spike obeys the same
/// integral equation as every later pair. Each spike time is located by
/// bracketing (the integrand y + beta is positive, so the running integral is
/// strictly increasing), bisection to 1e-12*T, and Newton polish against the
/// closed-form antiderivative.
inline SpikeTrain encode(const PixelSignal1D& sig, const TemParams& params,
                         std::pair<double, double> window) {
  params.validate();
  const double t0 = window.first, t1 = window.second;
  if (!(t1 > t0)) throw WindowEmptyError("observation window is empty");
  detail::require_spiking(sig, params.beta);

  const double c0 = sig.at(0).real();
  const double amp = detail::oscillation_bound(sig);
  const double target = 2.0 * params.kappa * params.delta;
  // Lower bound on inter-spike spacing, used as the bracketing step.
  const double step = target / (params.beta + c0 + amp);

  auto total = [&](double t) { return antiderivative(sig, t) + params.beta * t; };

  SpikeTrain train;
  train.window_start = t0;
  train.window_end = t1;

  double prev = t0;
  double total_prev = total(t0);
  const double total_end = total(t1);
  while (total_end - total_prev >= target * (1.0 - 1e-12)) {
    double t;
    if (total(t1) - total_prev < target) {
      // Root sits past t1 by less than the residual tolerance; clamp.
      t = t1;
    } else {
      double lo = prev;
      double hi = std::min(prev + step, t1);
      while (total(hi) - total_prev < target) {
        lo = hi;
        hi = std::min(hi + step, t1);
      }
      while (hi - lo > 1e-12 * sig.T) {
        const double mid = 0.5 * (lo + hi);
        if (total(mid) - total_prev < target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      t = 0.5 * (lo + hi);
      for (int it = 0; it < 3; ++it) {
        const double g = total(t) - total_prev - target;
        if (std::abs(g) <= 1e-13 * target) break;
        const double slope = eval_signal(sig, t) + params.beta;
        t = std::clamp(t - g / slope, lo, hi);
      }
    }
    train.times.push_back(t);
    prev = t;
    total_prev = total(t);
    if (t >= t1) break;
  }
  train.validate();
  return train;
}

/// Threshold that makes the TEM emit about `target_spikes` spikes over the
/// window: delta = (c0 + beta) * length / (2 * kappa * target). The realized
/// count is within one spike of the target.
inline double calibrate_threshold(const PixelSignal1D& sig, double kappa, double beta,
                                  int target_spikes, std::pair<double, double> window) {
  if (!(kappa > 0.0)) throw OutOfRangeError("kappa must be positive");
  if (target_spikes < 1) throw OutOfRangeError("target spike count must be at least 1");
  if (!(window.second > window.first)) throw WindowEmptyError("observation window is empty");
  detail::require_spiking(sig, beta);
  const double c0 = sig.at(0).real();
  return (c0 + beta) * (window.second - window.first) / (2.0 * kappa * target_spikes);
}

/// A bias that passes the conservative spiking check for every pixel signal
/// of the scene, with margin 1: beta = 1 + max(0, sum_{k!=DC} |c_k| - c_DC).
inline double default_bias(const PeriodicBandlimitedVideo& video) {
  const BandlimitParams& p = video.params();
  double sum_off_dc = 0.0;
  for (const cplx& c : video.coefficients.values) sum_off_dc += std::abs(c);
  const double dc = video.coefficients.at(0, 0, 0).real();
  sum_off_dc -= std::abs(video.coefficients.at(0, 0, 0));
  return 1.0 + std::max(0.0, sum_off_dc - dc);
}

/// Encodes every sensor of the grid; train i carries sensor_id = i.
inline std::vector<SpikeTrain> encode_array(const PeriodicBandlimitedVideo& video,
                                            const SensorGrid& grid,
                                            const std::vector<TemParams>& params,
                                            std::pair<double, double> window) {
  if (static_cast<int>(params.size()) != grid.size()) {
    throw ShapeMismatchError("need one TemParams per sensor");
  }
  std::vector<SpikeTrain> trains;
  trains.reserve(params.size());
  for (int i = 0; i < grid.size(); ++i) {
    const PixelSignal1D sig =
        pixel_signal(video, grid.directions[i].d1, grid.directions[i].d2);
    try {
      SpikeTrain train = encode(sig, params[i], window);
      train.sensor_id = i;
      trains.push_back(std::move(train));
    } catch (const NonSpikingInputError& e) {
      throw NonSpikingInputError("sensor " + std::to_string(i) + ": " + e.what());
    }
  }
  return trains;
}

}  // namespace temvid
