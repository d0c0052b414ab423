#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/phantom.hpp"
#include "core/sinogram.hpp"

namespace dtomo {

struct NoiseSpec {
  double percent = 0.0;
  std::uint64_t seed = 0;
};

// Multiplies entry (ip, iphi) by an independent uniform draw in
// [1 - percent/100, 1 + percent/100]. The draw is a pure function of
// (seed, ip, iphi), so results do not depend on iteration or thread order.
DiscSinogram add_noise(const DiscSinogram& s, const NoiseSpec& spec);

// The uniform deviate in [0, 1) used by add_noise, exposed for tests.
double noise_unit_draw(std::uint64_t seed, std::uint64_t i, std::uint64_t j);

struct SmoothSpec {
  int window = 1;          // odd moving-average width
  int subsample_stride = 1;

  void validate() const {
    require(window >= 1 && window % 2 == 1, Errc::invalid_argument, "window must be odd and positive");
    require(subsample_stride >= 1, Errc::invalid_argument, "stride must be positive");
  }
};

// Centered moving average (window shrinks symmetrically at the edges),
// subsample by stride, then monotone piecewise-cubic interpolation evaluated
// at query_xs. Monotone input stays monotone.
std::vector<double> smooth_series(std::span<const double> xs, std::span<const double> ys,
                                  const SmoothSpec& spec, std::span<const double> query_xs);

// smooth_series applied per phi-column over the p axis.
DiscSinogram smooth_sinogram(const DiscSinogram& s, const SmoothSpec& spec);

// Monotone cubic Hermite interpolant with harmonic-mean limited slopes.
struct MonotoneCubic {
  std::vector<double> xs, ys, slopes;

  static MonotoneCubic fit(std::span<const double> xs, std::span<const double> ys);
  double operator()(double x) const;
};

struct SliceCheckParams {
  int n_p = 200;          // forward p samples on (0, 1]
  int fourier_cells = 2048;  // per-axis quadrature for the 2-D Fourier side
  double rel_floor = 1e-9;   // relative floor for the error denominator
};

// Verifies -i sigma FT_p[Df](sigma, phi) = (2 pi)^{-1/2} FT_2[f~](sigma Phi)
// for the given sigmas (each must satisfy 0 < |sigma| <= quarter-Nyquist of
// the p grid). Returns the max relative error over the sigmas.
double fourier_slice_check(const PhantomSpec& spec, double phi, std::span<const double> sigmas,
                           const SliceCheckParams& params = {});

}  // namespace dtomo
