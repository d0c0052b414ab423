#include "core/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "core/parallel.hpp"
#include "core/transform.hpp"

namespace dtomo {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double noise_unit_draw(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ i) ^ j);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

DiscSinogram add_noise(const DiscSinogram& s, const NoiseSpec& spec) {
  s.validate();
  require(spec.percent >= 0.0, Errc::invalid_argument, "noise percent must be non-negative");
  DiscSinogram out = s;
  if (spec.percent == 0.0) return out;
  const double amp = spec.percent / 100.0;
  parallel_for(s.n_phi(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j)
      for (int i = 0; i < s.n_p(); ++i) {
        const double u = noise_unit_draw(spec.seed, static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(j));
        out.at(static_cast<int>(j), i) = s.at(static_cast<int>(j), i) * (1.0 + amp * (2.0 * u - 1.0));
      }
  });
  return out;
}

MonotoneCubic MonotoneCubic::fit(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), Errc::invalid_argument, "xs/ys size mismatch");
  require(xs.size() >= 2, Errc::invalid_argument, "need at least two knots");
  for (size_t k = 1; k < xs.size(); ++k)
    require(xs[k] > xs[k - 1], Errc::invalid_argument, "knots must be strictly ascending");

  MonotoneCubic mc;
  mc.xs.assign(xs.begin(), xs.end());
  mc.ys.assign(ys.begin(), ys.end());
  const size_t n = xs.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    delta[k] = (ys[k + 1] - ys[k]) / h[k];
  }
  mc.slopes.assign(n, 0.0);
  // Interior: weighted harmonic mean of the neighbour secants, zero at local
  // extrema (Fritsch-Carlson limiter).
  for (size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] == 0.0 || delta[k] == 0.0 || (delta[k - 1] > 0) != (delta[k] > 0)) {
      mc.slopes[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      mc.slopes[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  // One-sided three-point ends, clipped to preserve shape.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if ((m > 0) != (d0 > 0) || d0 == 0.0) m = 0.0;
    else if ((d0 > 0) != (d1 > 0) && std::abs(m) > 3.0 * std::abs(d0)) m = 3.0 * d0;
    return m;
  };
  if (n == 2) {
    mc.slopes[0] = mc.slopes[1] = delta[0];
  } else {
    mc.slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    mc.slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  return mc;
}

double MonotoneCubic::operator()(double x) const {
  const size_t n = xs.size();
  if (x <= xs.front()) return ys.front() + slopes.front() * (x - xs.front());
  if (x >= xs.back()) return ys.back() + slopes.back() * (x - xs.back());
  const size_t hi = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const size_t k = std::min(hi - 1, n - 2);
  const double h = xs[k + 1] - xs[k];
  const double t = (x - xs[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * ys[k] + h10 * h * slopes[k] + h01 * ys[k + 1] + h11 * h * slopes[k + 1];
}

std::vector<double> smooth_series(std::span<const double> xs, std::span<const double> ys,
                                  const SmoothSpec& spec, std::span<const double> query_xs) {
  spec.validate();
  require(xs.size() == ys.size(), Errc::invalid_argument, "xs/ys size mismatch");
  const size_t n = xs.size();
  require(n >= 2, Errc::invalid_argument, "need at least two samples");
  require(static_cast<size_t>(spec.window) <= n, Errc::invalid_argument, "window exceeds series length");
  for (size_t k = 1; k < n; ++k)
    require(xs[k] > xs[k - 1], Errc::invalid_argument, "xs must be strictly ascending");

  const int half = (spec.window - 1) / 2;
  std::vector<double> averaged(n);
  for (size_t k = 0; k < n; ++k) {
    const int hw = std::min<int>({half, static_cast<int>(k), static_cast<int>(n - 1 - k)});
    double sum = 0.0;
    for (int d = -hw; d <= hw; ++d) sum += ys[k + static_cast<size_t>(d)];
    averaged[k] = sum / (2 * hw + 1);
  }

  // Knots start at the first fully averaged index; the partially averaged
  // edge samples would otherwise pin raw noise at the ends.
  const size_t first = std::min<size_t>(static_cast<size_t>(half), (n - 1) / 2);
  const size_t last = n - 1 - first;
  require(first < last, Errc::invalid_argument, "window too wide for the series length");
  std::vector<double> sub_x, sub_y;
  for (size_t k = first; k <= last; k += static_cast<size_t>(spec.subsample_stride)) {
    sub_x.push_back(xs[k]);
    sub_y.push_back(averaged[k]);
  }
  if (sub_x.back() != xs[last]) {
    sub_x.push_back(xs[last]);
    sub_y.push_back(averaged[last]);
  }

  const MonotoneCubic mc = MonotoneCubic::fit(sub_x, sub_y);
  std::vector<double> out(query_xs.size());
  for (size_t k = 0; k < query_xs.size(); ++k) out[k] = mc(query_xs[k]);
  return out;
}

DiscSinogram smooth_sinogram(const DiscSinogram& s, const SmoothSpec& spec) {
  s.validate();
  spec.validate();
  DiscSinogram out = s;
  parallel_for(s.n_phi(), [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> col(static_cast<size_t>(s.n_p()));
    for (std::int64_t j = lo; j < hi; ++j) {
      for (int i = 0; i < s.n_p(); ++i) col[static_cast<size_t>(i)] = s.at(static_cast<int>(j), i);
      const std::vector<double> smoothed = smooth_series(s.p_values, col, spec, s.p_values);
      for (int i = 0; i < s.n_p(); ++i) out.at(static_cast<int>(j), i) = smoothed[static_cast<size_t>(i)];
    }
  });
  return out;
}

double fourier_slice_check(const PhantomSpec& spec, double phi, std::span<const double> sigmas,
                           const SliceCheckParams& params) {
  require(!sigmas.empty(), Errc::invalid_argument, "no sigma values given");
  const std::vector<double> p_grid = default_p_grid(params.n_p);
  const double dp = p_grid[1] - p_grid[0];
  const double nyquist = kPi / dp;
  for (double sigma : sigmas)
    require(sigma != 0.0 && std::abs(sigma) <= nyquist / 4.0, Errc::out_of_band,
            "sigma outside the checked band (0, quarter-Nyquist]");

  // Two opposite directions suffice for the extension at a single phi.
  double phi0 = std::fmod(phi, kTwoPi);
  if (phi0 < 0.0) phi0 += kTwoPi;
  double phi1 = phi0 + kPi;
  if (phi1 >= kTwoPi) phi1 -= kTwoPi;
  std::vector<double> phis = phi0 < phi1 ? std::vector<double>{phi0, phi1}
                                         : std::vector<double>{phi1, phi0};
  const int row = phi0 < phi1 ? 0 : 1;
  const DiscSinogram forward = disc_transform(spec, p_grid, phis);
  const DiscSinogram ext = extend_sinogram(forward, &spec);
  const double c_phi = ext.c_values[static_cast<size_t>(row)];

  // Trapezoid weights over the extended (non-equispaced around 0) axis.
  const int np_ext = ext.n_p();
  std::vector<double> w(static_cast<size_t>(np_ext));
  for (int i = 0; i < np_ext; ++i) {
    const double left = i > 0 ? ext.p_values[static_cast<size_t>(i - 1)] : ext.p_values[0];
    const double right = i + 1 < np_ext ? ext.p_values[static_cast<size_t>(i + 1)]
                                        : ext.p_values[static_cast<size_t>(np_ext - 1)];
    w[static_cast<size_t>(i)] = 0.5 * (right - left);
  }

  // 2-D Fourier quadrature of the inverted density over its support annulus.
  struct Node {
    double x, y, v;
  };
  std::vector<Node> nodes;
  const double rmin_f = spec.support_rmin();
  const double rmax_f = spec.support_rmax();
  require(rmin_f > 0.0, Errc::invalid_argument, "support touches the origin");
  const double xrad = 1.0 / rmin_f;  // outer radius of the inverted support
  const int cells = params.fourier_cells;
  const double cell = 2.0 * xrad / cells;
  for (int j = 0; j < cells; ++j) {
    const double y = -xrad + (j + 0.5) * cell;
    for (int i = 0; i < cells; ++i) {
      const double x = -xrad + (i + 0.5) * cell;
      const double rho2 = x * x + y * y;
      if (rho2 < 1.0 / (rmax_f * rmax_f) || rho2 > 1.0 / (rmin_f * rmin_f)) continue;
      const double v = spec.eval({x / rho2, y / rho2}) / (rho2 * rho2);
      if (v != 0.0) nodes.push_back({x, y, v});
    }
  }

  const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
  const double mass = spec.total_mass();
  const Vec2 dir = unit_vector(phi0);
  double max_err = 0.0;
  std::vector<std::complex<double>> lhs(sigmas.size()), rhs(sigmas.size());
  for (size_t si = 0; si < sigmas.size(); ++si) {
    const double sigma = sigmas[si];
    // The derivative bridge holds on p < 0 for the complement branch
    // mass + c - D1(-p, phi + pi), so the transform splits into a compactly
    // supported part plus constant and sgn tails handled in closed form:
    // -i sigma FT[Df](sigma) = -i sigma FT[D_cpt](sigma) + mass/sqrt(2 pi).
    std::complex<double> cpt_hat = 0.0;
    for (int i = 0; i < np_ext; ++i) {
      const double p = ext.p_values[static_cast<size_t>(i)];
      double dc;
      if (p > 0.0)
        dc = ext.at(row, i) - c_phi;
      else if (p < 0.0)
        dc = -ext.at(row, i) - c_phi;
      else
        dc = -c_phi;
      cpt_hat += dc * w[static_cast<size_t>(i)] * std::exp(std::complex<double>(0.0, -p * sigma));
    }
    cpt_hat *= inv_sqrt_2pi;
    lhs[si] = std::complex<double>(0.0, -sigma) * cpt_hat + mass * inv_sqrt_2pi;

    // Slice side: (2 pi)^{-1/2} times the plain 2-D Fourier integral of the
    // inverted density at sigma Phi.
    std::complex<double> f_hat = 0.0;
    for (const Node& nd : nodes)
      f_hat += nd.v * std::exp(std::complex<double>(0.0, -sigma * (dir.x * nd.x + dir.y * nd.y)));
    f_hat *= cell * cell;
    rhs[si] = inv_sqrt_2pi * f_hat;
  }
  double rhs_scale = 0.0;
  for (const auto& v : rhs) rhs_scale = std::max(rhs_scale, std::abs(v));
  if (rhs_scale == 0.0) {
    for (const auto& v : lhs) max_err = std::max(max_err, std::abs(v));
    return max_err;
  }
  for (size_t si = 0; si < sigmas.size(); ++si) {
    const double denom = std::max(std::abs(rhs[si]), params.rel_floor * rhs_scale);
    max_err = std::max(max_err, std::abs(lhs[si] - rhs[si]) / denom);
  }
  return max_err;
}

}  // namespace dtomo
