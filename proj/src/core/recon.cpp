#include "core/recon.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "core/parallel.hpp"
#include "core/transform.hpp"

namespace dtomo {

FilterSpec::Kind filter_kind_from_string(const std::string& name) {
  if (name == "ramlak") return FilterSpec::Kind::ramlak;
  if (name == "ramlak_hamming") return FilterSpec::Kind::ramlak_hamming;
  fail(Errc::invalid_argument, "unknown filter kind: " + name);
}

namespace {

std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

// Complex FFT pair of length n; plan creation is serialized, execution is not.
struct FftPlan {
  int n = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  fftw_complex* buf = nullptr;

  explicit FftPlan(int size) : n(size) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf = fftw_alloc_complex(static_cast<size_t>(n));
    forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buf);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

int next_pow2(int n) {
  int m = 1;
  while (m < n) m *= 2;
  return m;
}

// Frequency response of the band-limited ramp: the DFT of the spatial kernel
// h[0] = 1/(4 tau^2), h[n] = -1/(pi n tau)^2 for odd n, 0 for even n, wrapped
// onto length m and scaled by tau. The zero bin lands on a small positive
// value instead of 0, which keeps the reconstruction mean unbiased.
std::vector<double> ramp_response(int m, double tau) {
  std::vector<double> h(static_cast<size_t>(m), 0.0);
  h[0] = 1.0 / (4.0 * tau * tau);
  for (int n = 1; n <= m / 2; n += 2) {
    const double v = -1.0 / (kPi * kPi * n * n * tau * tau);
    h[static_cast<size_t>(n)] = v;
    h[static_cast<size_t>(m - n)] = v;
  }
  FftPlan plan(m);
  for (int k = 0; k < m; ++k) {
    plan.buf[k][0] = h[static_cast<size_t>(k)];
    plan.buf[k][1] = 0.0;
  }
  fftw_execute(plan.forward);
  std::vector<double> resp(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) resp[static_cast<size_t>(k)] = tau * plan.buf[k][0];
  return resp;
}

void apply_window(std::vector<double>& resp, const FilterSpec& filter) {
  const int m = static_cast<int>(resp.size());
  for (int k = 0; k < m; ++k) {
    const int mirrored = std::min(k, m - k);
    const double frac = static_cast<double>(mirrored) / (m / 2);  // fraction of Nyquist
    if (frac > filter.cutoff + 1e-12) {
      resp[static_cast<size_t>(k)] = 0.0;
    } else if (filter.kind == FilterSpec::Kind::ramlak_hamming) {
      resp[static_cast<size_t>(k)] *= 0.54 + 0.46 * std::cos(kPi * frac / filter.cutoff);
    }
  }
}

struct FoldedSinogram {
  std::vector<double> p;            // symmetric, uniform
  std::vector<double> phi;          // [0, pi)
  std::vector<std::vector<double>> rows;
};

// Builds per-phi rows over a symmetric p axis. 2pi data with positive p is
// folded via Rf(-p, phi) = Rf(p, phi + pi); data already carrying negative p
// is taken as stored.
FoldedSinogram fold_for_backprojection(const DiscSinogram& s) {
  s.validate();
  require(s.quantity == Quantity::radon, Errc::invalid_argument, "fbp expects radon-quantity data");
  s.p_spacing();  // uniformity check
  FoldedSinogram out;
  const int np = s.n_p();
  if (s.p_values.front() < 0.0) {
    out.p = s.p_values;
    out.phi = s.phi_values;
    out.rows.resize(static_cast<size_t>(s.n_phi()));
    for (int j = 0; j < s.n_phi(); ++j) {
      out.rows[static_cast<size_t>(j)].resize(static_cast<size_t>(np));
      for (int i = 0; i < np; ++i) out.rows[static_cast<size_t>(j)][static_cast<size_t>(i)] = s.at(j, i);
    }
    return out;
  }
  // Fold: the merged axis must stay uniform, so the positive grid must be
  // either cell-centered (first sample at spacing/2) or edge-centered (first
  // sample at one spacing, with a p = 0 row inserted from the symmetry
  // Rf(0, phi) = Rf(0, phi + pi)).
  const double h = s.p_spacing();
  const bool cell_centered = std::abs(s.p_values.front() - 0.5 * h) <= 1e-9 * std::max(1.0, h);
  const bool edge_centered = std::abs(s.p_values.front() - h) <= 1e-9 * std::max(1.0, h);
  require(cell_centered || edge_centered, Errc::axis_error,
          "fbp fold needs the first p sample at spacing/2 or at one spacing");
  const int nphi = s.n_phi();
  require(nphi % 2 == 0, Errc::axis_error, "fbp fold needs an even phi count over [0, 2pi)");
  const int zero_rows = edge_centered ? 1 : 0;
  out.p.reserve(static_cast<size_t>(2 * np + zero_rows));
  for (int i = np - 1; i >= 0; --i) out.p.push_back(-s.p_values[static_cast<size_t>(i)]);
  if (edge_centered) out.p.push_back(0.0);
  out.p.insert(out.p.end(), s.p_values.begin(), s.p_values.end());
  const int half = nphi / 2;
  out.phi.resize(static_cast<size_t>(half));
  out.rows.resize(static_cast<size_t>(half));
  for (int j = 0; j < half; ++j) {
    const int k = s.opposite_phi_index(j);
    out.phi[static_cast<size_t>(j)] = s.phi_values[static_cast<size_t>(j)];
    auto& row = out.rows[static_cast<size_t>(j)];
    row.resize(static_cast<size_t>(2 * np + zero_rows));
    for (int i = 0; i < np; ++i) {
      row[static_cast<size_t>(np - 1 - i)] = s.at(k, i);  // p < 0 from phi + pi
      row[static_cast<size_t>(np + zero_rows + i)] = s.at(j, i);
    }
    if (edge_centered) row[static_cast<size_t>(np)] = 0.5 * (s.at(j, 0) + s.at(k, 0));
  }
  return out;
}

}  // namespace

ImageGrid fbp(const DiscSinogram& radon, const FilterSpec& filter, int width, int height,
              const Extent& extent) {
  filter.validate();
  FoldedSinogram folded = fold_for_backprojection(radon);
  const int np = static_cast<int>(folded.p.size());
  const int nrows = static_cast<int>(folded.phi.size());
  const double tau = folded.p[1] - folded.p[0];

  const int m = next_pow2(2 * np);
  std::vector<double> resp = ramp_response(m, tau);
  apply_window(resp, filter);

  // Filter every row: Q = IDFT(DFT(g) * H).
  std::vector<std::vector<double>> filtered(static_cast<size_t>(nrows));
  {
    FftPlan plan(m);
    for (int j = 0; j < nrows; ++j) {
      for (int k = 0; k < m; ++k) {
        plan.buf[k][0] = k < np ? folded.rows[static_cast<size_t>(j)][static_cast<size_t>(k)] : 0.0;
        plan.buf[k][1] = 0.0;
      }
      fftw_execute(plan.forward);
      for (int k = 0; k < m; ++k) {
        plan.buf[k][0] *= resp[static_cast<size_t>(k)];
        plan.buf[k][1] *= resp[static_cast<size_t>(k)];
      }
      fftw_execute(plan.backward);
      auto& q = filtered[static_cast<size_t>(j)];
      q.resize(static_cast<size_t>(np));
      const double inv_m = 1.0 / m;
      for (int k = 0; k < np; ++k) q[static_cast<size_t>(k)] = plan.buf[k][0] * inv_m;
    }
  }

  // pi/K over half-range rows; for rows spanning [0, 2pi) the doubled row
  // count and the halved per-row contribution cancel to the same weight.
  const double weight = kPi / nrows;

  ImageGrid img(width, height, extent);
  const double p0 = folded.p.front();
  std::vector<double> cos_phi(static_cast<size_t>(nrows)), sin_phi(static_cast<size_t>(nrows));
  for (int j = 0; j < nrows; ++j) {
    cos_phi[static_cast<size_t>(j)] = std::cos(folded.phi[static_cast<size_t>(j)]);
    sin_phi[static_cast<size_t>(j)] = std::sin(folded.phi[static_cast<size_t>(j)]);
  }
  parallel_for(height, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t jrow = lo; jrow < hi; ++jrow) {
      const double y = img.py(static_cast<int>(jrow));
      for (int i = 0; i < width; ++i) {
        const double x = img.px(i);
        double acc = 0.0;
        for (int j = 0; j < nrows; ++j) {
          const double t = (x * cos_phi[static_cast<size_t>(j)] + y * sin_phi[static_cast<size_t>(j)] - p0) / tau;
          if (t < 0.0 || t > np - 1) continue;
          const int k0 = static_cast<int>(t);
          const int k1 = std::min(k0 + 1, np - 1);
          const double f = t - k0;
          const auto& q = filtered[static_cast<size_t>(j)];
          acc += (1.0 - f) * q[static_cast<size_t>(k0)] + f * q[static_cast<size_t>(k1)];
        }
        img.at(i, static_cast<int>(jrow)) = acc * weight;
      }
    }
  });
  return img;
}

ImageGrid reconstruct_view(const DiscSinogram& data, const FilterSpec& filter, double h, int size,
                           const ScannerGeometry& geom, bool central_difference, int inverted_size) {
  require(data.quantity == Quantity::disc_integral, Errc::invalid_argument,
          "reconstruct_view expects disc_integral data");
  if (inverted_size <= 0) inverted_size = 2 * size;
  DiscSinogram rad = derivative_p(data, h, central_difference);
  if (!central_difference) {
    // A forward difference estimates the derivative at p + h/2; relabel the
    // samples with their true centers and drop the duplicate backward-
    // difference tail so the inversion weighting stays unbiased.
    require(rad.n_p() >= 3, Errc::invalid_argument, "too few p samples for reconstruction");
    std::vector<double> centers(rad.p_values.begin(), rad.p_values.end() - 1);
    for (double& p : centers) p += 0.5 * h;
    DiscSinogram shifted(centers, rad.phi_values, Quantity::radon, rad.r);
    for (int j = 0; j < shifted.n_phi(); ++j)
      for (int i = 0; i < shifted.n_p(); ++i) shifted.at(j, i) = rad.at(j, i);
    rad = std::move(shifted);
  }
  const ImageGrid ftilde = fbp(rad, filter, inverted_size, inverted_size);
  const Extent frame = ring_extent(geom);
  ImageGrid img = inversion_map(ftilde, size, size, frame);
  const Vec2 rc = geom.ring_center();
  const double rr2 = geom.ring_radius() * geom.ring_radius();
  for (int j = 0; j < img.height; ++j)
    for (int i = 0; i < img.width; ++i) {
      const Vec2 u{img.px(i), img.py(j)};
      if ((u - rc).norm2() >= rr2) img.at(i, j) = 0.0;
    }
  return img;
}

ImageGrid rotate_image(const ImageGrid& img, double angle, Vec2 about) {
  ImageGrid out(img.width, img.height, img.extent);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  parallel_for(img.height, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j) {
      const double y = img.py(static_cast<int>(j));
      for (int i = 0; i < img.width; ++i) {
        const Vec2 d{img.px(i) - about.x, y - about.y};
        // Pull-back sample: rotate the query point by -angle.
        const Vec2 src{about.x + c * d.x + s * d.y, about.y - s * d.x + c * d.y};
        out.at(i, static_cast<int>(j)) = img.bilinear(src.x, src.y);
      }
    }
  });
  return out;
}

ImageGrid average_views(const PhantomSpec& phantom, const ScannerGeometry& geom,
                        const std::vector<double>& p_values, const std::vector<double>& phi_values,
                        int n_views, const FilterSpec& filter, double h, int size,
                        const ViewDataHook& hook, bool central_difference, int inverted_size) {
  require(n_views >= 1, Errc::invalid_argument, "average_views: n_views must be positive");
  const Vec2 rc = geom.ring_center();
  ImageGrid acc;
  for (int k = 0; k < n_views; ++k) {
    const double alpha = kTwoPi * static_cast<double>(k) / n_views;
    const PhantomSpec view_phantom = rotated(phantom, -alpha, rc);
    DiscSinogram data = disc_transform(view_phantom, p_values, phi_values);
    if (hook) data = hook(std::move(data), k);
    ImageGrid view = reconstruct_view(data, filter, h, size, geom, central_difference, inverted_size);
    if (alpha != 0.0) view = rotate_image(view, alpha, rc);
    if (k == 0) {
      acc = std::move(view);
    } else {
      for (size_t idx = 0; idx < acc.values.size(); ++idx) acc.values[idx] += view.values[idx];
    }
  }
  const double inv = 1.0 / n_views;
  for (double& v : acc.values) v *= inv;
  return acc;
}

namespace {

template <typename Pred>
double mean_where(const ImageGrid& img, Pred&& pred, double* out_mean_abs_dev = nullptr,
                  double ref = 0.0) {
  double sum = 0.0, dev = 0.0;
  std::int64_t count = 0;
  for (int j = 0; j < img.height; ++j)
    for (int i = 0; i < img.width; ++i) {
      const Vec2 u{img.px(i), img.py(j)};
      if (!pred(u)) continue;
      sum += img.at(i, j);
      dev += std::abs(img.at(i, j) - ref);
      ++count;
    }
  require(count > 0, Errc::invalid_argument, "region contains no pixel centers");
  if (out_mean_abs_dev) *out_mean_abs_dev = dev / static_cast<double>(count);
  return sum / static_cast<double>(count);
}

}  // namespace

double mean_in_disc(const ImageGrid& img, Vec2 center, double radius) {
  const double r2 = radius * radius;
  return mean_where(img, [&](Vec2 u) { return (u - center).norm2() < r2; });
}

double mean_in_annulus(const ImageGrid& img, Vec2 center, double r_in, double r_out) {
  return mean_where(img, [&](Vec2 u) {
    const double d2 = (u - center).norm2();
    return d2 >= r_in * r_in && d2 < r_out * r_out;
  });
}

double mean_abs_dev_in_disc(const ImageGrid& img, Vec2 center, double radius, double ref) {
  double dev = 0.0;
  const double r2 = radius * radius;
  mean_where(img, [&](Vec2 u) { return (u - center).norm2() < r2; }, &dev, ref);
  return dev;
}

}  // namespace dtomo
