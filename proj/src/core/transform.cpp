#include "core/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "core/parallel.hpp"

namespace dtomo {

DiscSinogram disc_transform(const PhantomSpec& spec, const std::vector<double>& p_values,
                            const std::vector<double>& phi_values) {
  DiscSinogram s(p_values, phi_values, Quantity::disc_integral, spec.r);
  for (double p : p_values)
    require(p > 0.0, Errc::invalid_argument, "disc_transform: p values must be positive");
  parallel_for(s.n_phi(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j) {
      const double phi = s.phi_values[static_cast<size_t>(j)];
      for (int i = 0; i < s.n_p(); ++i)
        s.at(static_cast<int>(j), i) = analytic_disc_integral(spec, s.p_values[static_cast<size_t>(i)], phi);
    }
  });
  return s;
}

namespace {

// Sum of pixel values with centers strictly inside (a, b) on one row,
// evaluated from an inclusive prefix table.
struct RowPrefix {
  const ImageGrid* img = nullptr;
  std::vector<double> prefix;  // (width + 1) per row, row-major

  explicit RowPrefix(const ImageGrid& grid) : img(&grid) {
    prefix.assign(static_cast<size_t>(grid.height) * (grid.width + 1), 0.0);
    for (int j = 0; j < grid.height; ++j) {
      double* row = &prefix[static_cast<size_t>(j) * (grid.width + 1)];
      row[0] = 0.0;
      for (int i = 0; i < grid.width; ++i) row[i + 1] = row[i] + grid.at(i, j);
    }
  }

  double row_sum(int j, double a, double b) const {
    const double dx = img->dx();
    const double lo_f = (a - img->extent.xmin) / dx - 0.5;
    const double hi_f = (b - img->extent.xmin) / dx - 0.5;
    int lo = static_cast<int>(std::floor(lo_f)) + 1;
    int hi = static_cast<int>(std::ceil(hi_f)) - 1;
    lo = std::max(lo, 0);
    hi = std::min(hi, img->width - 1);
    if (lo > hi) return 0.0;
    const double* row = &prefix[static_cast<size_t>(j) * (img->width + 1)];
    return row[hi + 1] - row[lo];
  }

  double disc_sum(const Disc& d) const {
    double sum = 0.0;
    for (int j = 0; j < img->height; ++j) {
      const double dyj = img->py(j) - d.center.y;
      const double w2 = d.radius * d.radius - dyj * dyj;
      if (w2 <= 0.0) continue;
      const double w = std::sqrt(w2);
      sum += row_sum(j, d.center.x - w, d.center.x + w);
    }
    return sum * img->dx() * img->dy();
  }
};

}  // namespace

DiscSinogram disc_transform(const ImageGrid& img, const std::vector<double>& p_values,
                            const std::vector<double>& phi_values, double r) {
  DiscSinogram s(p_values, phi_values, Quantity::disc_integral, r);
  for (double p : p_values)
    require(p > 0.0, Errc::invalid_argument, "disc_transform: p values must be positive");
  const RowPrefix prefix(img);
  parallel_for(s.n_phi(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j) {
      const double phi = s.phi_values[static_cast<size_t>(j)];
      for (int i = 0; i < s.n_p(); ++i)
        s.at(static_cast<int>(j), i) = prefix.disc_sum(disc_from_sinogram(s.p_values[static_cast<size_t>(i)], phi));
    }
  });
  return s;
}

DiscSinogram extend_sinogram(const DiscSinogram& s, const PhantomSpec* density) {
  s.validate();
  require(s.quantity == Quantity::disc_integral, Errc::invalid_argument,
          "extend_sinogram expects disc_integral data");
  require(s.p_values.front() > 0.0, Errc::invalid_argument, "extend_sinogram expects positive p axis");

  const int np = s.n_p();
  const int nphi = s.n_phi();
  std::vector<int> opposite(static_cast<size_t>(nphi));
  for (int j = 0; j < nphi; ++j) opposite[static_cast<size_t>(j)] = s.opposite_phi_index(j);

  // One-sided p -> 0+ limits per phi.
  std::vector<double> limit(static_cast<size_t>(nphi));
  for (int j = 0; j < nphi; ++j)
    limit[static_cast<size_t>(j)] = density
                                        ? halfplane_integral(*density, s.phi_values[static_cast<size_t>(j)])
                                        : s.at(j, 0);

  std::vector<double> p_ext;
  p_ext.reserve(static_cast<size_t>(2 * np + 1));
  for (int i = np - 1; i >= 0; --i) p_ext.push_back(-s.p_values[static_cast<size_t>(i)]);
  p_ext.push_back(0.0);
  for (int i = 0; i < np; ++i) p_ext.push_back(s.p_values[static_cast<size_t>(i)]);

  DiscSinogram out(p_ext, s.phi_values, Quantity::extended, s.r);
  out.c_values.resize(static_cast<size_t>(nphi));
  for (int j = 0; j < nphi; ++j) {
    const int k = opposite[static_cast<size_t>(j)];
    const double c = 0.5 * (limit[static_cast<size_t>(k)] - limit[static_cast<size_t>(j)]);
    out.c_values[static_cast<size_t>(j)] = c;
    for (int i = 0; i < np; ++i) {
      out.at(j, np + 1 + i) = s.at(j, i) + c;                 // p > 0
      out.at(j, np - 1 - i) = s.at(k, i) - c;                 // p < 0, from phi + pi
    }
    out.at(j, np) = 0.5 * (limit[static_cast<size_t>(j)] + limit[static_cast<size_t>(k)]);
  }
  return out;
}

DiscSinogram derivative_p(const DiscSinogram& s, double h, bool central) {
  s.validate();
  require(s.quantity == Quantity::disc_integral || s.quantity == Quantity::extended,
          Errc::invalid_argument, "derivative_p expects disc_integral or extended data");
  require(s.n_p() >= 2, Errc::invalid_argument, "derivative_p needs at least two p samples");
  require(h > 0.0, Errc::invalid_argument, "derivative_p: h must be positive");
  const double spacing = s.p_spacing();
  require(std::abs(spacing - h) <= 1e-9 * std::max(1.0, h), Errc::invalid_argument,
          "derivative_p: h must match the p grid spacing");

  DiscSinogram out(s.p_values, s.phi_values, Quantity::radon, s.r);
  const int np = s.n_p();
  for (int j = 0; j < s.n_phi(); ++j) {
    if (central) {
      for (int i = 1; i + 1 < np; ++i) out.at(j, i) = -(s.at(j, i + 1) - s.at(j, i - 1)) / (2.0 * h);
      out.at(j, 0) = -(s.at(j, 1) - s.at(j, 0)) / h;
      out.at(j, np - 1) = -(s.at(j, np - 1) - s.at(j, np - 2)) / h;
    } else {
      for (int i = 0; i + 1 < np; ++i) out.at(j, i) = -(s.at(j, i + 1) - s.at(j, i)) / h;
      out.at(j, np - 1) = -(s.at(j, np - 1) - s.at(j, np - 2)) / h;
    }
  }
  return out;
}

double radon_line(const std::function<double(Vec2)>& density, double p, double phi, double step,
                  double half_span) {
  const Vec2 dir = unit_vector(phi);
  const Vec2 perp{-dir.y, dir.x};
  const Vec2 base = dir * p;
  const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(2.0 * half_span / step)));
  const double dt = 2.0 * half_span / static_cast<double>(n);
  double sum = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double t = -half_span + (static_cast<double>(k) + 0.5) * dt;
    sum += density(base + perp * t);
  }
  return sum * dt;
}

DiscSinogram radon_transform(const ImageGrid& img, const std::vector<double>& p_values,
                             const std::vector<double>& phi_values, double step_factor) {
  require(step_factor > 0.0 && step_factor <= 0.5, Errc::invalid_argument,
          "radon_transform: step_factor must lie in (0, 1/2]");
  DiscSinogram s(p_values, phi_values, Quantity::radon, 0.0);
  const double step = step_factor * std::min(img.dx(), img.dy());
  const Vec2 corner_a{std::max(std::abs(img.extent.xmin), std::abs(img.extent.xmax)),
                      std::max(std::abs(img.extent.ymin), std::abs(img.extent.ymax))};
  const double half_span = corner_a.norm();
  auto sampler = [&img](Vec2 u) { return img.bilinear(u.x, u.y); };
  parallel_for(s.n_phi(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j)
      for (int i = 0; i < s.n_p(); ++i)
        s.at(static_cast<int>(j), i) =
            radon_line(sampler, s.p_values[static_cast<size_t>(i)], s.phi_values[static_cast<size_t>(j)], step, half_span);
  });
  return s;
}

ImageGrid inversion_map(const ImageGrid& src, int width, int height, const Extent& extent,
                        double eps0) {
  if (eps0 < 0.0) {
    const double span = std::max(extent.width(), extent.height());
    eps0 = 1e-3 * span;
  }
  ImageGrid out(width, height, extent);
  parallel_for(height, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j) {
      const double y = out.py(static_cast<int>(j));
      for (int i = 0; i < width; ++i) {
        const double x = out.px(i);
        const double r2 = x * x + y * y;
        if (r2 < eps0 * eps0) {
          out.at(i, static_cast<int>(j)) = 0.0;
          continue;
        }
        const double w = 1.0 / (r2 * r2);
        out.at(i, static_cast<int>(j)) = w * src.bilinear(x / r2, y / r2);
      }
    }
  });
  return out;
}

DiscSinogram complete_dataset(const DiscSinogram& s, const ScannerGeometry& geom) {
  s.validate(false);
  require(s.quantity == Quantity::disc_integral, Errc::invalid_argument,
          "complete_dataset expects disc_integral data");
  geom.validate();
  const Vec2 rc = geom.ring_center();
  const double rr = geom.ring_radius();
  constexpr double kTol = 1e-9;

  enum class Kind { covering, disjoint, required };
  auto classify = [&](double p, double phi) {
    const Disc d = disc_from_sinogram(p, phi);
    const double dist = (d.center - rc).norm();
    if (dist + rr < d.radius - kTol) return Kind::covering;
    if (dist > d.radius + rr + kTol) return Kind::disjoint;
    return Kind::required;
  };

  DiscSinogram out = s;
  bool need_mass = false;
  double mass = std::numeric_limits<double>::quiet_NaN();
  double best_p = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.n_phi(); ++j) {
    for (int i = 0; i < s.n_p(); ++i) {
      const double p = s.p_values[static_cast<size_t>(i)];
      const double phi = s.phi_values[static_cast<size_t>(j)];
      const Kind kind = classify(p, phi);
      const double v = s.at(j, i);
      if (kind == Kind::required) {
        if (std::isnan(v)) {
          char buf[128];
          std::snprintf(buf, sizeof(buf),
                        "complete_dataset: required entry missing at p=%.9g, phi=%.9g", p, phi);
          fail(Errc::incomplete_data, buf);
        }
        // Internally tangent entries already carry the total mass.
        const Disc d = disc_from_sinogram(p, phi);
        if ((d.center - rc).norm() + rr <= d.radius + kTol && p < best_p) {
          mass = v;
          best_p = p;
        }
      } else if (kind == Kind::covering) {
        if (std::isnan(v)) {
          need_mass = true;
        } else if (p < best_p) {
          mass = v;
          best_p = p;
        }
      }
    }
  }
  if (need_mass && std::isnan(mass)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "complete_dataset: no covering sample available; include p=%.9g, phi=%.9g",
                  1.0 / geom.r, kPi / 2.0);
    fail(Errc::incomplete_data, buf);
  }
  for (int j = 0; j < s.n_phi(); ++j) {
    for (int i = 0; i < s.n_p(); ++i) {
      if (!std::isnan(out.at(j, i))) continue;
      const Kind kind = classify(s.p_values[static_cast<size_t>(i)], s.phi_values[static_cast<size_t>(j)]);
      out.at(j, i) = kind == Kind::covering ? mass : 0.0;
    }
  }
  out.validate();
  return out;
}

}  // namespace dtomo
