#include "core/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>

#include "core/parallel.hpp"

namespace dtomo {

namespace {
constexpr double kTangencyTol = 1e-12;

double clamp_acos_arg(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }
}  // namespace

Disc disc_from_sinogram(double p, double phi) {
  require(p > 0.0, Errc::invalid_argument, "sinogram coordinate p must be positive");
  const double radius = 0.5 / p;
  return {unit_vector(phi) * radius, radius};
}

void ScannerGeometry::validate() const {
  require(r > 1.0, Errc::invalid_argument, "ring parameter r must exceed 1");
  require(tunnel_gap >= 0.0, Errc::invalid_argument, "tunnel_gap must be non-negative");
  require(n_views >= 1, Errc::invalid_argument, "n_views must be positive");
  for (size_t i = 0; i < detector_angles.size(); ++i) {
    double a = detector_angles[i];
    require(a >= 0.0 && a < kTwoPi, Errc::invalid_argument, "detector angle outside [0, 2pi)");
    if (i > 0)
      require(a > detector_angles[i - 1], Errc::invalid_argument,
              "detector angles must be strictly increasing");
  }
}

ScannerGeometry make_geometry(double r, int n_detectors, double tunnel_gap) {
  ScannerGeometry g;
  g.r = r;
  g.tunnel_gap = tunnel_gap;
  g.detector_angles.reserve(static_cast<size_t>(std::max(0, n_detectors)));
  for (int j = 0; j < n_detectors; ++j)
    g.detector_angles.push_back(kTwoPi * static_cast<double>(j) / n_detectors);
  g.validate();
  return g;
}

double lens_area(Vec2 c1, double r1, Vec2 c2, double r2) {
  require(r1 > 0.0 && r2 > 0.0, Errc::invalid_argument, "lens_area: radii must be positive");
  // Canonical argument order makes the evaluation exactly symmetric.
  if (r1 > r2) {
    std::swap(c1, c2);
    std::swap(r1, r2);
  }
  const double d = (c1 - c2).norm();
  const double rmin = std::min(r1, r2);
  if (d >= r1 + r2 - kTangencyTol) return 0.0;
  if (d <= std::abs(r1 - r2) + kTangencyTol) return kPi * rmin * rmin;
  const double d2 = d * d;
  const double a1 = r1 * r1 * std::acos(clamp_acos_arg((d2 + r1 * r1 - r2 * r2) / (2.0 * d * r1)));
  const double a2 = r2 * r2 * std::acos(clamp_acos_arg((d2 + r2 * r2 - r1 * r1) / (2.0 * d * r2)));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return a1 + a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

double halfplane_disc_area(Vec2 center, double radius, double phi) {
  require(radius > 0.0, Errc::invalid_argument, "halfplane_disc_area: radius must be positive");
  const double t = center.dot(unit_vector(phi));  // signed distance to the boundary line
  if (t >= radius) return kPi * radius * radius;
  if (t <= -radius) return 0.0;
  return radius * radius * std::acos(clamp_acos_arg(-t / radius)) +
         t * std::sqrt(std::max(0.0, radius * radius - t * t));
}

Vec2 detector_position(const ScannerGeometry& geom, double theta) {
  const double rr = geom.ring_radius();
  const Vec2 c = geom.ring_center();
  return {rr * std::cos(theta), c.y + rr * std::sin(theta)};
}

double sample_p(const ScannerGeometry& geom, double theta, double phi) {
  const Vec2 d = detector_position(geom, theta);
  const double dot = d.dot(unit_vector(phi));
  require(dot > 0.0, Errc::no_disc, "no disc through the origin toward phi reaches this detector");
  return dot / d.norm2();
}

double scatter_region_area(const ScannerGeometry& geom, double p, double phi) {
  require(p > 0.0, Errc::invalid_argument, "scatter_region_area: p must be positive");
  const Disc d = disc_from_sinogram(p, phi);
  return lens_area(d.center, d.radius, geom.ring_center(), geom.ring_radius());
}

std::optional<std::pair<Vec2, Vec2>> circle_intersections(Vec2 c1, double r1, Vec2 c2, double r2) {
  const Vec2 delta = c2 - c1;
  const double d = delta.norm();
  if (d < kTangencyTol) return std::nullopt;
  if (d >= r1 + r2 - kTangencyTol) return std::nullopt;
  if (d <= std::abs(r1 - r2) + kTangencyTol) return std::nullopt;
  const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h2 = r1 * r1 - a * a;
  if (h2 <= 0.0) return std::nullopt;
  const double h = std::sqrt(h2);
  const Vec2 axis = delta * (1.0 / d);
  const Vec2 mid = c1 + axis * a;
  const Vec2 perp{-axis.y, axis.x};
  return std::make_pair(mid + perp * h, mid - perp * h);
}

Disc reflect_across_chord(const Disc& d, Vec2 chord_dir) {
  const double n2 = chord_dir.norm2();
  require(n2 > 0.0, Errc::invalid_argument, "reflect_across_chord: zero direction");
  const Vec2 u = chord_dir * (1.0 / std::sqrt(n2));
  const double proj = d.center.dot(u);
  return {u * (2.0 * proj) - d.center, d.radius};
}

ToricQuad make_toric_quad(const ScannerGeometry& geom, const Disc& base) {
  auto hits = circle_intersections(base.center, base.radius, geom.ring_center(), geom.ring_radius());
  require(hits.has_value(), Errc::no_disc, "disc boundary does not meet the detector ring in two points");
  ToricQuad q;
  q.base = base;
  q.detector1 = hits->first;
  q.detector2 = hits->second;
  q.reflected1 = reflect_across_chord(base, q.detector1);
  q.reflected2 = reflect_across_chord(base, q.detector2);
  return q;
}

namespace {

// Index range of cell centers xmin + (i+1/2)*dx lying strictly inside (a, b),
// clipped to [0, cells). Empty ranges are encoded lo > hi.
struct IndexRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::int64_t count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

IndexRange interval_cells(double a, double b, double xmin, double dx, std::int64_t cells) {
  IndexRange r;
  if (!(b > a)) return r;
  const double lo_f = (a - xmin) / dx - 0.5;
  const double hi_f = (b - xmin) / dx - 0.5;
  r.lo = static_cast<std::int64_t>(std::floor(lo_f)) + 1;
  r.hi = static_cast<std::int64_t>(std::ceil(hi_f)) - 1;
  if (r.lo < 0) r.lo = 0;
  if (r.hi > cells - 1) r.hi = cells - 1;
  return r;
}

IndexRange intersect(IndexRange a, IndexRange b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Row slab of a disc: x-interval of cell centers at height y, or empty.
IndexRange disc_row_cells(const Disc& d, double y, double xmin, double dx, std::int64_t cells) {
  const double dy = y - d.center.y;
  const double w2 = d.radius * d.radius - dy * dy;
  if (w2 <= 0.0) return {};
  const double w = std::sqrt(w2);
  return interval_cells(d.center.x - w, d.center.x + w, xmin, dx, cells);
}

struct QuadCounts {
  std::int64_t base = 0;   // D and T
  std::int64_t t[4] = {0, 0, 0, 0};
};

// Midpoint-rule cell counts over the tunnel bounding box for the five regions
// D&T, (D1&D)&T, (D2&D)&T, (D1|D)&T, (D2|D)&T. All five use the same grid, so
// the differences reduce to exact subset counts.
QuadCounts toric_quad_counts(const ToricQuad& q, const Disc& tunnel, std::int64_t cells) {
  const double xmin = tunnel.center.x - tunnel.radius;
  const double ymin = tunnel.center.y - tunnel.radius;
  const double step = 2.0 * tunnel.radius / static_cast<double>(cells);
  QuadCounts counts;
  for (std::int64_t j = 0; j < cells; ++j) {
    const double y = ymin + (static_cast<double>(j) + 0.5) * step;
    const IndexRange it = disc_row_cells(tunnel, y, xmin, step, cells);
    if (it.count() == 0) continue;
    const IndexRange id = intersect(it, disc_row_cells(q.base, y, xmin, step, cells));
    const IndexRange i1 = intersect(it, disc_row_cells(q.reflected1, y, xmin, step, cells));
    const IndexRange i2 = intersect(it, disc_row_cells(q.reflected2, y, xmin, step, cells));
    const std::int64_t cd = id.count();
    const std::int64_t c1 = i1.count();
    const std::int64_t c2 = i2.count();
    const std::int64_t cd1 = intersect(id, i1).count();
    const std::int64_t cd2 = intersect(id, i2).count();
    counts.base += cd;
    counts.t[0] += cd1;            // D1 & D
    counts.t[1] += cd2;            // D2 & D
    counts.t[2] += cd + c1 - cd1;  // D1 | D
    counts.t[3] += cd + c2 - cd2;  // D2 | D
  }
  return counts;
}

}  // namespace

ToricAreas toric_quad_areas(const ToricQuad& quad, const Disc& tunnel, int cells) {
  require(cells >= 2, Errc::invalid_argument, "toric_quad_areas: cells too small");
  const QuadCounts counts = toric_quad_counts(quad, tunnel, cells);
  const double step = 2.0 * tunnel.radius / cells;
  const double cell_area = step * step;
  ToricAreas areas;
  areas.base = static_cast<double>(counts.base) * cell_area;
  for (int t = 0; t < 4; ++t) areas.t[t] = static_cast<double>(counts.t[t]) * cell_area;
  return areas;
}

RttReport validate_rtt80(const ScannerGeometry& geom, int n_p, int n_phi, int quadrature_cells,
                         bool keep_rows) {
  geom.validate();
  require(n_p >= 2 && n_phi >= 1, Errc::invalid_argument, "validate_rtt80: need n_p >= 2, n_phi >= 1");
  require(quadrature_cells >= 2, Errc::invalid_argument, "validate_rtt80: quadrature_cells too small");
  require(geom.tunnel_radius() > 0.0, Errc::invalid_argument, "validate_rtt80: geometry has no tunnel");

  const Disc tunnel{geom.ring_center(), geom.tunnel_radius()};
  const double cell_area =
      (2.0 * tunnel.radius / quadrature_cells) * (2.0 * tunnel.radius / quadrature_cells);
  const double diam_lo = tunnel.center.norm() - tunnel.radius;
  const double diam_hi = tunnel.center.norm() + tunnel.radius;

  const std::int64_t total = static_cast<std::int64_t>(n_p) * n_phi;
  std::vector<RttDiscResult> rows(static_cast<size_t>(total));
  parallel_for(total, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k = lo; k < hi; ++k) {
      const int i = static_cast<int>(k / n_phi);
      const int j = static_cast<int>(k % n_phi);
      RttDiscResult& row = rows[static_cast<size_t>(k)];
      row.p_diam = diam_lo + (diam_hi - diam_lo) * static_cast<double>(i) / (n_p - 1);
      row.phi = kTwoPi * static_cast<double>(j + 1) / n_phi;
      const Disc base{unit_vector(row.phi) * (row.p_diam / 2.0), row.p_diam / 2.0};
      ToricQuad quad;
      try {
        quad = make_toric_quad(geom, base);
      } catch (const Error&) {
        row.skipped = true;
        continue;
      }
      const ToricAreas areas = toric_quad_areas(quad, tunnel, quadrature_cells);
      row.area_base = areas.base;
      double best = std::numeric_limits<double>::infinity();
      for (int t = 0; t < 4; ++t) {
        row.area_t[t] = areas.t[t];
        best = std::min(best, std::abs(areas.base - areas.t[t]));
      }
      row.min_abs_diff = best;
    }
  });

  RttReport report;
  report.n_p = n_p;
  report.n_phi = n_phi;
  report.quadrature_cells = quadrature_cells;
  report.tunnel_area = kPi * tunnel.radius * tunnel.radius;
  for (const RttDiscResult& row : rows) {
    if (row.skipped) {
      ++report.n_skipped;
      continue;
    }
    ++report.n_evaluated;
    if (row.min_abs_diff > report.max_min_diff) {
      report.max_min_diff = row.min_abs_diff;
      report.argmax_p_diam = row.p_diam;
      report.argmax_phi = row.phi;
    }
  }
  if (keep_rows) report.discs = std::move(rows);
  return report;
}

std::string RttReport::text() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "rtt80 area study\n"
                "discs sampled:      %d x %d\n"
                "quadrature cells:   %d^2\n"
                "evaluated:          %d\n"
                "skipped (no ring intersection): %d\n"
                "tunnel area:        %.9g\n"
                "max over discs of min |A(D&T) - A(Ti&T)|: %.9g\n"
                "  relative to tunnel area:                %.9g\n"
                "  at diameter %.9g, phi %.9g\n",
                n_p, n_phi, quadrature_cells, n_evaluated, n_skipped, tunnel_area, max_min_diff,
                tunnel_area > 0 ? max_min_diff / tunnel_area : 0.0, argmax_p_diam, argmax_phi);
  return buf;
}

void write_rtt_csv(const RttReport& report, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  out << "p_diam,phi,area_base,area_t1,area_t2,area_t3,area_t4,min_abs_diff\n";
  char buf[512];
  for (const RttDiscResult& row : report.discs) {
    if (row.skipped) continue;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.p_diam,
                  row.phi, row.area_base, row.area_t[0], row.area_t[1], row.area_t[2], row.area_t[3],
                  row.min_abs_diff);
    out << buf;
  }
  require(out.good(), Errc::io_error, "failed writing " + path);
}

}  // namespace dtomo
