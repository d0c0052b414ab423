#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/common.hpp"

namespace dtomo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Disc {
  Vec2 center;
  double radius = 0.0;

  bool contains(Vec2 u) const { return (u - center).norm2() < radius * radius; }
};

// Disc whose boundary passes through the origin, indexed by the sinogram
// coordinate p = 1/diameter and the center direction phi.
Disc disc_from_sinogram(double p, double phi);

// Detector ring x^2 + (y - (r+1)/2)^2 = ((r-1)/2)^2 with the source at the
// origin; the near point of the ring sits at distance 1 from the source.
struct ScannerGeometry {
  double r = 6.75;
  std::vector<double> detector_angles;  // strictly increasing, in [0, 2pi)
  int n_views = 360;
  double tunnel_gap = 0.0;

  Vec2 ring_center() const { return {0.0, (r + 1.0) / 2.0}; }
  double ring_radius() const { return (r - 1.0) / 2.0; }
  double source_path_radius() const { return (r + 1.0) / 2.0; }
  double tunnel_radius() const { return ring_radius() - tunnel_gap; }
  Disc ring_disc() const { return {ring_center(), ring_radius()}; }

  void validate() const;
};

ScannerGeometry make_geometry(double r, int n_detectors, double tunnel_gap = 0.0);

struct ToricQuad {
  Disc base;
  Disc reflected1;
  Disc reflected2;
  Vec2 detector1;
  Vec2 detector2;
};

// Area of intersection of two discs. Tangency within 1e-12 of the center
// distance snaps to the degenerate value.
double lens_area(Vec2 c1, double r1, Vec2 c2, double r2);

// Area of disc(center, radius) intersected with the half plane {x . Phi > 0},
// the p -> 0+ limit of the growing disc family.
double halfplane_disc_area(Vec2 center, double radius, double phi);

Vec2 detector_position(const ScannerGeometry& geom, double theta);

// Sinogram coordinate of the disc through the origin and the detector at
// ring angle theta, aimed toward phi: p = (d . Phi)/|d|^2. Requires the
// chord condition d . Phi > 0.
double sample_p(const ScannerGeometry& geom, double theta, double phi);

// Area of R_{p,phi} = D_{1/p,phi} intersected with the ring interior.
double scatter_region_area(const ScannerGeometry& geom, double p, double phi);

// Both intersection points of two circles, or nullopt if they meet in
// fewer than two points.
std::optional<std::pair<Vec2, Vec2>> circle_intersections(Vec2 c1, double r1, Vec2 c2, double r2);

// Mirror image of a disc across the chord from the origin toward chord_dir.
Disc reflect_across_chord(const Disc& d, Vec2 chord_dir);

// Base disc plus its reflections across the two origin-detector chords fixed
// by the disc's ring intersections. Throws Errc::no_disc when the boundary
// does not meet the ring in two points.
ToricQuad make_toric_quad(const ScannerGeometry& geom, const Disc& base);

// Midpoint-rule areas over the tunnel bounding box of D&T and the four toric
// overlaps T1..T4 with T, all counted on one grid of cells^2 centers.
struct ToricAreas {
  double base = 0.0;
  double t[4] = {0.0, 0.0, 0.0, 0.0};
};
ToricAreas toric_quad_areas(const ToricQuad& quad, const Disc& tunnel, int cells);

struct RttDiscResult {
  double p_diam = 0.0;
  double phi = 0.0;
  bool skipped = false;
  double area_base = 0.0;
  double area_t[4] = {0.0, 0.0, 0.0, 0.0};
  double min_abs_diff = 0.0;
};

struct RttReport {
  int n_p = 0;
  int n_phi = 0;
  int quadrature_cells = 0;
  int n_evaluated = 0;
  int n_skipped = 0;
  double tunnel_area = 0.0;
  double max_min_diff = 0.0;
  double argmax_p_diam = 0.0;
  double argmax_phi = 0.0;
  std::vector<RttDiscResult> discs;  // filled when keep_rows is true

  std::string text() const;
};

// Sweeps n_p disc diameters across the tunnel span and n_phi directions,
// comparing the disc-tunnel overlap area against the four toric-section
// overlaps built from the ToricQuad, all under one midpoint grid quadrature
// over the tunnel bounding box.
RttReport validate_rtt80(const ScannerGeometry& geom, int n_p, int n_phi, int quadrature_cells,
                         bool keep_rows = false);

void write_rtt_csv(const RttReport& report, const std::string& path);

}  // namespace dtomo
