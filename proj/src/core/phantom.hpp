#pragma once

#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/image.hpp"

namespace dtomo {

struct PhantomComponent {
  Vec2 center;
  double radius = 0.0;
  double density = 0.0;  // negative carves holes
};

// Signed union of uniform discs. A positive smooth_width replaces each disc
// indicator by a radial C-infinity profile falling from 1 at radius-width to
// 0 at the radius, so the support stays inside the component discs.
struct PhantomSpec {
  std::vector<PhantomComponent> components;
  double smooth_width = 0.0;
  double r = 6.75;  // ring parameter the spec was validated against

  double eval(Vec2 u) const;
  double total_mass() const;
  // Smallest/largest distance from the origin over the support bounds.
  double support_rmin() const;
  double support_rmax() const;
};

enum class PhantomKind { water_bottle, hollow_tube, custom };

PhantomKind phantom_kind_from_string(const std::string& name);

struct PhantomParams {
  bool has_center = false;
  Vec2 center;
  bool has_radius = false;
  double radius = 0.0;
  double density = 1.0;
  double smooth_width = 0.0;
};

// Disc lying inside the ring with density 1; defaults to center at the ring
// center and radius (r-1)/4.
PhantomSpec make_water_bottle(const ScannerGeometry& geom, const PhantomParams& params = {});
// Concentric disc pair (+1 outer, -1 inner), radii (r-1)/4 and (r-1)/8.
PhantomSpec make_hollow_tube(const ScannerGeometry& geom, const PhantomParams& params = {});
PhantomSpec make_custom(const ScannerGeometry& geom, std::vector<PhantomComponent> components,
                        double smooth_width = 0.0);

// Support must stay inside the ring disc and keep unit clearance from the
// origin; violations raise Errc::invalid_phantom.
void validate_phantom(const PhantomSpec& spec, const ScannerGeometry& geom);

ImageGrid rasterize(const PhantomSpec& spec, int width, int height, const Extent& extent);

// Default raster frame: bounding box of the ring disc.
Extent ring_extent(const ScannerGeometry& geom);

// Integral of the phantom over the disc D_{1/p,phi}; exact lens areas for
// sharp components, Gauss-Legendre superposition of lens areas for smooth
// profiles.
double analytic_disc_integral(const PhantomSpec& spec, double p, double phi);

// Integral over the half plane {x . Phi > 0}: the p -> 0+ disc limit.
double halfplane_integral(const PhantomSpec& spec, double phi);

// Component centers rotated by angle about a pivot.
PhantomSpec rotated(const PhantomSpec& spec, double angle, Vec2 about);

void write_phantom(const PhantomSpec& spec, const std::string& path);
PhantomSpec read_phantom(const std::string& path);

}  // namespace dtomo
