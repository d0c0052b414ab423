#include "core/phantom.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace dtomo {

namespace {

constexpr int kProfileNodes = 48;

// C-infinity transition: 0 for t <= 0, 1 for t >= 1.
double smooth01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double smooth01_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  const double s = a + b;
  return a * b * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / (s * s);
}

// Weight density of the nested-disc decomposition of a smooth component:
// f = density * integral over rho of shell_weight(rho) * indicator(disc of
// radius rho), supported on [radius - width, radius].
double shell_weight(const PhantomComponent& comp, double width, double rho) {
  return smooth01_deriv((comp.radius - rho) / width) / width;
}

template <typename AreaFn>
double component_integral(const PhantomComponent& comp, double width, AreaFn&& area_of_radius) {
  if (width <= 0.0) return comp.density * area_of_radius(comp.radius);
  const double lo = std::max(comp.radius - width, 0.0);
  return comp.density * gauss_legendre_integrate(lo, comp.radius, kProfileNodes, [&](double rho) {
           return shell_weight(comp, width, rho) * area_of_radius(rho);
         });
}

}  // namespace

double PhantomSpec::eval(Vec2 u) const {
  double v = 0.0;
  for (const PhantomComponent& comp : components) {
    const double s = (u - comp.center).norm();
    if (smooth_width <= 0.0) {
      if (s < comp.radius) v += comp.density;
    } else {
      v += comp.density * smooth01((comp.radius - s) / smooth_width);
    }
  }
  return v;
}

double PhantomSpec::total_mass() const {
  double m = 0.0;
  for (const PhantomComponent& comp : components)
    m += component_integral(comp, smooth_width, [](double rho) { return kPi * rho * rho; });
  return m;
}

double PhantomSpec::support_rmin() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const PhantomComponent& comp : components)
    lo = std::min(lo, comp.center.norm() - comp.radius);
  return lo;
}

double PhantomSpec::support_rmax() const {
  double hi = 0.0;
  for (const PhantomComponent& comp : components)
    hi = std::max(hi, comp.center.norm() + comp.radius);
  return hi;
}

PhantomKind phantom_kind_from_string(const std::string& name) {
  if (name == "water_bottle") return PhantomKind::water_bottle;
  if (name == "hollow_tube") return PhantomKind::hollow_tube;
  if (name == "custom") return PhantomKind::custom;
  fail(Errc::invalid_argument, "unknown phantom kind: " + name);
}

void validate_phantom(const PhantomSpec& spec, const ScannerGeometry& geom) {
  require(!spec.components.empty(), Errc::invalid_phantom, "phantom has no components");
  require(spec.smooth_width >= 0.0, Errc::invalid_phantom, "smooth_width must be non-negative");
  const Vec2 rc = geom.ring_center();
  const double rr = geom.ring_radius();
  for (const PhantomComponent& comp : spec.components) {
    require(comp.radius > 0.0, Errc::invalid_phantom, "component radius must be positive");
    require(std::isfinite(comp.center.x) && std::isfinite(comp.center.y), Errc::invalid_phantom,
            "component center must be finite");
    require((comp.center - rc).norm() + comp.radius <= rr + 1e-12, Errc::invalid_phantom,
            "component disc extends outside the detector ring");
    require(comp.center.norm() - comp.radius >= 1.0 - 1e-12, Errc::invalid_phantom,
            "component disc violates the unit clearance from the source");
  }
}

PhantomSpec make_water_bottle(const ScannerGeometry& geom, const PhantomParams& params) {
  PhantomSpec spec;
  spec.r = geom.r;
  spec.smooth_width = params.smooth_width;
  PhantomComponent comp;
  comp.center = params.has_center ? params.center : geom.ring_center();
  comp.radius = params.has_radius ? params.radius : (geom.r - 1.0) / 4.0;
  comp.density = params.density;
  spec.components.push_back(comp);
  validate_phantom(spec, geom);
  return spec;
}

PhantomSpec make_hollow_tube(const ScannerGeometry& geom, const PhantomParams& params) {
  PhantomSpec spec;
  spec.r = geom.r;
  spec.smooth_width = params.smooth_width;
  const Vec2 center = params.has_center ? params.center : geom.ring_center();
  const double outer = params.has_radius ? params.radius : (geom.r - 1.0) / 4.0;
  spec.components.push_back({center, outer, params.density});
  spec.components.push_back({center, outer / 2.0, -params.density});
  validate_phantom(spec, geom);
  return spec;
}

PhantomSpec make_custom(const ScannerGeometry& geom, std::vector<PhantomComponent> components,
                        double smooth_width) {
  PhantomSpec spec;
  spec.r = geom.r;
  spec.smooth_width = smooth_width;
  spec.components = std::move(components);
  validate_phantom(spec, geom);
  return spec;
}

Extent ring_extent(const ScannerGeometry& geom) {
  const Vec2 c = geom.ring_center();
  const double rr = geom.ring_radius();
  return {c.x - rr, c.x + rr, c.y - rr, c.y + rr};
}

ImageGrid rasterize(const PhantomSpec& spec, int width, int height, const Extent& extent) {
  ImageGrid img(width, height, extent);
  parallel_for(height, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j) {
      const double y = img.py(static_cast<int>(j));
      for (int i = 0; i < width; ++i) img.at(i, static_cast<int>(j)) = spec.eval({img.px(i), y});
    }
  });
  return img;
}

double analytic_disc_integral(const PhantomSpec& spec, double p, double phi) {
  require(p > 0.0, Errc::invalid_argument, "analytic_disc_integral: p must be positive");
  const Disc disc = disc_from_sinogram(p, phi);
  double total = 0.0;
  for (const PhantomComponent& comp : spec.components)
    total += component_integral(comp, spec.smooth_width, [&](double rho) {
      return lens_area(comp.center, rho, disc.center, disc.radius);
    });
  return total;
}

double halfplane_integral(const PhantomSpec& spec, double phi) {
  double total = 0.0;
  for (const PhantomComponent& comp : spec.components)
    total += component_integral(comp, spec.smooth_width, [&](double rho) {
      return halfplane_disc_area(comp.center, rho, phi);
    });
  return total;
}

PhantomSpec rotated(const PhantomSpec& spec, double angle, Vec2 about) {
  PhantomSpec out = spec;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (PhantomComponent& comp : out.components) {
    const Vec2 d = comp.center - about;
    comp.center = about + Vec2{c * d.x - s * d.y, s * d.x + c * d.y};
  }
  return out;
}

void write_phantom(const PhantomSpec& spec, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  char buf[256];
  std::snprintf(buf, sizeof(buf), "r=%.17g\nsmooth_width=%.17g\n", spec.r, spec.smooth_width);
  out << buf;
  for (const PhantomComponent& comp : spec.components) {
    std::snprintf(buf, sizeof(buf), "component=%.17g,%.17g,%.17g,%.17g\n", comp.center.x,
                  comp.center.y, comp.radius, comp.density);
    out << buf;
  }
  require(out.good(), Errc::io_error, "failed writing " + path);
}

PhantomSpec read_phantom(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);
  PhantomSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, Errc::io_error, path + ": expected key=value, got: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "r") {
      spec.r = std::stod(value);
    } else if (key == "smooth_width") {
      spec.smooth_width = std::stod(value);
    } else if (key == "component") {
      PhantomComponent comp;
      if (std::sscanf(value.c_str(), "%lf,%lf,%lf,%lf", &comp.center.x, &comp.center.y, &comp.radius,
                      &comp.density) != 4)
        fail(Errc::io_error, path + ": malformed component line: " + line);
      spec.components.push_back(comp);
    } else {
      fail(Errc::io_error, path + ": unknown phantom key: " + key);
    }
  }
  require(!spec.components.empty(), Errc::io_error, path + ": phantom file has no components");
  return spec;
}

}  // namespace dtomo
