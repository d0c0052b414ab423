#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "core/phantom.hpp"
#include "core/transform.hpp"

using namespace dtomo;

namespace {
const ScannerGeometry kGeom = make_geometry(6.75, 360);
}

TEST_CASE("water bottle defaults") {
  const PhantomSpec wb = make_water_bottle(kGeom);
  REQUIRE(wb.components.size() == 1);
  CHECK(wb.components[0].center.x == doctest::Approx(0.0));
  CHECK(wb.components[0].center.y == doctest::Approx(3.875));
  CHECK(wb.components[0].radius == doctest::Approx(1.4375));
  CHECK(wb.components[0].density == doctest::Approx(1.0));
  CHECK(wb.total_mass() == doctest::Approx(kPi * 1.4375 * 1.4375).epsilon(1e-12));
}

TEST_CASE("hollow tube defaults") {
  const PhantomSpec ht = make_hollow_tube(kGeom);
  REQUIRE(ht.components.size() == 2);
  CHECK(ht.components[0].radius == doctest::Approx(1.4375));
  CHECK(ht.components[1].radius == doctest::Approx(0.71875));
  CHECK(ht.components[0].density == doctest::Approx(1.0));
  CHECK(ht.components[1].density == doctest::Approx(-1.0));
  // annulus of ones, zero core
  CHECK(ht.eval({0.0, 3.875}) == 0.0);
  CHECK(ht.eval({0.0, 3.875 + 1.0}) == 1.0);
}

TEST_CASE("support violations") {
  // disc touching the origin
  CHECK_THROWS_AS(make_custom(kGeom, {{{0.0, 1.2}, 1.2, 1.0}}), Error);
  // disc leaving the ring
  CHECK_THROWS_AS(make_custom(kGeom, {{{0.0, 6.5}, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(make_custom(kGeom, {}), Error);
  // valid custom
  CHECK_NOTHROW(make_custom(kGeom, {{{0.5, 3.0}, 0.8, 2.0}}));
}

TEST_CASE("rasterize: empty, signed sum, area counting") {
  const Extent frame = ring_extent(kGeom);
  PhantomSpec empty;
  empty.components.push_back({{0.0, 3.875}, 1.0, 0.0});
  const ImageGrid zero = rasterize(empty, 64, 64, frame);
  CHECK(zero.min_value() == 0.0);
  CHECK(zero.max_value() == 0.0);

  const PhantomSpec wb = make_water_bottle(kGeom);
  const ImageGrid img = rasterize(wb, 256, 256, {-6.75, 6.75, -6.75, 6.75});
  std::int64_t ones = 0;
  for (double v : img.values) ones += v == 1.0;
  const double measured = static_cast<double>(ones) * img.dx() * img.dy();
  CHECK(measured == doctest::Approx(kPi * 1.4375 * 1.4375).epsilon(0.02));

  const PhantomSpec ht = make_hollow_tube(kGeom);
  const ImageGrid tube = rasterize(ht, 128, 128, frame);
  for (double v : tube.values) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("analytic_disc_integral: containment, disjoint, lens composition") {
  const PhantomSpec wb = make_water_bottle(kGeom);
  // discs through the origin contain the phantom once p is small and the
  // aim satisfies sin(phi) >= radius/|center|; then the integral is the mass
  for (double phi : {0.5, kPi / 2, 2.5})
    CHECK(analytic_disc_integral(wb, 1e-4, phi) == doctest::Approx(wb.total_mass()).epsilon(1e-9));
  // aimed away
  CHECK(analytic_disc_integral(wb, 0.5, -kPi / 2) == 0.0);
  // composes with lens_area
  const Disc d = disc_from_sinogram(0.2, kPi / 2);
  CHECK(analytic_disc_integral(wb, 0.2, kPi / 2) ==
        doctest::Approx(lens_area({0.0, 3.875}, 1.4375, d.center, d.radius)).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_disc_integral(wb, -0.1, 0.0), Error);
}

TEST_CASE("analytic_disc_integral agrees with raster quadrature") {
  const PhantomSpec wb = make_water_bottle(kGeom);
  const ImageGrid img = rasterize(wb, 512, 512, ring_extent(kGeom));
  const DiscSinogram quad = disc_transform(img, default_p_grid(40), default_phi_grid(16), kGeom.r);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> ip(0, 39), jphi(0, 15);
  int significant = 0;
  for (int k = 0; k < 50; ++k) {
    const int i = ip(rng), j = jphi(rng);
    const double exact = analytic_disc_integral(wb, quad.p_values[i], quad.phi_values[j]);
    const double approx = quad.at(j, i);
    if (exact > 0.05 * wb.total_mass()) {
      CHECK(approx == doctest::Approx(exact).epsilon(0.01));
      ++significant;
    } else {
      CHECK(std::abs(approx - exact) < 0.01 * wb.total_mass());
    }
  }
  CHECK(significant > 5);
}

TEST_CASE("disc integrals are non-increasing in p toward the phantom") {
  const PhantomSpec wb = make_water_bottle(kGeom);
  double prev = wb.total_mass() + 1.0;
  for (double p : default_p_grid(100)) {
    const double v = analytic_disc_integral(wb, p, kPi / 2);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("mollified phantom: profile, mass, nested-disc integral consistency") {
  PhantomParams params;
  params.smooth_width = 0.4;
  const PhantomSpec wb = make_water_bottle(kGeom, params);
  const Vec2 c = wb.components[0].center;
  const double a = wb.components[0].radius;
  // profile: 1 deep inside, 0 outside, between on the shell
  CHECK(wb.eval(c) == 1.0);
  CHECK(wb.eval({c.x, c.y + a}) == 0.0);
  const double mid = wb.eval({c.x, c.y + a - 0.2});
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // mass matches the raster integral
  const ImageGrid img = rasterize(wb, 1024, 1024, ring_extent(kGeom));
  double raster_mass = 0.0;
  for (double v : img.values) raster_mass += v;
  raster_mass *= img.dx() * img.dy();
  CHECK(wb.total_mass() == doctest::Approx(raster_mass).epsilon(1e-3));
  // disc integral matches raster quadrature
  const double p = 0.22, phi = kPi / 2;
  const DiscSinogram quad = disc_transform(img, {p}, {phi}, kGeom.r);
  CHECK(analytic_disc_integral(wb, p, phi) == doctest::Approx(quad.at(0, 0)).epsilon(5e-3));
}

TEST_CASE("halfplane_integral limits") {
  const PhantomSpec wb = make_water_bottle(kGeom);
  // phantom fully above the x axis
  CHECK(halfplane_integral(wb, kPi / 2) == doctest::Approx(wb.total_mass()).epsilon(1e-12));
  CHECK(halfplane_integral(wb, -kPi / 2) == 0.0);
  // vertical split through the center: half the mass
  CHECK(halfplane_integral(wb, 0.0) == doctest::Approx(wb.total_mass() / 2).epsilon(1e-12));
  // tiny-p disc integral converges to the halfplane value
  const double phi = 1.234;
  CHECK(analytic_disc_integral(wb, 1e-6, phi) ==
        doctest::Approx(halfplane_integral(wb, phi)).epsilon(1e-4));
}

TEST_CASE("rotated phantom spins component centers about the pivot") {
  const PhantomSpec wb = make_water_bottle(kGeom);
  const Vec2 pivot = kGeom.ring_center();
  const PhantomSpec spun = rotated(wb, 1.0, pivot);
  // concentric with the pivot: unchanged
  CHECK(spun.components[0].center.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spun.components[0].center.y == doctest::Approx(3.875).epsilon(1e-12));
  PhantomParams off;
  off.has_center = true;
  off.center = {1.0, 3.875};
  off.has_radius = true;
  off.radius = 0.5;
  const PhantomSpec p2 = make_water_bottle(kGeom, off);
  const PhantomSpec s2 = rotated(p2, kPi / 2, pivot);
  CHECK(s2.components[0].center.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s2.components[0].center.y == doctest::Approx(4.875).epsilon(1e-12));
}

TEST_CASE("phantom file round trip") {
  const PhantomSpec ht = make_hollow_tube(kGeom);
  const std::string path = "test_phantom_roundtrip.phm";
  write_phantom(ht, path);
  const PhantomSpec back = read_phantom(path);
  REQUIRE(back.components.size() == ht.components.size());
  for (size_t k = 0; k < ht.components.size(); ++k) {
    CHECK(back.components[k].center.x == ht.components[k].center.x);
    CHECK(back.components[k].center.y == ht.components[k].center.y);
    CHECK(back.components[k].radius == ht.components[k].radius);
    CHECK(back.components[k].density == ht.components[k].density);
  }
  CHECK(back.r == ht.r);
  std::remove(path.c_str());
}
