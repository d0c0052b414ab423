#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "core/geometry.hpp"

using namespace dtomo;

namespace {

// Rejection-sampling oracle for the lens area over the bounding box of the
// intersection region.
struct McEstimate {
  double area = 0.0;
  double stderr_ = 0.0;
};

McEstimate mc_lens_area(Vec2 c1, double r1, Vec2 c2, double r2, std::int64_t samples,
                        std::uint64_t seed) {
  const double xmin = std::max(c1.x - r1, c2.x - r2);
  const double xmax = std::min(c1.x + r1, c2.x + r2);
  const double ymin = std::max(c1.y - r1, c2.y - r2);
  const double ymax = std::min(c1.y + r1, c2.y + r2);
  if (xmax <= xmin || ymax <= ymin) return {0.0, 0.0};
  const double box = (xmax - xmin) * (ymax - ymin);
  std::uint64_t state = seed ? seed : 1;
  auto next_unit = [&state] {
    // xorshift64*
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return static_cast<double>((state * 0x2545F4914F6CDD1DULL) >> 11) * 0x1.0p-53;
  };
  std::int64_t hits = 0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const Vec2 u{xmin + (xmax - xmin) * next_unit(), ymin + (ymax - ymin) * next_unit()};
    const bool in1 = (u - c1).norm2() < r1 * r1;
    const bool in2 = (u - c2).norm2() < r2 * r2;
    if (in1 && in2) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  McEstimate est;
  est.area = box * frac;
  est.stderr_ = box * std::sqrt(std::max(frac * (1.0 - frac), 1e-12) / static_cast<double>(samples));
  return est;
}

}  // namespace

TEST_CASE("lens_area spot values") {
  CHECK(lens_area({0, 0}, 1.0, {0, 0}, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(lens_area({0, 0}, 1.0, {3, 0}, 1.0) == 0.0);
  // centers one apart, unit radii: 2 acos(1/2) - sqrt(3)/2
  CHECK(lens_area({0, 0}, 1.0, {1, 0}, 1.0) ==
        doctest::Approx(1.2283696986087568).epsilon(1e-12));
  CHECK_THROWS_AS(lens_area({0, 0}, -1.0, {1, 0}, 1.0), Error);
  CHECK_THROWS_AS(lens_area({0, 0}, 1.0, {1, 0}, 0.0), Error);
}

TEST_CASE("lens_area symmetry, bounds, tangency") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-3.0, 3.0), rad(0.1, 2.5);
  for (int k = 0; k < 200; ++k) {
    const Vec2 a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    const double r1 = rad(rng), r2 = rad(rng);
    const double v = lens_area(a, r1, b, r2);
    CHECK(v == lens_area(b, r2, a, r1));
    CHECK(v >= 0.0);
    CHECK(v <= kPi * std::min(r1, r2) * std::min(r1, r2) + 1e-12);
  }
  // tangency snaps instead of NaN
  CHECK(lens_area({0, 0}, 1.0, {2.0, 0}, 1.0) == 0.0);
  CHECK(lens_area({0, 0}, 2.0, {1.0, 0}, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::isfinite(lens_area({0, 0}, 1.0, {2.0 - 5e-13, 0}, 1.0)));
}

TEST_CASE("lens_area is smooth in center distance away from tangency") {
  const double r1 = 1.3, r2 = 0.9, eps = 1e-6;
  for (double d : {0.5, 0.9, 1.4, 1.9}) {
    const double f0 = lens_area({0, 0}, r1, {d - eps, 0}, r2);
    const double f1 = lens_area({0, 0}, r1, {d, 0}, r2);
    const double f2 = lens_area({0, 0}, r1, {d + eps, 0}, r2);
    const double second = (f0 - 2.0 * f1 + f2) / (eps * eps);
    CHECK(std::abs(second) < 1e3);  // no jumps at the 1e-6 scale
  }
}

TEST_CASE("lens_area agrees with Monte-Carlo rejection sampling") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> coord(-2.0, 2.0), rad(0.3, 1.8);
  const std::int64_t samples = 10'000'000;
  for (int k = 0; k < 100; ++k) {
    const Vec2 a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    const double r1 = rad(rng), r2 = rad(rng);
    const double exact = lens_area(a, r1, b, r2);
    const McEstimate mc = mc_lens_area(a, r1, b, r2, samples, rng());
    const double tol = 3.0 * mc.stderr_ + 1e-9;
    CHECK(std::abs(exact - mc.area) <= tol);
  }
}

TEST_CASE("halfplane_disc_area") {
  // disc centered on the boundary line: half the disc
  CHECK(halfplane_disc_area({0, 1}, 1.0, 0.0) == doctest::Approx(kPi / 2).epsilon(1e-12));
  // fully inside / outside
  CHECK(halfplane_disc_area({3, 0}, 1.0, 0.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(halfplane_disc_area({-3, 0}, 1.0, 0.0) == 0.0);
  // matches the large-disc limit of lens_area
  const Vec2 c{0.4, 2.0};
  const double a = 0.7, phi = 1.1;
  const double big = 1e5;
  const Disc d{unit_vector(phi) * big, big};
  CHECK(halfplane_disc_area(c, a, phi) ==
        doctest::Approx(lens_area(c, a, d.center, d.radius)).epsilon(1e-4));
}

TEST_CASE("detector_position") {
  const ScannerGeometry g = make_geometry(6.75, 360);
  auto top = detector_position(g, kPi / 2);
  CHECK(top.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(top.y == doctest::Approx(6.75).epsilon(1e-14));
  auto bottom = detector_position(g, -kPi / 2);
  CHECK(bottom.y == doctest::Approx(1.0).epsilon(1e-14));
  auto side = detector_position(g, 0.0);
  CHECK(side.x == doctest::Approx(2.875).epsilon(1e-14));
  CHECK(side.y == doctest::Approx(3.875).epsilon(1e-14));
}

TEST_CASE("sample_p spot values and boundary membership") {
  const ScannerGeometry g = make_geometry(6.75, 360);
  CHECK(sample_p(g, kPi / 2, kPi / 2) == doctest::Approx(1.0 / 6.75).epsilon(1e-12));
  CHECK(sample_p(g, -kPi / 2, kPi / 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sample_p(g, 0.0, kPi / 2) == doctest::Approx(3.875 / 23.28125).epsilon(1e-12));
  CHECK_THROWS_AS(sample_p(g, kPi / 2, -kPi / 2), Error);

  // the disc boundary passes through the detector point
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  int checked = 0;
  while (checked < 200) {
    const double theta = angle(rng), phi = angle(rng);
    const Vec2 d = detector_position(g, theta);
    if (d.dot(unit_vector(phi)) <= 1e-6) continue;
    const double p = sample_p(g, theta, phi);
    const Disc disc = disc_from_sinogram(p, phi);
    CHECK(std::abs((d - disc.center).norm() - disc.radius) <= 1e-12 * disc.radius);
    ++checked;
  }
}

TEST_CASE("scatter_region_area composes with lens_area") {
  const ScannerGeometry g = make_geometry(6.75, 360);
  // disc covering the whole ring interior
  const double p_tiny = 1e-3;
  CHECK(scatter_region_area(g, p_tiny, kPi / 2) ==
        doctest::Approx(kPi * 2.875 * 2.875).epsilon(1e-9));
  // disc aimed away from the ring
  CHECK(scatter_region_area(g, 0.5, -kPi / 2) == 0.0);
  const double got = scatter_region_area(g, 0.2, kPi / 2);
  CHECK(got == doctest::Approx(lens_area({0, 2.5}, 2.5, {0, 3.875}, 2.875)).epsilon(1e-12));
  CHECK_THROWS_AS(scatter_region_area(g, 0.0, 0.0), Error);
}

TEST_CASE("chord reflection is an involution and keeps the origin on the boundary") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), diam(0.5, 6.0);
  for (int k = 0; k < 100; ++k) {
    const double phi = angle(rng);
    const Disc base{unit_vector(phi) * (diam(rng) / 2.0), 0.0};
    Disc d = base;
    d.radius = base.center.norm();
    const Vec2 chord = unit_vector(angle(rng));
    const Disc once = reflect_across_chord(d, chord);
    const Disc twice = reflect_across_chord(once, chord);
    CHECK(twice.center.x == doctest::Approx(d.center.x).epsilon(1e-12));
    CHECK(twice.center.y == doctest::Approx(d.center.y).epsilon(1e-12));
    CHECK(once.radius == d.radius);
    // origin stays on the reflected boundary
    CHECK(once.center.norm() == doctest::Approx(once.radius).epsilon(1e-12));
  }
}

TEST_CASE("toric quad construction") {
  const ScannerGeometry g = make_geometry(6.75, 360, 0.375);
  const Disc base{unit_vector(kPi / 2) * (6.375 / 2.0), 6.375 / 2.0};
  const ToricQuad q = make_toric_quad(g, base);
  // detectors on the ring and on the base boundary
  for (const Vec2& d : {q.detector1, q.detector2}) {
    CHECK((d - g.ring_center()).norm() == doctest::Approx(g.ring_radius()).epsilon(1e-12));
    CHECK((d - base.center).norm() == doctest::Approx(base.radius).epsilon(1e-12));
  }
  // reflected boundaries pass through the origin and their detector
  CHECK(q.reflected1.center.norm() == doctest::Approx(q.reflected1.radius).epsilon(1e-12));
  CHECK((q.detector1 - q.reflected1.center).norm() ==
        doctest::Approx(q.reflected1.radius).epsilon(1e-12));
  // disc aimed away from the ring has no quad
  const Disc away{unit_vector(-kPi / 2) * 1.0, 1.0};
  CHECK_THROWS_AS(make_toric_quad(g, away), Error);
}

TEST_CASE("validate_rtt80 smoke resolution") {
  const ScannerGeometry g = make_geometry(6.75, 360, 0.375);
  const RttReport report = validate_rtt80(g, 20, 36, 256);
  CHECK(report.n_evaluated + report.n_skipped == 20 * 36);
  CHECK(report.n_evaluated > 0);
  CHECK(report.max_min_diff < 1e-3 * report.tunnel_area);
}

TEST_CASE("validate_rtt80 is independent of the worker partition") {
  const ScannerGeometry g = make_geometry(6.75, 360, 0.375);
  const RttReport a = validate_rtt80(g, 10, 24, 128);
  const RttReport b = validate_rtt80(g, 10, 24, 128);
  CHECK(a.max_min_diff == b.max_min_diff);
  CHECK(a.argmax_p_diam == b.argmax_p_diam);
  CHECK(a.argmax_phi == b.argmax_phi);
}

TEST_CASE("toric_quad_areas matches the naive cell loop and the exact lens area") {
  const ScannerGeometry g = make_geometry(6.75, 360, 0.375);
  const Disc tunnel{g.ring_center(), g.tunnel_radius()};
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> diam_d(1.4, 6.3), phi_d(0.0, kTwoPi);
  const int cells = 173;
  const double xmin = tunnel.center.x - tunnel.radius;
  const double ymin = tunnel.center.y - tunnel.radius;
  const double step = 2.0 * tunnel.radius / cells;
  const double cell_area = step * step;
  int tried = 0;
  while (tried < 10) {
    const double diam = diam_d(rng);
    const double phi = phi_d(rng);
    const Disc base{unit_vector(phi) * (diam / 2.0), diam / 2.0};
    ToricQuad q;
    try {
      q = make_toric_quad(g, base);
    } catch (const Error&) {
      continue;
    }
    ++tried;
    std::int64_t naive[5] = {0, 0, 0, 0, 0};
    for (int j = 0; j < cells; ++j)
      for (int i = 0; i < cells; ++i) {
        const Vec2 u{xmin + (i + 0.5) * step, ymin + (j + 0.5) * step};
        if (!tunnel.contains(u)) continue;
        const bool in_d = q.base.contains(u);
        const bool in_1 = q.reflected1.contains(u);
        const bool in_2 = q.reflected2.contains(u);
        if (in_d) ++naive[0];
        if (in_d && in_1) ++naive[1];
        if (in_d && in_2) ++naive[2];
        if (in_d || in_1) ++naive[3];
        if (in_d || in_2) ++naive[4];
      }
    const ToricAreas areas = toric_quad_areas(q, tunnel, cells);
    CHECK(areas.base == static_cast<double>(naive[0]) * cell_area);
    for (int t = 0; t < 4; ++t)
      CHECK(areas.t[t] == static_cast<double>(naive[t + 1]) * cell_area);
    // the base overlap converges to the exact lens area
    const ToricAreas fine = toric_quad_areas(q, tunnel, 4096);
    const double exact = lens_area(base.center, base.radius, tunnel.center, tunnel.radius);
    CHECK(fine.base == doctest::Approx(exact).epsilon(2e-3));
  }
}
