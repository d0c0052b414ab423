#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "core/materials.hpp"

using namespace dtomo;

TEST_CASE("sigma_e spot values") {
  const SigmaFit fit = SigmaFit::default_100keV();
  CHECK(fit.sigma_e(1.0) == doctest::Approx(0.49000151).epsilon(1e-9));
  CHECK(fit.sigma_e(7.42) == doctest::Approx(0.5096352109538386).epsilon(1e-12));
  CHECK(fit.sigma_e(13.3) == doctest::Approx(0.5931153580606608).epsilon(1e-12));
  // anchor: sigma_e(7.42)/1.033 reproduces the 0.493 chain
  CHECK(fit.sigma_e(7.42) / 1.033 == doctest::Approx(0.493).epsilon(0.004));
  CHECK_THROWS_AS(fit.sigma_e(0.5), Error);
  CHECK_THROWS_AS(fit.sigma_e(90.0), Error);
}

TEST_CASE("sigma_e is strictly increasing on the fitted range") {
  const SigmaFit fit = SigmaFit::default_100keV();
  CHECK_NOTHROW(fit.audit());
  double prev = fit.sigma_e(1.0);
  for (double z = 1.1; z <= 86.0; z += 0.1) {
    const double v = fit.sigma_e(z);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("mu_from") {
  const SigmaFit fit = SigmaFit::default_100keV();
  CHECK(mu_from(0.0, 30.0) == 0.0);
  CHECK(mu_from(1.0, 7.42) == fit.sigma_e(7.42));
  // n_e = 1.033 at the Z whose cross section is 0.493 gives mu = 0.5093
  const double z493 = estimate_Z(0.493, 1.0);
  CHECK(mu_from(1.033, z493) == doctest::Approx(0.493 * 1.033).epsilon(1e-6));
}

TEST_CASE("estimate_Z: round trip, paper anchors, gamut") {
  const SigmaFit fit = SigmaFit::default_100keV();
  CHECK(estimate_Z(fit.sigma_e(30.0) * 0.7, 0.7) == doctest::Approx(30.0).epsilon(1e-6));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> zdist(1.0, 86.0), ndist(0.1, 5.0);
  for (int k = 0; k < 100; ++k) {
    const double z = zdist(rng), ne = ndist(rng);
    CHECK(std::abs(estimate_Z(fit.sigma_e(z) * ne, ne) - z) <= 2e-6);
  }

  const double z16 = estimate_Z(0.5097, 0.853);
  CHECK(z16 >= 13.0);
  CHECK(z16 <= 13.6);
  CHECK(z16 == doctest::Approx(13.4878).epsilon(1e-3));
  const double z15 = estimate_Z(0.5097, 0.865);
  CHECK(z15 >= 12.7);
  CHECK(z15 <= 13.3);

  // scale invariance
  CHECK(estimate_Z(0.5097 * 3.0, 0.853 * 3.0) == doctest::Approx(z16).epsilon(1e-9));

  CHECK_THROWS_AS(estimate_Z(0.1, 1.0), Error);    // below sigma_e(1)
  CHECK_THROWS_AS(estimate_Z(100.0, 1.0), Error);  // above sigma_e(86)
  CHECK_THROWS_AS(estimate_Z(0.5, 0.0), Error);
}

TEST_CASE("z_max_for_energy") {
  CHECK(z_max_for_energy(100.0) == doctest::Approx(86.0).epsilon(1e-12));
  CHECK(z_max_for_energy(400.0) == doctest::Approx(100.0).epsilon(1e-12));  // capped from 172
  CHECK(z_max_for_energy(25.0) == doctest::Approx(43.0).epsilon(1e-12));
  CHECK_THROWS_AS(z_max_for_energy(0.0), Error);
}

TEST_CASE("fit coefficient file round trip and audit") {
  const SigmaFit fit = SigmaFit::default_100keV();
  const std::string path = "test_sigma_fit.txt";
  fit.save(path);
  const SigmaFit back = SigmaFit::load(path);
  CHECK(back.c_p == fit.c_p);
  CHECK(back.a_p == fit.a_p);
  CHECK(back.z_max == fit.z_max);
  std::remove(path.c_str());

  // a non-monotone fit fails the audit on load
  SigmaFit bad = fit;
  bad.c1_s = -1.0;
  bad.save(path);
  CHECK_THROWS_AS(SigmaFit::load(path), Error);
  std::remove(path.c_str());
}
