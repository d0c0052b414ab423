#pragma once

#include <string>

#include "core/common.hpp"

namespace dtomo {

// Total cross section per electron fitted at one energy:
//   sigma_e(Z) = c_p Z^(a_p - b_p ln Z) + c0_s + c1_s (1 - Z^-e1_s) Z^e2_s
// with the photoelectric exponent using the natural logarithm. The fit is
// audited for strict monotonicity on [z_min, z_max] at construction.
struct SigmaFit {
  double energy_keV = 100.0;
  double c_p = 1.51e-6;
  double a_p = 4.72;
  double b_p = 0.22;
  double c0_s = 0.49;
  double c1_s = 7.90e-4;
  double e1_s = 0.50;
  double e2_s = 1.57;
  double z_min = 1.0;
  double z_max = 86.0;

  double sigma_e(double z) const;
  // Strict increase on [z_min, z_max] sampled at step 0.1; throws on failure.
  void audit() const;

  static SigmaFit default_100keV();
  static SigmaFit load(const std::string& path);
  void save(const std::string& path) const;
};

double mu_from(double n_e, double z, const SigmaFit& fit = SigmaFit::default_100keV());

// Bisection solve of sigma_e(Z) = mu/n_e to |dZ| <= 1e-6; out-of-gamut ratios
// raise Errc::out_of_gamut naming the clamped endpoint.
double estimate_Z(double mu, double n_e, const SigmaFit& fit = SigmaFit::default_100keV());

// Monotone-validity ceiling 86 sqrt(E/100), capped at 100.
double z_max_for_energy(double e_keV);

}  // namespace dtomo
