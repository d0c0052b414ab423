#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace dtomo {

enum class Quantity { disc_integral, extended, radon };

std::string quantity_name(Quantity q);
Quantity quantity_from_string(const std::string& name);

// Values sampled on a (p, phi) grid. p is the sinogram coordinate
// 1/disc-diameter for disc integrals and the line offset for radon data.
struct DiscSinogram {
  std::vector<double> p_values;    // ascending
  std::vector<double> phi_values;  // ascending, in [0, 2pi)
  std::vector<double> data;        // [phi][p]
  Quantity quantity = Quantity::disc_integral;
  double r = 6.75;
  std::vector<double> c_values;  // per-phi jump constants, extended only

  DiscSinogram() = default;
  DiscSinogram(std::vector<double> p, std::vector<double> phi, Quantity q, double ring_r);

  int n_p() const { return static_cast<int>(p_values.size()); }
  int n_phi() const { return static_cast<int>(phi_values.size()); }
  double& at(int iphi, int ip) { return data[static_cast<size_t>(iphi) * p_values.size() + ip]; }
  double at(int iphi, int ip) const { return data[static_cast<size_t>(iphi) * p_values.size() + ip]; }

  void validate(bool require_finite = true) const;

  // Uniform grid spacing; throws Errc::axis_error when the axis is not uniform.
  double p_spacing() const;
  // Index of phi + pi in the phi axis; throws Errc::axis_error when absent.
  int opposite_phi_index(int iphi) const;
};

// Cell-centered p grid (i + 1/2)/n on [0, 1].
std::vector<double> default_p_grid(int n);
// phi_j = 2 pi (j+1)/n mapped to [0, 2pi) and sorted, j = 0..n-1.
std::vector<double> default_phi_grid(int n);

// CSV layout: "# quantity=...", "# r=...", "# p=v1,v2,...", optional
// "# c=..." for extended data, then one "phi,v1,...,vNp" row per phi.
// 17 significant digits; round-trips bit-exactly.
void write_sinogram_csv(const DiscSinogram& s, const std::string& path);
DiscSinogram read_sinogram_csv(const std::string& path);

}  // namespace dtomo
