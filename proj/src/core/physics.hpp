#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/image.hpp"
#include "core/phantom.hpp"
#include "core/sinogram.hpp"

namespace dtomo {

// Tabulated source spectrum, normalized to unit integral; linear
// interpolation between samples, zero outside the tabulated support.
struct Spectrum {
  std::vector<double> energy_keV;  // ascending
  std::vector<double> intensity;

  double operator()(double e) const;
  void normalize();

  // Bremsstrahlung shape I0(E) ~ (e_max/E - 1) on [e_min, e_max]; the shape
  // diverges at E -> 0, so a positive low cutoff is required.
  static Spectrum kramers(double e_max_keV, double e_min_keV, int samples = 512);
  static Spectrum load_csv(const std::string& path);
  void save_csv(const std::string& path) const;
};

struct PhysicsParams {
  double e_max = 150.0;  // keV tube endpoint
  double e0 = 511.0;     // keV electron rest energy
  double r0 = 1.0;       // classical electron radius, sets the absolute scale
  double z_avg = 45.0;
  double s_fit[3] = {1.023, 0.458, 2.509};
  double hc = 12.398;    // keV * Angstrom
  double slice_thickness = 1.0;
  double detector_area = 1.0;
  // The point solid angle (A/4pi)(r.n)/|r|^3 is a far-field form and blows
  // up logarithmically when the region average approaches the detector;
  // cells closer than this standoff are excluded from region averages.
  double detector_standoff = 0.05;
  bool has_detector_normal = false;
  Vec2 detector_normal;  // default: outward radial unit vector at the detector
  Spectrum spectrum = Spectrum::kramers(150.0, 15.0);
};

enum class AttenMode { none, known_mu, straight_through };

AttenMode atten_mode_from_string(const std::string& name);

struct AttenuationModel {
  AttenMode mode = AttenMode::none;
  const ImageGrid* mu = nullptr;  // attenuation map for the line integrals
  double ratio = 1.0;             // straight-through transmission when no map is given
};

// Compton line: E_s = E_lambda / (1 + (E_lambda/E0)(1 - cos w)).
double scattered_energy(double e_lambda, double omega, double e0 = 511.0);
// Algebraic inverse; throws Errc::no_physical_energy at the pole.
double incident_energy(double e_s, double omega, double e0 = 511.0);
// Largest scattering angle that a tube endpoint e_max can feed into
// measured energy e_s; clamps to pi when every angle is admissible.
double omega_max(double e_max, double e_s, double e0 = 511.0);
// Differential cross section in units of r0^2 per steradian.
double klein_nishina(double e_lambda, double omega, double r0 = 1.0, double e0 = 511.0);
// Momentum transfer in inverse Angstrom.
double momentum_transfer(double e_lambda, double omega, double hc = 12.398);
// Incoherent scattering function fit, clamped to [0, 1].
double scatter_function_q(double q, const double s_fit[3]);
double scatter_function(double e_lambda, double omega, const PhysicsParams& params);

// Detector assigned to (p, phi): the ring intersection of the disc boundary
// on the left of the phi axis (deterministic tie for the data indexing).
Vec2 detector_for(const ScannerGeometry& geom, double p, double phi);
// Measured energy of the (p, phi) dataset: the disc's far boundary arc is the
// maximum-angle locus fed by the tube endpoint.
double measured_energy(const ScannerGeometry& geom, double p, double phi,
                       const PhysicsParams& params);

// Intensity weight per unit electron areal density at the scattering point u.
double point_weight(Vec2 u, const ScannerGeometry& geom, double p, double phi,
                    const PhysicsParams& params, const AttenuationModel& atten);

// Area-average of a weight function over R_{p,phi} by midpoint quadrature
// over the region bounding box; cells within exclude_radius of exclude are
// left out (used for the detector standoff).
double average_weight_of(const std::function<double(Vec2)>& weight, const ScannerGeometry& geom,
                         double p, double phi, int cells = 128,
                         const Vec2* exclude = nullptr, double exclude_radius = 0.0);
double average_weight(const ScannerGeometry& geom, double p, double phi,
                      const PhysicsParams& params, const AttenuationModel& atten, int cells = 128);

// Entrywise intensity / (slice_thickness * P_avg).
DiscSinogram normalize_measurements(const DiscSinogram& intensity, const ScannerGeometry& geom,
                                    const PhysicsParams& params, const AttenuationModel& atten,
                                    int cells = 128);

// Forward model: slice_thickness * P_avg * disc integral of the density.
DiscSinogram simulate_intensity(const PhantomSpec& spec, const ScannerGeometry& geom,
                                const std::vector<double>& p_values,
                                const std::vector<double>& phi_values, const PhysicsParams& params,
                                const AttenuationModel& atten, int cells = 128);

// P_avg table as a radon-free sinogram-shaped CSV (p, phi, P_avg rows).
void write_pavg_csv(const DiscSinogram& pavg, const std::string& path);
DiscSinogram compute_pavg_table(const ScannerGeometry& geom, const std::vector<double>& p_values,
                                const std::vector<double>& phi_values, const PhysicsParams& params,
                                const AttenuationModel& atten, int cells = 128);

}  // namespace dtomo
