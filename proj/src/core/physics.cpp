#include "core/physics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/parallel.hpp"

namespace dtomo {

double Spectrum::operator()(double e) const {
  if (energy_keV.empty() || e < energy_keV.front() || e > energy_keV.back()) return 0.0;
  const auto it = std::upper_bound(energy_keV.begin(), energy_keV.end(), e);
  if (it == energy_keV.begin()) return intensity.front();
  if (it == energy_keV.end()) return intensity.back();
  const size_t k = static_cast<size_t>(it - energy_keV.begin());
  const double t = (e - energy_keV[k - 1]) / (energy_keV[k] - energy_keV[k - 1]);
  return (1.0 - t) * intensity[k - 1] + t * intensity[k];
}

void Spectrum::normalize() {
  require(energy_keV.size() == intensity.size() && energy_keV.size() >= 2, Errc::invalid_argument,
          "spectrum needs at least two samples");
  double integral = 0.0;
  for (size_t k = 1; k < energy_keV.size(); ++k)
    integral += 0.5 * (intensity[k] + intensity[k - 1]) * (energy_keV[k] - energy_keV[k - 1]);
  require(integral > 0.0, Errc::invalid_argument, "spectrum integrates to zero");
  for (double& v : intensity) v /= integral;
}

Spectrum Spectrum::kramers(double e_max_keV, double e_min_keV, int samples) {
  require(e_max_keV > e_min_keV && e_min_keV > 0.0, Errc::invalid_argument,
          "kramers: need 0 < e_min < e_max");
  Spectrum s;
  s.energy_keV.resize(static_cast<size_t>(samples));
  s.intensity.resize(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double e = e_min_keV + (e_max_keV - e_min_keV) * k / (samples - 1);
    s.energy_keV[static_cast<size_t>(k)] = e;
    s.intensity[static_cast<size_t>(k)] = e_max_keV / e - 1.0;
  }
  s.normalize();
  return s;
}

Spectrum Spectrum::load_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);
  Spectrum s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double e = 0.0, v = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &e, &v) != 2)
      fail(Errc::io_error, path + ": expected E_keV,relative_intensity rows");
    s.energy_keV.push_back(e);
    s.intensity.push_back(v);
  }
  s.normalize();
  return s;
}

void Spectrum::save_csv(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  char buf[80];
  for (size_t k = 0; k < energy_keV.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", energy_keV[k], intensity[k]);
    out << buf;
  }
}

AttenMode atten_mode_from_string(const std::string& name) {
  if (name == "none") return AttenMode::none;
  if (name == "known_mu") return AttenMode::known_mu;
  if (name == "straight_through") return AttenMode::straight_through;
  fail(Errc::invalid_argument, "unknown attenuation mode: " + name);
}

double scattered_energy(double e_lambda, double omega, double e0) {
  require(e_lambda > 0.0, Errc::invalid_argument, "incident energy must be positive");
  return e_lambda / (1.0 + (e_lambda / e0) * (1.0 - std::cos(omega)));
}

double incident_energy(double e_s, double omega, double e0) {
  require(e_s > 0.0, Errc::invalid_argument, "scattered energy must be positive");
  const double denom = 1.0 - (e_s / e0) * (1.0 - std::cos(omega));
  require(denom > 0.0, Errc::no_physical_energy,
          "no finite incident energy reaches this scattered energy and angle");
  return e_s / denom;
}

double omega_max(double e_max, double e_s, double e0) {
  require(e_s > 0.0 && e_max > 0.0, Errc::invalid_argument, "energies must be positive");
  require(e_s <= e_max, Errc::invalid_argument, "scattered energy exceeds the tube endpoint");
  const double arg = 1.0 - e0 * (e_max - e_s) / (e_s * e_max);
  if (arg < -1.0) return kPi;
  return std::acos(std::min(arg, 1.0));
}

double klein_nishina(double e_lambda, double omega, double r0, double e0) {
  const double ratio = scattered_energy(e_lambda, omega, e0) / e_lambda;
  const double c = std::cos(omega);
  return 0.5 * r0 * r0 * ratio * ratio * (ratio + 1.0 / ratio - 1.0 + c * c);
}

double momentum_transfer(double e_lambda, double omega, double hc) {
  return (e_lambda / hc) * std::sin(0.5 * omega);
}

double scatter_function_q(double q, const double s_fit[3]) {
  const double raw = 1.0 - s_fit[0] / std::pow(1.0 + s_fit[1] * q, s_fit[2]);
  return clamp01(raw);
}

double scatter_function(double e_lambda, double omega, const PhysicsParams& params) {
  return scatter_function_q(momentum_transfer(e_lambda, omega, params.hc), params.s_fit);
}

Vec2 detector_for(const ScannerGeometry& geom, double p, double phi) {
  const Disc d = disc_from_sinogram(p, phi);
  const auto hits = circle_intersections(d.center, d.radius, geom.ring_center(), geom.ring_radius());
  require(hits.has_value(), Errc::no_disc, "disc boundary does not meet the detector ring");
  const Vec2 dir = unit_vector(phi);
  return dir.cross(hits->first) >= 0.0 ? hits->first : hits->second;
}

double measured_energy(const ScannerGeometry& geom, double p, double phi,
                       const PhysicsParams& params) {
  const Vec2 d = detector_for(geom, p, phi);
  const double chord_sine = std::min(1.0, d.norm() * p);
  const double omega_arc = kPi - std::asin(chord_sine);
  return scattered_energy(params.e_max, omega_arc, params.e0);
}

namespace {

double line_integral(const ImageGrid& mu, Vec2 a, Vec2 b) {
  const double len = (b - a).norm();
  if (len == 0.0) return 0.0;
  const double step = 0.5 * std::min(mu.dx(), mu.dy());
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  const double dt = len / n;
  const Vec2 dir = (b - a) * (1.0 / len);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec2 u = a + dir * ((k + 0.5) * dt);
    sum += mu.bilinear(u.x, u.y);
  }
  return sum * dt;
}

// Straight-through path: source ray through u extended to the far ring exit.
double straight_exit_length(const ScannerGeometry& geom, Vec2 dir) {
  const Vec2 c = geom.ring_center();
  const double b = dir.dot(c);
  const double disc = b * b - (c.norm2() - geom.ring_radius() * geom.ring_radius());
  if (disc <= 0.0) return 0.0;
  return b + std::sqrt(disc);
}

}  // namespace

double point_weight(Vec2 u, const ScannerGeometry& geom, double p, double phi,
                    const PhysicsParams& params, const AttenuationModel& atten) {
  const Vec2 d = detector_for(geom, p, phi);
  require(u.norm() > 1e-12, Errc::singular_configuration, "scattering point coincides with the source");
  const Vec2 r = d - u;
  const double r_norm = r.norm();
  require(r_norm > 1e-12, Errc::singular_configuration, "scattering point coincides with the detector");

  // Photon deflection between the incoming ray s->u and the outgoing ray u->d.
  const double cos_omega = std::clamp(u.dot(r) / (u.norm() * r_norm), -1.0, 1.0);
  const double omega = std::acos(cos_omega);

  const double e_s = measured_energy(geom, p, phi, params);
  const double denom = 1.0 - (e_s / params.e0) * (1.0 - cos_omega);
  if (denom <= 0.0) return 0.0;  // the required incident energy is unbounded
  const double e_lambda = e_s / denom;
  const double i0 = params.spectrum(e_lambda);
  if (i0 == 0.0) return 0.0;

  double attenuation = 1.0;
  switch (atten.mode) {
    case AttenMode::none:
      break;
    case AttenMode::known_mu:
      require(atten.mu != nullptr, Errc::invalid_argument, "known_mu mode needs an attenuation map");
      attenuation = std::exp(-line_integral(*atten.mu, {0.0, 0.0}, u)) *
                    std::exp(-line_integral(*atten.mu, u, d));
      break;
    case AttenMode::straight_through: {
      if (atten.mu != nullptr) {
        const Vec2 dir = u * (1.0 / u.norm());
        const double exit = straight_exit_length(geom, dir);
        attenuation = std::exp(-line_integral(*atten.mu, {0.0, 0.0}, dir * exit));
      } else {
        require(atten.ratio > 0.0 && atten.ratio <= 1.0, Errc::invalid_argument,
                "straight-through ratio must lie in (0, 1]");
        attenuation = atten.ratio;
      }
      break;
    }
  }

  // Radial normal oriented so that r . n > 0 for interior scattering points.
  const Vec2 normal = params.has_detector_normal
                          ? params.detector_normal
                          : (d - geom.ring_center()) * (1.0 / (d - geom.ring_center()).norm());
  // Far-field point solid angle, saturated inside the standoff radius so the
  // region average stays integrable at the detector.
  const double reff = std::max(r_norm, params.detector_standoff);
  const double solid_angle =
      params.detector_area / (4.0 * kPi) * std::max(0.0, r.dot(normal)) / (r_norm * reff * reff);

  return i0 * attenuation * klein_nishina(e_lambda, omega, params.r0, params.e0) *
         scatter_function(e_lambda, omega, params) * solid_angle;
}

double average_weight_of(const std::function<double(Vec2)>& weight, const ScannerGeometry& geom,
                         double p, double phi, int cells, const Vec2* exclude,
                         double exclude_radius) {
  require(cells >= 2, Errc::invalid_argument, "average_weight: cells too small");
  const Disc d = disc_from_sinogram(p, phi);
  const Disc ring = geom.ring_disc();
  const double xmin = std::max(d.center.x - d.radius, ring.center.x - ring.radius);
  const double xmax = std::min(d.center.x + d.radius, ring.center.x + ring.radius);
  const double ymin = std::max(d.center.y - d.radius, ring.center.y - ring.radius);
  const double ymax = std::min(d.center.y + d.radius, ring.center.y + ring.radius);
  require(xmax > xmin && ymax > ymin, Errc::empty_region, "scattering region is empty");
  const double dx = (xmax - xmin) / cells;
  const double dy = (ymax - ymin) / cells;
  const double er2 = exclude_radius * exclude_radius;
  double sum = 0.0;
  std::int64_t count = 0;
  for (int j = 0; j < cells; ++j) {
    const double y = ymin + (j + 0.5) * dy;
    for (int i = 0; i < cells; ++i) {
      const Vec2 u{xmin + (i + 0.5) * dx, y};
      if (!d.contains(u) || !ring.contains(u)) continue;
      if (exclude && (u - *exclude).norm2() < er2) continue;
      sum += weight(u);
      ++count;
    }
  }
  require(count > 0, Errc::empty_region, "scattering region is empty");
  return sum / static_cast<double>(count);
}

double average_weight(const ScannerGeometry& geom, double p, double phi,
                      const PhysicsParams& params, const AttenuationModel& atten, int cells) {
  return average_weight_of(
      [&](Vec2 u) { return point_weight(u, geom, p, phi, params, atten); }, geom, p, phi, cells);
}

DiscSinogram compute_pavg_table(const ScannerGeometry& geom, const std::vector<double>& p_values,
                                const std::vector<double>& phi_values, const PhysicsParams& params,
                                const AttenuationModel& atten, int cells) {
  DiscSinogram table(p_values, phi_values, Quantity::disc_integral, geom.r);
  parallel_for(table.n_phi(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j)
      for (int i = 0; i < table.n_p(); ++i) {
        const double p = p_values[static_cast<size_t>(i)];
        const double phi = phi_values[static_cast<size_t>(j)];
        double v = 0.0;
        try {
          v = average_weight(geom, p, phi, params, atten, cells);
        } catch (const Error& e) {
          if (e.code() != Errc::empty_region && e.code() != Errc::no_disc) throw;
        }
        table.at(static_cast<int>(j), i) = v;
      }
  });
  return table;
}

DiscSinogram normalize_measurements(const DiscSinogram& intensity, const ScannerGeometry& geom,
                                    const PhysicsParams& params, const AttenuationModel& atten,
                                    int cells) {
  intensity.validate();
  const DiscSinogram pavg = compute_pavg_table(geom, intensity.p_values, intensity.phi_values,
                                               params, atten, cells);
  DiscSinogram out = intensity;
  out.quantity = Quantity::disc_integral;
  for (int j = 0; j < out.n_phi(); ++j)
    for (int i = 0; i < out.n_p(); ++i) {
      const double denom = params.slice_thickness * pavg.at(j, i);
      const double v = intensity.at(j, i);
      if (denom == 0.0) {
        require(v == 0.0, Errc::normalization,
                "nonzero intensity where the averaged weight vanishes");
        out.at(j, i) = 0.0;
      } else {
        out.at(j, i) = v / denom;
      }
    }
  return out;
}

DiscSinogram simulate_intensity(const PhantomSpec& spec, const ScannerGeometry& geom,
                                const std::vector<double>& p_values,
                                const std::vector<double>& phi_values, const PhysicsParams& params,
                                const AttenuationModel& atten, int cells) {
  const DiscSinogram pavg = compute_pavg_table(geom, p_values, phi_values, params, atten, cells);
  DiscSinogram out(p_values, phi_values, Quantity::disc_integral, geom.r);
  for (int j = 0; j < out.n_phi(); ++j)
    for (int i = 0; i < out.n_p(); ++i)
      out.at(j, i) = params.slice_thickness * pavg.at(j, i) *
                     analytic_disc_integral(spec, p_values[static_cast<size_t>(i)],
                                            phi_values[static_cast<size_t>(j)]);
  return out;
}

void write_pavg_csv(const DiscSinogram& pavg, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  out << "p,phi,p_avg\n";
  char buf[120];
  for (int j = 0; j < pavg.n_phi(); ++j)
    for (int i = 0; i < pavg.n_p(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pavg.p_values[static_cast<size_t>(i)],
                    pavg.phi_values[static_cast<size_t>(j)], pavg.at(j, i));
      out << buf;
    }
  require(out.good(), Errc::io_error, "failed writing " + path);
}

}  // namespace dtomo
