#include "core/materials.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace dtomo {

double SigmaFit::sigma_e(double z) const {
  require(z >= z_min - 1e-12 && z <= z_max + 1e-12, Errc::out_of_range,
          "Z outside the fitted range");
  const double photoelectric = c_p * std::pow(z, a_p - b_p * std::log(z));
  const double scatter = c0_s + c1_s * (1.0 - std::pow(z, -e1_s)) * std::pow(z, e2_s);
  return photoelectric + scatter;
}

void SigmaFit::audit() const {
  require(z_max > z_min && z_min > 0.0, Errc::invalid_argument, "bad fit Z range");
  double prev = sigma_e(z_min);
  for (double z = z_min + 0.1; z <= z_max + 1e-9; z += 0.1) {
    const double v = sigma_e(std::min(z, z_max));
    require(v > prev, Errc::invalid_argument, "sigma_e fit is not strictly increasing in Z");
    prev = v;
  }
}

SigmaFit SigmaFit::default_100keV() {
  static const SigmaFit fit = [] {
    SigmaFit f;
    f.audit();
    return f;
  }();
  return fit;
}

SigmaFit SigmaFit::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, Errc::io_error, path + ": expected key=value, got: " + line);
    kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
  }
  SigmaFit f;
  auto pick = [&](const char* key, double& field) {
    const auto it = kv.find(key);
    require(it != kv.end(), Errc::io_error, path + ": missing key " + key);
    field = it->second;
  };
  pick("energy_keV", f.energy_keV);
  pick("c_p", f.c_p);
  pick("a_p", f.a_p);
  pick("b_p", f.b_p);
  pick("c0_s", f.c0_s);
  pick("c1_s", f.c1_s);
  pick("e1_s", f.e1_s);
  pick("e2_s", f.e2_s);
  pick("z_min", f.z_min);
  pick("z_max", f.z_max);
  f.audit();
  return f;
}

void SigmaFit::save(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "energy_keV=%.17g\nc_p=%.17g\na_p=%.17g\nb_p=%.17g\nc0_s=%.17g\nc1_s=%.17g\n"
                "e1_s=%.17g\ne2_s=%.17g\nz_min=%.17g\nz_max=%.17g\n",
                energy_keV, c_p, a_p, b_p, c0_s, c1_s, e1_s, e2_s, z_min, z_max);
  out << buf;
  require(out.good(), Errc::io_error, "failed writing " + path);
}

double mu_from(double n_e, double z, const SigmaFit& fit) {
  require(n_e >= 0.0, Errc::invalid_argument, "electron density must be non-negative");
  return n_e * fit.sigma_e(z);
}

double estimate_Z(double mu, double n_e, const SigmaFit& fit) {
  require(n_e > 0.0, Errc::invalid_argument, "electron density must be positive");
  const double target = mu / n_e;
  const double lo_v = fit.sigma_e(fit.z_min);
  const double hi_v = fit.sigma_e(fit.z_max);
  if (target < lo_v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "sigma ratio %.6g below the fit gamut; clamped endpoint Z=%g",
                  target, fit.z_min);
    fail(Errc::out_of_gamut, buf);
  }
  if (target > hi_v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "sigma ratio %.6g above the fit gamut; clamped endpoint Z=%g",
                  target, fit.z_max);
    fail(Errc::out_of_gamut, buf);
  }
  double lo = fit.z_min, hi = fit.z_max;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (fit.sigma_e(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double z_max_for_energy(double e_keV) {
  require(e_keV > 0.0, Errc::invalid_argument, "energy must be positive");
  return std::min(100.0, 86.0 * std::sqrt(e_keV / 100.0));
}

}  // namespace dtomo
