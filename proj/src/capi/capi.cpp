#include "dtomo.h"

#include <cstring>
#include <fstream>
#include <optional>
#include <string>

#include "core/materials.hpp"
#include "core/physics.hpp"
#include "core/recon.hpp"
#include "core/signal.hpp"
#include "core/transform.hpp"

using namespace dtomo;

struct dtomo_geometry {
  ScannerGeometry geom;
};
struct dtomo_phantom {
  PhantomSpec spec;
};
struct dtomo_image {
  ImageGrid img;
};
struct dtomo_sinogram {
  DiscSinogram sino;
};

namespace {

thread_local std::string g_last_error;

dtomo_status map_code(Errc code) {
  switch (code) {
    case Errc::ok: return DTOMO_OK;
    case Errc::invalid_argument: return DTOMO_ERR_INVALID_ARGUMENT;
    case Errc::invalid_phantom: return DTOMO_ERR_INVALID_PHANTOM;
    case Errc::no_disc: return DTOMO_ERR_NO_DISC;
    case Errc::axis_error: return DTOMO_ERR_AXIS;
    case Errc::incomplete_data: return DTOMO_ERR_INCOMPLETE_DATA;
    case Errc::out_of_range: return DTOMO_ERR_OUT_OF_RANGE;
    case Errc::out_of_gamut: return DTOMO_ERR_OUT_OF_GAMUT;
    case Errc::out_of_band: return DTOMO_ERR_OUT_OF_BAND;
    case Errc::empty_region: return DTOMO_ERR_EMPTY_REGION;
    case Errc::normalization: return DTOMO_ERR_NORMALIZATION;
    case Errc::singular_configuration: return DTOMO_ERR_SINGULAR;
    case Errc::no_physical_energy: return DTOMO_ERR_NO_PHYSICAL_ENERGY;
    case Errc::io_error: return DTOMO_ERR_IO;
  }
  return DTOMO_ERR_INTERNAL;
}

template <typename Fn>
dtomo_status guarded(Fn&& fn) {
  try {
    fn();
    return DTOMO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DTOMO_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DTOMO_ERR_INTERNAL;
  }
}

dtomo_status bad_argument(const char* what) {
  g_last_error = what;
  return DTOMO_ERR_INVALID_ARGUMENT;
}

PhysicsParams to_core(const dtomo_physics_params* p) {
  PhysicsParams out;
  if (!p) return out;
  out.e_max = p->e_max;
  out.r0 = p->r0;
  out.z_avg = p->z_avg;
  out.slice_thickness = p->slice_thickness;
  out.detector_area = p->detector_area;
  out.detector_standoff = p->detector_standoff;
  if (p->spectrum_csv && p->spectrum_csv[0] != '\0')
    out.spectrum = Spectrum::load_csv(p->spectrum_csv);
  else
    out.spectrum = Spectrum::kramers(p->e_max, p->spectrum_e_min);
  return out;
}

AttenuationModel to_atten(const char* mode, const dtomo_image* mu_map, double ratio) {
  AttenuationModel atten;
  atten.mode = atten_mode_from_string(mode ? mode : "none");
  atten.mu = mu_map ? &mu_map->img : nullptr;
  atten.ratio = ratio;
  return atten;
}

SigmaFit load_fit(const char* fit_path) {
  return (fit_path && fit_path[0] != '\0') ? SigmaFit::load(fit_path) : SigmaFit::default_100keV();
}

std::vector<double> copy_grid(const double* values, int n, const char* what) {
  require(values != nullptr && n > 0, Errc::invalid_argument, std::string(what) + " grid missing");
  return std::vector<double>(values, values + n);
}

}  // namespace

extern "C" {

const char* dtomo_status_name(dtomo_status status) {
  switch (status) {
    case DTOMO_OK: return "ok";
    case DTOMO_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case DTOMO_ERR_INVALID_PHANTOM: return "invalid-phantom";
    case DTOMO_ERR_NO_DISC: return "no-disc";
    case DTOMO_ERR_AXIS: return "axis-error";
    case DTOMO_ERR_INCOMPLETE_DATA: return "incomplete-data";
    case DTOMO_ERR_OUT_OF_RANGE: return "out-of-range";
    case DTOMO_ERR_OUT_OF_GAMUT: return "out-of-gamut";
    case DTOMO_ERR_OUT_OF_BAND: return "out-of-band";
    case DTOMO_ERR_EMPTY_REGION: return "empty-region";
    case DTOMO_ERR_NORMALIZATION: return "normalization-error";
    case DTOMO_ERR_SINGULAR: return "singular-configuration";
    case DTOMO_ERR_NO_PHYSICAL_ENERGY: return "no-physical-energy";
    case DTOMO_ERR_IO: return "io-error";
    case DTOMO_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* dtomo_last_error(void) { return g_last_error.c_str(); }

const char* dtomo_version(void) { return "1.0.0"; }

dtomo_status dtomo_geometry_create(double r, int n_detectors, double tunnel_gap,
                                   dtomo_geometry** out) {
  if (!out) return bad_argument("out pointer missing");
  return guarded([&] { *out = new dtomo_geometry{make_geometry(r, n_detectors, tunnel_gap)}; });
}

void dtomo_geometry_destroy(dtomo_geometry* geom) { delete geom; }

double dtomo_geometry_r(const dtomo_geometry* geom) { return geom ? geom->geom.r : 0.0; }

dtomo_status dtomo_detector_position(const dtomo_geometry* geom, double theta, double* x,
                                     double* y) {
  if (!geom || !x || !y) return bad_argument("null argument");
  return guarded([&] {
    const Vec2 d = detector_position(geom->geom, theta);
    *x = d.x;
    *y = d.y;
  });
}

dtomo_status dtomo_sample_p(const dtomo_geometry* geom, double theta, double phi, double* p) {
  if (!geom || !p) return bad_argument("null argument");
  return guarded([&] { *p = sample_p(geom->geom, theta, phi); });
}

dtomo_status dtomo_lens_area(double c1x, double c1y, double r1, double c2x, double c2y, double r2,
                             double* area) {
  if (!area) return bad_argument("null argument");
  return guarded([&] { *area = lens_area({c1x, c1y}, r1, {c2x, c2y}, r2); });
}

dtomo_status dtomo_scatter_region_area(const dtomo_geometry* geom, double p, double phi,
                                       double* area) {
  if (!geom || !area) return bad_argument("null argument");
  return guarded([&] { *area = scatter_region_area(geom->geom, p, phi); });
}

dtomo_status dtomo_validate_rtt80(const dtomo_geometry* geom, int n_p, int n_phi,
                                  int quadrature_cells, const char* report_path,
                                  const char* csv_path, dtomo_rtt_report* out) {
  if (!geom || !out) return bad_argument("null argument");
  return guarded([&] {
    const RttReport report =
        validate_rtt80(geom->geom, n_p, n_phi, quadrature_cells, csv_path != nullptr);
    if (report_path) {
      std::ofstream f(report_path);
      require(f.good(), Errc::io_error, std::string("cannot open ") + report_path);
      f << report.text();
    }
    if (csv_path) write_rtt_csv(report, csv_path);
    out->n_evaluated = report.n_evaluated;
    out->n_skipped = report.n_skipped;
    out->tunnel_area = report.tunnel_area;
    out->max_min_diff = report.max_min_diff;
    out->argmax_p_diam = report.argmax_p_diam;
    out->argmax_phi = report.argmax_phi;
  });
}

dtomo_status dtomo_phantom_create(const dtomo_geometry* geom, const char* kind,
                                  const double* center, const double* radius, double density,
                                  double smooth_width, dtomo_phantom** out) {
  if (!geom || !kind || !out) return bad_argument("null argument");
  return guarded([&] {
    PhantomParams params;
    if (center) {
      params.has_center = true;
      params.center = {center[0], center[1]};
    }
    if (radius) {
      params.has_radius = true;
      params.radius = *radius;
    }
    params.density = density;
    params.smooth_width = smooth_width;
    const PhantomKind k = phantom_kind_from_string(kind);
    require(k != PhantomKind::custom, Errc::invalid_argument,
            "use dtomo_phantom_create_custom for custom phantoms");
    *out = new dtomo_phantom{k == PhantomKind::water_bottle ? make_water_bottle(geom->geom, params)
                                                            : make_hollow_tube(geom->geom, params)};
  });
}

dtomo_status dtomo_phantom_create_custom(const dtomo_geometry* geom, const double* components,
                                         int n_components, double smooth_width,
                                         dtomo_phantom** out) {
  if (!geom || !components || !out) return bad_argument("null argument");
  if (n_components <= 0) return bad_argument("need at least one component");
  return guarded([&] {
    std::vector<PhantomComponent> comps(static_cast<size_t>(n_components));
    for (int k = 0; k < n_components; ++k) {
      comps[static_cast<size_t>(k)] = {{components[4 * k], components[4 * k + 1]},
                                       components[4 * k + 2],
                                       components[4 * k + 3]};
    }
    *out = new dtomo_phantom{make_custom(geom->geom, std::move(comps), smooth_width)};
  });
}

dtomo_status dtomo_phantom_read(const char* path, dtomo_phantom** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] { *out = new dtomo_phantom{read_phantom(path)}; });
}

dtomo_status dtomo_phantom_write(const dtomo_phantom* phantom, const char* path) {
  if (!phantom || !path) return bad_argument("null argument");
  return guarded([&] { write_phantom(phantom->spec, path); });
}

void dtomo_phantom_destroy(dtomo_phantom* phantom) { delete phantom; }

double dtomo_phantom_total_mass(const dtomo_phantom* phantom) {
  return phantom ? phantom->spec.total_mass() : 0.0;
}

int dtomo_phantom_n_components(const dtomo_phantom* phantom) {
  return phantom ? static_cast<int>(phantom->spec.components.size()) : 0;
}

dtomo_status dtomo_phantom_component(const dtomo_phantom* phantom, int index, double* out) {
  if (!phantom || !out) return bad_argument("null argument");
  if (index < 0 || index >= static_cast<int>(phantom->spec.components.size()))
    return bad_argument("component index out of range");
  const PhantomComponent& c = phantom->spec.components[static_cast<size_t>(index)];
  out[0] = c.center.x;
  out[1] = c.center.y;
  out[2] = c.radius;
  out[3] = c.density;
  return DTOMO_OK;
}

dtomo_status dtomo_phantom_disc_integral(const dtomo_phantom* phantom, double p, double phi,
                                         double* out) {
  if (!phantom || !out) return bad_argument("null argument");
  return guarded([&] { *out = analytic_disc_integral(phantom->spec, p, phi); });
}

dtomo_status dtomo_phantom_rasterize(const dtomo_phantom* phantom, const dtomo_geometry* geom,
                                     int width, int height, dtomo_image** out) {
  if (!phantom || !geom || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_image{rasterize(phantom->spec, width, height, ring_extent(geom->geom))};
  });
}

int dtomo_image_width(const dtomo_image* image) { return image ? image->img.width : 0; }
int dtomo_image_height(const dtomo_image* image) { return image ? image->img.height : 0; }

void dtomo_image_extent(const dtomo_image* image, double* xmin, double* xmax, double* ymin,
                        double* ymax) {
  if (!image) return;
  if (xmin) *xmin = image->img.extent.xmin;
  if (xmax) *xmax = image->img.extent.xmax;
  if (ymin) *ymin = image->img.extent.ymin;
  if (ymax) *ymax = image->img.extent.ymax;
}

const double* dtomo_image_data(const dtomo_image* image) {
  return image ? image->img.values.data() : nullptr;
}

dtomo_status dtomo_image_read(const char* path, dtomo_image** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] { *out = new dtomo_image{read_dtimg(path)}; });
}

dtomo_status dtomo_image_write(const dtomo_image* image, const char* path) {
  if (!image || !path) return bad_argument("null argument");
  return guarded([&] { write_dtimg(image->img, path); });
}

dtomo_status dtomo_image_write_pgm(const dtomo_image* image, const char* path) {
  if (!image || !path) return bad_argument("null argument");
  return guarded([&] { write_pgm(image->img, path); });
}

void dtomo_image_destroy(dtomo_image* image) { delete image; }

dtomo_status dtomo_image_mean_in_disc(const dtomo_image* image, double cx, double cy,
                                      double radius, double* out) {
  if (!image || !out) return bad_argument("null argument");
  return guarded([&] { *out = mean_in_disc(image->img, {cx, cy}, radius); });
}

dtomo_status dtomo_image_mean_in_annulus(const dtomo_image* image, double cx, double cy,
                                         double r_in, double r_out, double* out) {
  if (!image || !out) return bad_argument("null argument");
  return guarded([&] { *out = mean_in_annulus(image->img, {cx, cy}, r_in, r_out); });
}

int dtomo_sinogram_np(const dtomo_sinogram* sinogram) {
  return sinogram ? sinogram->sino.n_p() : 0;
}
int dtomo_sinogram_nphi(const dtomo_sinogram* sinogram) {
  return sinogram ? sinogram->sino.n_phi() : 0;
}
const double* dtomo_sinogram_p_values(const dtomo_sinogram* sinogram) {
  return sinogram ? sinogram->sino.p_values.data() : nullptr;
}
const double* dtomo_sinogram_phi_values(const dtomo_sinogram* sinogram) {
  return sinogram ? sinogram->sino.phi_values.data() : nullptr;
}
const double* dtomo_sinogram_data(const dtomo_sinogram* sinogram) {
  return sinogram ? sinogram->sino.data.data() : nullptr;
}
const char* dtomo_sinogram_quantity(const dtomo_sinogram* sinogram) {
  if (!sinogram) return "";
  static thread_local std::string name;
  name = quantity_name(sinogram->sino.quantity);
  return name.c_str();
}

dtomo_status dtomo_sinogram_read(const char* path, dtomo_sinogram** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] { *out = new dtomo_sinogram{read_sinogram_csv(path)}; });
}

dtomo_status dtomo_sinogram_write(const dtomo_sinogram* sinogram, const char* path) {
  if (!sinogram || !path) return bad_argument("null argument");
  return guarded([&] { write_sinogram_csv(sinogram->sino, path); });
}

void dtomo_sinogram_destroy(dtomo_sinogram* sinogram) { delete sinogram; }

dtomo_status dtomo_forward(const dtomo_phantom* phantom, int n_p, int n_phi,
                           dtomo_sinogram** out) {
  if (!phantom || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{
        disc_transform(phantom->spec, default_p_grid(n_p), default_phi_grid(n_phi))};
  });
}

dtomo_status dtomo_forward_grids(const dtomo_phantom* phantom, const double* p_values, int n_p,
                                 const double* phi_values, int n_phi, dtomo_sinogram** out) {
  if (!phantom || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{disc_transform(phantom->spec, copy_grid(p_values, n_p, "p"),
                                             copy_grid(phi_values, n_phi, "phi"))};
  });
}

dtomo_status dtomo_forward_image(const dtomo_image* image, double r, int n_p, int n_phi,
                                 dtomo_sinogram** out) {
  if (!image || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{
        disc_transform(image->img, default_p_grid(n_p), default_phi_grid(n_phi), r)};
  });
}

dtomo_status dtomo_add_noise(const dtomo_sinogram* sinogram, double percent, uint64_t seed,
                             dtomo_sinogram** out) {
  if (!sinogram || !out) return bad_argument("null argument");
  return guarded([&] { *out = new dtomo_sinogram{add_noise(sinogram->sino, {percent, seed})}; });
}

dtomo_status dtomo_smooth(const dtomo_sinogram* sinogram, int window, int stride,
                          dtomo_sinogram** out) {
  if (!sinogram || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{smooth_sinogram(sinogram->sino, {window, stride})};
  });
}

dtomo_status dtomo_extend(const dtomo_sinogram* sinogram, const dtomo_phantom* density,
                          dtomo_sinogram** out) {
  if (!sinogram || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{
        extend_sinogram(sinogram->sino, density ? &density->spec : nullptr)};
  });
}

dtomo_status dtomo_derivative(const dtomo_sinogram* sinogram, double h, int central,
                              dtomo_sinogram** out) {
  if (!sinogram || !out) return bad_argument("null argument");
  return guarded([&] {
    const double step = h > 0.0 ? h : sinogram->sino.p_spacing();
    *out = new dtomo_sinogram{derivative_p(sinogram->sino, step, central != 0)};
  });
}

dtomo_status dtomo_radon_image(const dtomo_image* image, const double* p_values, int n_p,
                               const double* phi_values, int n_phi, dtomo_sinogram** out) {
  if (!image || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{radon_transform(image->img, copy_grid(p_values, n_p, "p"),
                                              copy_grid(phi_values, n_phi, "phi"))};
  });
}

dtomo_status dtomo_inversion_map(const dtomo_image* image, int width, int height, double xmin,
                                 double xmax, double ymin, double ymax, dtomo_image** out) {
  if (!image || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_image{inversion_map(image->img, width, height, {xmin, xmax, ymin, ymax})};
  });
}

dtomo_status dtomo_complete_dataset(const dtomo_sinogram* sinogram, const dtomo_geometry* geom,
                                    dtomo_sinogram** out) {
  if (!sinogram || !geom || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{complete_dataset(sinogram->sino, geom->geom)};
  });
}

dtomo_status dtomo_fbp(const dtomo_sinogram* radon, const char* filter, double cutoff, int size,
                       dtomo_image** out) {
  if (!radon || !filter || !out) return bad_argument("null argument");
  return guarded([&] {
    const FilterSpec spec{filter_kind_from_string(filter), cutoff};
    *out = new dtomo_image{fbp(radon->sino, spec, size, size)};
  });
}

dtomo_status dtomo_reconstruct(const dtomo_sinogram* data, const dtomo_geometry* geom,
                               const char* filter, double cutoff, int size, int inverted_size,
                               int central, dtomo_image** out) {
  if (!data || !geom || !filter || !out) return bad_argument("null argument");
  return guarded([&] {
    const FilterSpec spec{filter_kind_from_string(filter), cutoff};
    *out = new dtomo_image{reconstruct_view(data->sino, spec, data->sino.p_spacing(), size,
                                            geom->geom, central != 0, inverted_size)};
  });
}

dtomo_status dtomo_average_views(const dtomo_phantom* phantom, const dtomo_geometry* geom,
                                 int n_p, int n_phi, int n_views, const char* filter,
                                 double cutoff, int size, int inverted_size, int central,
                                 double noise_percent, uint64_t seed, int smooth_window,
                                 int smooth_stride, dtomo_image** out) {
  if (!phantom || !geom || !filter || !out) return bad_argument("null argument");
  return guarded([&] {
    const FilterSpec spec{filter_kind_from_string(filter), cutoff};
    const auto ps = default_p_grid(n_p);
    const auto phis = default_phi_grid(n_phi);
    ViewDataHook hook;
    if (noise_percent > 0.0 || smooth_window > 1) {
      hook = [noise_percent, seed, smooth_window, smooth_stride](DiscSinogram s, int view) {
        if (noise_percent > 0.0)
          s = add_noise(s, {noise_percent, seed + 0x9e3779b97f4a7c15ULL * (view + 1)});
        if (smooth_window > 1) s = smooth_sinogram(s, {smooth_window, smooth_stride});
        return s;
      };
    }
    *out = new dtomo_image{average_views(phantom->spec, geom->geom, ps, phis, n_views, spec,
                                         ps[1] - ps[0], size, hook, central != 0, inverted_size)};
  });
}

void dtomo_physics_params_init(dtomo_physics_params* params) {
  if (!params) return;
  params->e_max = 150.0;
  params->r0 = 1.0;
  params->z_avg = 45.0;
  params->slice_thickness = 1.0;
  params->detector_area = 1.0;
  params->detector_standoff = 0.05;
  params->spectrum_e_min = 15.0;
  params->spectrum_csv = nullptr;
}

dtomo_status dtomo_scattered_energy(double e_lambda, double omega, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = scattered_energy(e_lambda, omega); });
}

dtomo_status dtomo_incident_energy(double e_s, double omega, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = incident_energy(e_s, omega); });
}

dtomo_status dtomo_omega_max(double e_max, double e_s, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = omega_max(e_max, e_s); });
}

dtomo_status dtomo_klein_nishina(double e_lambda, double omega, double r0, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = klein_nishina(e_lambda, omega, r0); });
}

dtomo_status dtomo_scatter_function(double e_lambda, double omega, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] {
    const PhysicsParams params;
    *out = scatter_function(e_lambda, omega, params);
  });
}

dtomo_status dtomo_average_weight(const dtomo_geometry* geom, double p, double phi,
                                  const dtomo_physics_params* params, const char* atten_mode,
                                  const dtomo_image* mu_map, double ratio, int cells,
                                  double* out) {
  if (!geom || !params || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = average_weight(geom->geom, p, phi, to_core(params), to_atten(atten_mode, mu_map, ratio),
                          cells);
  });
}

dtomo_status dtomo_pavg_table(const dtomo_geometry* geom, const dtomo_physics_params* params,
                              const char* atten_mode, const dtomo_image* mu_map, double ratio,
                              int n_p, int n_phi, int cells, const char* csv_path,
                              dtomo_sinogram** out) {
  if (!geom || !params || !out) return bad_argument("null argument");
  return guarded([&] {
    const DiscSinogram table =
        compute_pavg_table(geom->geom, default_p_grid(n_p), default_phi_grid(n_phi),
                           to_core(params), to_atten(atten_mode, mu_map, ratio), cells);
    if (csv_path) write_pavg_csv(table, csv_path);
    *out = new dtomo_sinogram{table};
  });
}

dtomo_status dtomo_simulate_intensity(const dtomo_phantom* phantom, const dtomo_geometry* geom,
                                      const dtomo_physics_params* params, const char* atten_mode,
                                      const dtomo_image* mu_map, double ratio, int n_p, int n_phi,
                                      int cells, dtomo_sinogram** out) {
  if (!phantom || !geom || !params || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{simulate_intensity(
        phantom->spec, geom->geom, default_p_grid(n_p), default_phi_grid(n_phi), to_core(params),
        to_atten(atten_mode, mu_map, ratio), cells)};
  });
}

dtomo_status dtomo_normalize(const dtomo_sinogram* intensity, const dtomo_geometry* geom,
                             const dtomo_physics_params* params, const char* atten_mode,
                             const dtomo_image* mu_map, double ratio, int cells,
                             dtomo_sinogram** out) {
  if (!intensity || !geom || !params || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = new dtomo_sinogram{normalize_measurements(
        intensity->sino, geom->geom, to_core(params), to_atten(atten_mode, mu_map, ratio), cells)};
  });
}

dtomo_status dtomo_sigma_e(double z, const char* fit_path, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = load_fit(fit_path).sigma_e(z); });
}

dtomo_status dtomo_estimate_z(double mu, double n_e, const char* fit_path, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = estimate_Z(mu, n_e, load_fit(fit_path)); });
}

dtomo_status dtomo_z_max(double e_keV, double* out) {
  if (!out) return bad_argument("null argument");
  return guarded([&] { *out = z_max_for_energy(e_keV); });
}

dtomo_status dtomo_slice_check(const dtomo_phantom* phantom, double phi, const double* sigmas,
                               int n_sigmas, int n_p, int fourier_cells, double* max_rel_err) {
  if (!phantom || !sigmas || !max_rel_err) return bad_argument("null argument");
  if (n_sigmas <= 0) return bad_argument("need at least one sigma");
  return guarded([&] {
    SliceCheckParams params;
    if (n_p > 0) params.n_p = n_p;
    if (fourier_cells > 0) params.fourier_cells = fourier_cells;
    *max_rel_err = fourier_slice_check(phantom->spec, phi,
                                       std::span<const double>(sigmas, static_cast<size_t>(n_sigmas)),
                                       params);
  });
}

dtomo_status dtomo_hash_file(const char* path, uint64_t* out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), Errc::io_error, std::string("cannot open ") + path);
    uint64_t hash = 1469598103934665603ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
      const std::streamsize got = in.gcount();
      for (std::streamsize k = 0; k < got; ++k) {
        hash ^= static_cast<unsigned char>(buf[k]);
        hash *= 1099511628211ULL;
      }
      if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    *out = hash;
  });
}

}  // extern "C"
