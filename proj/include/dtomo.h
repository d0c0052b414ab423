/* dtomo - dark-field disc-transform tomography toolkit, C API.
 *
 * All functions returning dtomo_status set a thread-local message
 * retrievable with dtomo_last_error() on failure. Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * _destroy function. Handles are opaque.
 */
#ifndef DTOMO_H
#define DTOMO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dtomo_status {
  DTOMO_OK = 0,
  DTOMO_ERR_INVALID_ARGUMENT = 1,
  DTOMO_ERR_INVALID_PHANTOM = 2,
  DTOMO_ERR_NO_DISC = 3,
  DTOMO_ERR_AXIS = 4,
  DTOMO_ERR_INCOMPLETE_DATA = 5,
  DTOMO_ERR_OUT_OF_RANGE = 6,
  DTOMO_ERR_OUT_OF_GAMUT = 7,
  DTOMO_ERR_OUT_OF_BAND = 8,
  DTOMO_ERR_EMPTY_REGION = 9,
  DTOMO_ERR_NORMALIZATION = 10,
  DTOMO_ERR_SINGULAR = 11,
  DTOMO_ERR_NO_PHYSICAL_ENERGY = 12,
  DTOMO_ERR_IO = 13,
  DTOMO_ERR_INTERNAL = 14
} dtomo_status;

const char* dtomo_status_name(dtomo_status status);
const char* dtomo_last_error(void);
const char* dtomo_version(void);

typedef struct dtomo_geometry dtomo_geometry;
typedef struct dtomo_phantom dtomo_phantom;
typedef struct dtomo_image dtomo_image;
typedef struct dtomo_sinogram dtomo_sinogram;

/* ---- scanner geometry ------------------------------------------------- */

dtomo_status dtomo_geometry_create(double r, int n_detectors, double tunnel_gap,
                                   dtomo_geometry** out);
void dtomo_geometry_destroy(dtomo_geometry* geom);
double dtomo_geometry_r(const dtomo_geometry* geom);

dtomo_status dtomo_detector_position(const dtomo_geometry* geom, double theta, double* x,
                                     double* y);
/* Sinogram coordinate of the disc through the source and the detector at
 * ring angle theta, aimed toward phi. */
dtomo_status dtomo_sample_p(const dtomo_geometry* geom, double theta, double phi, double* p);
dtomo_status dtomo_lens_area(double c1x, double c1y, double r1, double c2x, double c2y, double r2,
                             double* area);
dtomo_status dtomo_scatter_region_area(const dtomo_geometry* geom, double p, double phi,
                                       double* area);

typedef struct dtomo_rtt_report {
  int n_evaluated;
  int n_skipped;
  double tunnel_area;
  double max_min_diff;
  double argmax_p_diam;
  double argmax_phi;
} dtomo_rtt_report;

/* Disc-vs-toric-section area study over the scanning tunnel. Optional paths
 * receive the plain-text report and the per-disc CSV. */
dtomo_status dtomo_validate_rtt80(const dtomo_geometry* geom, int n_p, int n_phi,
                                  int quadrature_cells, const char* report_path,
                                  const char* csv_path, dtomo_rtt_report* out);

/* ---- phantoms ---------------------------------------------------------- */

/* kind: "water_bottle" or "hollow_tube". center (pointer to x,y) and radius
 * are optional overrides; pass NULL for the defaults. */
dtomo_status dtomo_phantom_create(const dtomo_geometry* geom, const char* kind,
                                  const double* center, const double* radius, double density,
                                  double smooth_width, dtomo_phantom** out);
/* components: n quadruples cx, cy, radius, density. */
dtomo_status dtomo_phantom_create_custom(const dtomo_geometry* geom, const double* components,
                                         int n_components, double smooth_width,
                                         dtomo_phantom** out);
dtomo_status dtomo_phantom_read(const char* path, dtomo_phantom** out);
dtomo_status dtomo_phantom_write(const dtomo_phantom* phantom, const char* path);
void dtomo_phantom_destroy(dtomo_phantom* phantom);
double dtomo_phantom_total_mass(const dtomo_phantom* phantom);
int dtomo_phantom_n_components(const dtomo_phantom* phantom);
/* out: cx, cy, radius, density. */
dtomo_status dtomo_phantom_component(const dtomo_phantom* phantom, int index, double* out);
dtomo_status dtomo_phantom_disc_integral(const dtomo_phantom* phantom, double p, double phi,
                                         double* out);
/* Raster over the ring bounding box. */
dtomo_status dtomo_phantom_rasterize(const dtomo_phantom* phantom, const dtomo_geometry* geom,
                                     int width, int height, dtomo_image** out);

/* ---- images ------------------------------------------------------------ */

int dtomo_image_width(const dtomo_image* image);
int dtomo_image_height(const dtomo_image* image);
void dtomo_image_extent(const dtomo_image* image, double* xmin, double* xmax, double* ymin,
                        double* ymax);
/* Row-major, bottom row first, width*height values. */
const double* dtomo_image_data(const dtomo_image* image);
dtomo_status dtomo_image_read(const char* path, dtomo_image** out);
dtomo_status dtomo_image_write(const dtomo_image* image, const char* path);
dtomo_status dtomo_image_write_pgm(const dtomo_image* image, const char* path);
void dtomo_image_destroy(dtomo_image* image);
dtomo_status dtomo_image_mean_in_disc(const dtomo_image* image, double cx, double cy,
                                      double radius, double* out);
dtomo_status dtomo_image_mean_in_annulus(const dtomo_image* image, double cx, double cy,
                                         double r_in, double r_out, double* out);

/* ---- sinograms ---------------------------------------------------------- */

int dtomo_sinogram_np(const dtomo_sinogram* sinogram);
int dtomo_sinogram_nphi(const dtomo_sinogram* sinogram);
const double* dtomo_sinogram_p_values(const dtomo_sinogram* sinogram);
const double* dtomo_sinogram_phi_values(const dtomo_sinogram* sinogram);
/* Row-major [phi][p]. */
const double* dtomo_sinogram_data(const dtomo_sinogram* sinogram);
const char* dtomo_sinogram_quantity(const dtomo_sinogram* sinogram);
dtomo_status dtomo_sinogram_read(const char* path, dtomo_sinogram** out);
dtomo_status dtomo_sinogram_write(const dtomo_sinogram* sinogram, const char* path);
void dtomo_sinogram_destroy(dtomo_sinogram* sinogram);

/* ---- transforms and reconstruction ------------------------------------- */

/* Exact forward disc transform on the default grids: cell-centered p on
 * [0, 1] and n_phi directions over [0, 2 pi). */
dtomo_status dtomo_forward(const dtomo_phantom* phantom, int n_p, int n_phi,
                           dtomo_sinogram** out);
dtomo_status dtomo_forward_grids(const dtomo_phantom* phantom, const double* p_values, int n_p,
                                 const double* phi_values, int n_phi, dtomo_sinogram** out);
/* Midpoint pixel quadrature of a raster density. */
dtomo_status dtomo_forward_image(const dtomo_image* image, double r, int n_p, int n_phi,
                                 dtomo_sinogram** out);

dtomo_status dtomo_add_noise(const dtomo_sinogram* sinogram, double percent, uint64_t seed,
                             dtomo_sinogram** out);
dtomo_status dtomo_smooth(const dtomo_sinogram* sinogram, int window, int stride,
                          dtomo_sinogram** out);
/* Extension across p = 0; the optional phantom supplies exact half-plane
 * limits for the jump constants. */
dtomo_status dtomo_extend(const dtomo_sinogram* sinogram, const dtomo_phantom* density,
                          dtomo_sinogram** out);
/* Negated forward difference with step h (the grid spacing); central = 1
 * switches to the centered stencil. */
dtomo_status dtomo_derivative(const dtomo_sinogram* sinogram, double h, int central,
                              dtomo_sinogram** out);
dtomo_status dtomo_radon_image(const dtomo_image* image, const double* p_values, int n_p,
                               const double* phi_values, int n_phi, dtomo_sinogram** out);
dtomo_status dtomo_inversion_map(const dtomo_image* image, int width, int height, double xmin,
                                 double xmax, double ymin, double ymax, dtomo_image** out);
dtomo_status dtomo_complete_dataset(const dtomo_sinogram* sinogram, const dtomo_geometry* geom,
                                    dtomo_sinogram** out);

/* filter: "ramlak" or "ramlak_hamming"; cutoff is a fraction of Nyquist. */
dtomo_status dtomo_fbp(const dtomo_sinogram* radon, const char* filter, double cutoff, int size,
                       dtomo_image** out);
/* Full single-view pipeline: derivative, filtered backprojection on the
 * inverted frame, plane inversion, ring support clamp. inverted_size <= 0
 * picks 2 * size. */
dtomo_status dtomo_reconstruct(const dtomo_sinogram* data, const dtomo_geometry* geom,
                               const char* filter, double cutoff, int size, int inverted_size,
                               int central, dtomo_image** out);
/* Multi-view mean. noise_percent > 0 perturbs each view's data with the
 * per-view seed derived from seed; smooth_window > 1 smooths each view
 * before the derivative. */
dtomo_status dtomo_average_views(const dtomo_phantom* phantom, const dtomo_geometry* geom,
                                 int n_p, int n_phi, int n_views, const char* filter,
                                 double cutoff, int size, int inverted_size, int central,
                                 double noise_percent, uint64_t seed, int smooth_window,
                                 int smooth_stride, dtomo_image** out);

/* ---- physics ------------------------------------------------------------ */

typedef struct dtomo_physics_params {
  double e_max;             /* keV tube endpoint */
  double r0;                /* classical electron radius scale */
  double z_avg;             /* average atomic number for the S(q) fit */
  double slice_thickness;
  double detector_area;
  double detector_standoff; /* solid-angle saturation radius */
  double spectrum_e_min;    /* low cutoff of the default bremsstrahlung shape */
  const char* spectrum_csv; /* optional tabulated spectrum, rows E_keV,intensity */
} dtomo_physics_params;

void dtomo_physics_params_init(dtomo_physics_params* params);

dtomo_status dtomo_scattered_energy(double e_lambda, double omega, double* out);
dtomo_status dtomo_incident_energy(double e_s, double omega, double* out);
dtomo_status dtomo_omega_max(double e_max, double e_s, double* out);
dtomo_status dtomo_klein_nishina(double e_lambda, double omega, double r0, double* out);
dtomo_status dtomo_scatter_function(double e_lambda, double omega, double* out);

/* atten_mode: "none", "known_mu" (mu_map required) or "straight_through"
 * (mu_map if given, else the constant transmission ratio). */
dtomo_status dtomo_average_weight(const dtomo_geometry* geom, double p, double phi,
                                  const dtomo_physics_params* params, const char* atten_mode,
                                  const dtomo_image* mu_map, double ratio, int cells,
                                  double* out);
dtomo_status dtomo_pavg_table(const dtomo_geometry* geom, const dtomo_physics_params* params,
                              const char* atten_mode, const dtomo_image* mu_map, double ratio,
                              int n_p, int n_phi, int cells, const char* csv_path,
                              dtomo_sinogram** out);
dtomo_status dtomo_simulate_intensity(const dtomo_phantom* phantom, const dtomo_geometry* geom,
                                      const dtomo_physics_params* params, const char* atten_mode,
                                      const dtomo_image* mu_map, double ratio, int n_p, int n_phi,
                                      int cells, dtomo_sinogram** out);
dtomo_status dtomo_normalize(const dtomo_sinogram* intensity, const dtomo_geometry* geom,
                             const dtomo_physics_params* params, const char* atten_mode,
                             const dtomo_image* mu_map, double ratio, int cells,
                             dtomo_sinogram** out);

/* ---- materials ----------------------------------------------------------- */

/* fit_path NULL uses the built-in 100 keV coefficients. */
dtomo_status dtomo_sigma_e(double z, const char* fit_path, double* out);
dtomo_status dtomo_estimate_z(double mu, double n_e, const char* fit_path, double* out);
dtomo_status dtomo_z_max(double e_keV, double* out);

/* ---- diagnostics ---------------------------------------------------------- */

/* Verifies the p-Fourier slice identity of the extended transform against a
 * direct 2-D Fourier quadrature of the inverted density. */
dtomo_status dtomo_slice_check(const dtomo_phantom* phantom, double phi, const double* sigmas,
                               int n_sigmas, int n_p, int fourier_cells, double* max_rel_err);

/* FNV-1a 64-bit content hash, for run manifests. */
dtomo_status dtomo_hash_file(const char* path, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* DTOMO_H */
