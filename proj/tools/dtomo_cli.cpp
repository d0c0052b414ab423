// Command-line driver for the dtomo shared library.
#include <dtomo.h>

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace {

struct CliError {
  std::string message;
};

[[noreturn]] void fail_run(const std::string& message) { throw CliError{message}; }

void check(dtomo_status status) {
  if (status != DTOMO_OK)
    fail_run(std::string(dtomo_status_name(status)) + ": " + dtomo_last_error());
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { reset(); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    if (this != &o) {
      reset();
      ptr = o.ptr;
      o.ptr = nullptr;
    }
    return *this;
  }
  void reset() {
    if (ptr) Destroy(ptr);
    ptr = nullptr;
  }
  T** out() {
    reset();
    return &ptr;
  }
  T* get() const { return ptr; }
  explicit operator bool() const { return ptr != nullptr; }
};

using GeometryHandle = Handle<dtomo_geometry, dtomo_geometry_destroy>;
using PhantomHandle = Handle<dtomo_phantom, dtomo_phantom_destroy>;
using ImageHandle = Handle<dtomo_image, dtomo_image_destroy>;
using SinogramHandle = Handle<dtomo_sinogram, dtomo_sinogram_destroy>;

// Run manifest: key=value lines plus an FNV-1a hash per output file.
struct Manifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> outputs;

  void set(const std::string& key, const std::string& value) { config.emplace_back(key, value); }
  void set(const std::string& key, double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    config.emplace_back(key, buf);
  }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void add_output(const std::string& name, const std::string& path) {
    outputs.emplace_back(name, path);
  }

  void write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/manifest.txt";
    std::ofstream out(path);
    if (!out.good()) fail_run("cannot open " + path + " for writing");
    out << "subcommand=" << subcommand << "\n";
    for (const auto& [k, v] : config) out << k << "=" << v << "\n";
    for (const auto& [name, file] : outputs) {
      std::uint64_t hash = 0;
      check(dtomo_hash_file(file.c_str(), &hash));
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
      out << "output." << name << "=" << file << "\n";
      out << "hash." << name << "=" << buf << "\n";
    }
    if (!out.good()) fail_run("failed writing " + path);
  }
};

// Shared geometry flags.
struct GeometryOpts {
  double r = 6.75;
  int detectors = 360;
  double tunnel_gap = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--r", r, "detector ring parameter (> 1)")->capture_default_str();
    cmd->add_option("--detectors", detectors, "detector count on the ring")->capture_default_str();
    cmd->add_option("--tunnel-gap", tunnel_gap, "ring-to-tunnel radial gap")->capture_default_str();
  }
  GeometryHandle make(Manifest& manifest) const {
    GeometryHandle geom;
    check(dtomo_geometry_create(r, detectors, tunnel_gap, geom.out()));
    manifest.set("r", r);
    manifest.set("detectors", detectors);
    if (tunnel_gap > 0.0) manifest.set("tunnel_gap", tunnel_gap);
    return geom;
  }
};

// Shared phantom flags: a named kind or a phantom file.
struct PhantomOpts {
  std::string phantom = "water_bottle";
  std::vector<double> center;
  double radius = 0.0;
  double density = 1.0;
  double smooth_width = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--phantom", phantom, "water_bottle, hollow_tube, or a .phm file")
        ->capture_default_str();
    cmd->add_option("--center", center, "phantom center override: x y")->expected(2);
    cmd->add_option("--radius", radius, "phantom radius override");
    cmd->add_option("--density", density, "phantom density")->capture_default_str();
    cmd->add_option("--smooth-width", smooth_width, "radial transition width (0 = sharp)")
        ->capture_default_str();
  }
  PhantomHandle make(const GeometryHandle& geom, Manifest& manifest) const {
    PhantomHandle out;
    if (phantom == "water_bottle" || phantom == "hollow_tube") {
      const double* c = center.size() == 2 ? center.data() : nullptr;
      const double* rad = radius > 0.0 ? &radius : nullptr;
      check(dtomo_phantom_create(geom.get(), phantom.c_str(), c, rad, density, smooth_width,
                                 out.out()));
    } else {
      check(dtomo_phantom_read(phantom.c_str(), out.out()));
    }
    manifest.set("phantom", phantom);
    if (center.size() == 2) {
      manifest.set("center_x", center[0]);
      manifest.set("center_y", center[1]);
    }
    if (radius > 0.0) manifest.set("radius", radius);
    manifest.set("density", density);
    manifest.set("smooth_width", smooth_width);
    return out;
  }
};

struct PhysicsOpts {
  double e_max = 150.0;
  double e_min = 15.0;
  double r0 = 1.0;
  double z_avg = 45.0;
  double slice_thickness = 1.0;
  double detector_area = 1.0;
  double standoff = 0.05;
  std::string spectrum;
  std::string atten = "none";
  double ratio = 1.0;
  std::string mu_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--emax", e_max, "tube endpoint energy, keV")->capture_default_str();
    cmd->add_option("--emin", e_min, "low cutoff of the default spectrum, keV")
        ->capture_default_str();
    cmd->add_option("--slice-thickness", slice_thickness, "slice thickness s")
        ->capture_default_str();
    cmd->add_option("--detector-area", detector_area, "detector area A")->capture_default_str();
    cmd->add_option("--standoff", standoff, "solid-angle saturation radius")
        ->capture_default_str();
    cmd->add_option("--spectrum", spectrum, "tabulated spectrum CSV (E_keV,intensity)");
    cmd->add_option("--atten", atten, "attenuation mode: none, known_mu, straight_through")
        ->capture_default_str();
    cmd->add_option("--ratio", ratio, "straight-through transmission ratio")
        ->capture_default_str();
    cmd->add_option("--mu", mu_path, "attenuation map DTIMG for known_mu/straight_through");
  }
  dtomo_physics_params make(Manifest& manifest) const {
    dtomo_physics_params params;
    dtomo_physics_params_init(&params);
    params.e_max = e_max;
    params.spectrum_e_min = e_min;
    params.r0 = r0;
    params.z_avg = z_avg;
    params.slice_thickness = slice_thickness;
    params.detector_area = detector_area;
    params.detector_standoff = standoff;
    params.spectrum_csv = spectrum.empty() ? nullptr : spectrum.c_str();
    manifest.set("emax", e_max);
    manifest.set("emin", e_min);
    manifest.set("slice_thickness", slice_thickness);
    manifest.set("detector_area", detector_area);
    manifest.set("standoff", standoff);
    if (!spectrum.empty()) manifest.set("spectrum", spectrum);
    manifest.set("atten", atten);
    if (atten == "straight_through" && mu_path.empty()) manifest.set("ratio", ratio);
    if (!mu_path.empty()) manifest.set("mu", mu_path);
    return params;
  }
  ImageHandle load_mu() const {
    ImageHandle mu;
    if (!mu_path.empty()) check(dtomo_image_read(mu_path.c_str(), mu.out()));
    return mu;
  }
};

void write_image_outputs(const ImageHandle& img, const std::string& out, bool pgm,
                         Manifest& manifest) {
  check(dtomo_image_write(img.get(), out.c_str()));
  manifest.add_output("image", out);
  if (pgm) {
    const std::string preview = out + ".pgm";
    check(dtomo_image_write_pgm(img.get(), preview.c_str()));
    manifest.add_output("preview", preview);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"dtomo - dark-field disc-transform tomography toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value config file; command line takes precedence");
  app.set_version_flag("--version", dtomo_version());

  std::string outdir = ".";
  app.add_option("--outdir", outdir, "directory for the run manifest")->capture_default_str();

  // ---- phantom ----------------------------------------------------------
  auto* cmd_phantom = app.add_subcommand("phantom", "build a phantom and optionally rasterize it");
  GeometryOpts phantom_geom;
  PhantomOpts phantom_opts;
  phantom_geom.attach(cmd_phantom);
  phantom_opts.attach(cmd_phantom);
  std::vector<double> components;
  cmd_phantom->add_option("--component", components,
                          "custom component: cx cy radius density (repeatable)")
      ->expected(4)
      ->allow_extra_args(false);
  std::string phantom_out = "phantom.phm";
  cmd_phantom->add_option("--out", phantom_out, "phantom file to write")->capture_default_str();
  std::string phantom_raster;
  int phantom_size = 256;
  bool phantom_pgm = false;
  cmd_phantom->add_option("--raster", phantom_raster, "optional DTIMG raster path");
  cmd_phantom->add_option("--size", phantom_size, "raster resolution")->capture_default_str();
  cmd_phantom->add_flag("--pgm", phantom_pgm, "also write an 8-bit PGM preview");

  // ---- forward ----------------------------------------------------------
  auto* cmd_forward = app.add_subcommand("forward", "exact disc transform of a phantom");
  GeometryOpts forward_geom;
  PhantomOpts forward_phantom;
  forward_geom.attach(cmd_forward);
  forward_phantom.attach(cmd_forward);
  int forward_np = 100, forward_nphi = 360;
  std::string forward_out = "sino.csv";
  cmd_forward->add_option("--np", forward_np, "p samples on (0, 1]")->capture_default_str();
  cmd_forward->add_option("--nphi", forward_nphi, "phi samples on [0, 2pi)")->capture_default_str();
  cmd_forward->add_option("--out", forward_out, "sinogram CSV to write")->capture_default_str();

  // ---- noise ------------------------------------------------------------
  auto* cmd_noise = app.add_subcommand("noise", "multiplicative uniform noise");
  std::string noise_in, noise_out = "noisy.csv";
  double noise_percent = 10.0;
  std::uint64_t noise_seed = 0;
  cmd_noise->add_option("--in", noise_in, "input sinogram CSV")->required();
  cmd_noise->add_option("--percent", noise_percent, "noise amplitude in percent")
      ->capture_default_str();
  cmd_noise->add_option("--seed", noise_seed, "noise seed")->capture_default_str();
  cmd_noise->add_option("--out", noise_out, "output sinogram CSV")->capture_default_str();

  // ---- smooth -------------------------------------------------------------
  auto* cmd_smooth = app.add_subcommand("smooth", "moving average plus monotone cubic fit");
  std::string smooth_in, smooth_out = "smooth.csv", smooth_diag, smooth_exact;
  int smooth_window = 9, smooth_stride = 4, smooth_phi_index = 0;
  cmd_smooth->add_option("--in", smooth_in, "input sinogram CSV")->required();
  cmd_smooth->add_option("--window", smooth_window, "odd moving-average width")
      ->capture_default_str();
  cmd_smooth->add_option("--stride", smooth_stride, "subsample stride")->capture_default_str();
  cmd_smooth->add_option("--out", smooth_out, "output sinogram CSV")->capture_default_str();
  cmd_smooth->add_option("--diag", smooth_diag, "diagnostics CSV (p, raw, smoothed[, exact])");
  cmd_smooth->add_option("--phi-index", smooth_phi_index, "phi row for the diagnostics")
      ->capture_default_str();
  cmd_smooth->add_option("--exact", smooth_exact, "noise-free reference CSV for the diagnostics");

  // ---- reconstruct ----------------------------------------------------------
  auto* cmd_recon = app.add_subcommand("reconstruct", "single-view filtered backprojection");
  GeometryOpts recon_geom;
  recon_geom.attach(cmd_recon);
  std::string recon_in, recon_out = "recon.dtimg";
  std::string recon_filter = "ramlak";
  double recon_cutoff = 1.0;
  int recon_size = 256, recon_inverted = 0;
  bool recon_central = false, recon_pgm = false;
  cmd_recon->add_option("--in", recon_in, "disc-integral sinogram CSV")->required();
  cmd_recon->add_option("--filter", recon_filter, "ramlak or ramlak_hamming")
      ->capture_default_str();
  cmd_recon->add_option("--cutoff", recon_cutoff, "filter cutoff, fraction of Nyquist")
      ->capture_default_str();
  cmd_recon->add_option("--size", recon_size, "output resolution")->capture_default_str();
  cmd_recon->add_option("--inverted-size", recon_inverted,
                        "inverted-frame grid resolution (0 = 2x size)")
      ->capture_default_str();
  cmd_recon->add_flag("--central", recon_central, "central difference instead of forward");
  cmd_recon->add_flag("--pgm", recon_pgm, "also write an 8-bit PGM preview");
  cmd_recon->add_option("--out", recon_out, "output DTIMG")->capture_default_str();

  // ---- average ---------------------------------------------------------------
  auto* cmd_avg = app.add_subcommand("average", "multi-view averaged reconstruction");
  GeometryOpts avg_geom;
  PhantomOpts avg_phantom;
  avg_geom.attach(cmd_avg);
  avg_phantom.attach(cmd_avg);
  int avg_np = 100, avg_nphi = 360, avg_views = 360, avg_size = 256, avg_inverted = 0;
  std::string avg_filter = "ramlak";
  double avg_cutoff = 1.0, avg_noise = 0.0;
  std::uint64_t avg_seed = 0;
  int avg_window = 1, avg_stride = 1;
  bool avg_central = false, avg_pgm = false;
  std::string avg_out = "average.dtimg";
  cmd_avg->add_option("--np", avg_np, "p samples")->capture_default_str();
  cmd_avg->add_option("--nphi", avg_nphi, "phi samples")->capture_default_str();
  cmd_avg->add_option("--views", avg_views, "number of source positions")->capture_default_str();
  cmd_avg->add_option("--filter", avg_filter, "ramlak or ramlak_hamming")->capture_default_str();
  cmd_avg->add_option("--cutoff", avg_cutoff, "filter cutoff")->capture_default_str();
  cmd_avg->add_option("--size", avg_size, "output resolution")->capture_default_str();
  cmd_avg->add_option("--inverted-size", avg_inverted, "inverted-frame resolution (0 = 2x size)")
      ->capture_default_str();
  cmd_avg->add_option("--noise-percent", avg_noise, "per-view noise percent")
      ->capture_default_str();
  cmd_avg->add_option("--seed", avg_seed, "noise seed")->capture_default_str();
  cmd_avg->add_option("--smooth-window", avg_window, "per-view smoothing window (1 = off)")
      ->capture_default_str();
  cmd_avg->add_option("--smooth-stride", avg_stride, "per-view smoothing stride")
      ->capture_default_str();
  cmd_avg->add_flag("--central", avg_central, "central difference instead of forward");
  cmd_avg->add_flag("--pgm", avg_pgm, "also write an 8-bit PGM preview");
  cmd_avg->add_option("--out", avg_out, "output DTIMG")->capture_default_str();

  // ---- physics-weight ---------------------------------------------------------
  auto* cmd_weight = app.add_subcommand("physics-weight", "averaged intensity weight table");
  GeometryOpts weight_geom;
  PhysicsOpts weight_phys;
  weight_geom.attach(cmd_weight);
  weight_phys.attach(cmd_weight);
  int weight_np = 100, weight_nphi = 360, weight_cells = 128;
  std::string weight_out = "pavg.csv";
  cmd_weight->add_option("--np", weight_np, "p samples")->capture_default_str();
  cmd_weight->add_option("--nphi", weight_nphi, "phi samples")->capture_default_str();
  cmd_weight->add_option("--cells", weight_cells, "quadrature cells per axis")
      ->capture_default_str();
  cmd_weight->add_option("--out", weight_out, "P_avg CSV (p, phi, p_avg rows)")
      ->capture_default_str();

  // ---- normalize -----------------------------------------------------------
  auto* cmd_norm = app.add_subcommand("normalize", "divide intensities by s * P_avg");
  GeometryOpts norm_geom;
  PhysicsOpts norm_phys;
  norm_geom.attach(cmd_norm);
  norm_phys.attach(cmd_norm);
  std::string norm_in, norm_out = "dsino.csv";
  int norm_cells = 128;
  bool norm_simulate = false;
  PhantomOpts norm_phantom;
  norm_phantom.attach(cmd_norm);
  cmd_norm->add_option("--in", norm_in, "intensity sinogram CSV (omit with --simulate)");
  cmd_norm->add_flag("--simulate", norm_simulate,
                     "build the intensity forward from --phantom first");
  int norm_np = 100, norm_nphi = 360;
  cmd_norm->add_option("--np", norm_np, "p samples when simulating")->capture_default_str();
  cmd_norm->add_option("--nphi", norm_nphi, "phi samples when simulating")->capture_default_str();
  cmd_norm->add_option("--cells", norm_cells, "quadrature cells per axis")->capture_default_str();
  cmd_norm->add_option("--out", norm_out, "disc-integral sinogram CSV")->capture_default_str();

  // ---- atomic-number ----------------------------------------------------------
  auto* cmd_z = app.add_subcommand("atomic-number", "invert the cross-section fit for Z");
  double z_mu = 0.0, z_ne = 0.0;
  std::string z_image, z_fit;
  GeometryOpts z_geom;
  PhantomOpts z_phantom;
  z_geom.attach(cmd_z);
  z_phantom.attach(cmd_z);
  cmd_z->add_option("--mu", z_mu, "attenuation coefficient")->required();
  cmd_z->add_option("--ne", z_ne, "electron density (or use --image)");
  cmd_z->add_option("--image", z_image, "reconstruction DTIMG; n_e = mean over --phantom support");
  cmd_z->add_option("--fit", z_fit, "cross-section fit coefficient file");

  // ---- slice-check ---------------------------------------------------------------
  auto* cmd_slice = app.add_subcommand("slice-check", "p-Fourier slice identity residual");
  GeometryOpts slice_geom;
  PhantomOpts slice_phantom;
  slice_geom.attach(cmd_slice);
  slice_phantom.attach(cmd_slice);
  double slice_phi = 0.0, slice_tol = 2e-2;
  std::vector<double> slice_sigmas;
  int slice_np = 200, slice_cells = 2048;
  cmd_slice->add_option("--phi", slice_phi, "direction to check")->capture_default_str();
  cmd_slice->add_option("--sigma", slice_sigmas, "sigma values (default +-{0.5,1,2} * 2pi/2.1)");
  cmd_slice->add_option("--np", slice_np, "p samples")->capture_default_str();
  cmd_slice->add_option("--cells", slice_cells, "Fourier quadrature cells per axis")
      ->capture_default_str();
  cmd_slice->add_option("--tol", slice_tol, "pass threshold on the max relative error")
      ->capture_default_str();

  // ---- validate-rtt80 -----------------------------------------------------------
  auto* cmd_rtt = app.add_subcommand("validate-rtt80", "disc vs toric-section area study");
  double rtt_r = 6.75, rtt_gap = 0.375, rtt_tol = 1e-6;
  int rtt_np = 100, rtt_nphi = 360, rtt_cells = 2048, rtt_detectors = 360;
  std::string rtt_report = "rtt80_report.txt", rtt_csv;
  cmd_rtt->add_option("--r", rtt_r, "ring parameter")->capture_default_str();
  cmd_rtt->add_option("--gap", rtt_gap, "ring-to-tunnel gap")->capture_default_str();
  cmd_rtt->add_option("--detectors", rtt_detectors, "detector count")->capture_default_str();
  cmd_rtt->add_option("--np", rtt_np, "diameter samples")->capture_default_str();
  cmd_rtt->add_option("--nphi", rtt_nphi, "direction samples")->capture_default_str();
  cmd_rtt->add_option("--cells", rtt_cells, "quadrature cells per axis")->capture_default_str();
  cmd_rtt->add_option("--report", rtt_report, "plain-text report path")->capture_default_str();
  cmd_rtt->add_option("--csv", rtt_csv, "per-disc CSV path");
  cmd_rtt->add_option("--tol-rel", rtt_tol, "pass threshold relative to the tunnel area")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  Manifest manifest;

  if (cmd_phantom->parsed()) {
    manifest.subcommand = "phantom";
    GeometryHandle geom = phantom_geom.make(manifest);
    PhantomHandle spec;
    if (!components.empty()) {
      if (components.size() % 4 != 0) fail_run("--component needs cx cy radius density quadruples");
      check(dtomo_phantom_create_custom(geom.get(), components.data(),
                                        static_cast<int>(components.size() / 4),
                                        phantom_opts.smooth_width, spec.out()));
      manifest.set("phantom", "custom");
      manifest.set("components", static_cast<int>(components.size() / 4));
      manifest.set("smooth_width", phantom_opts.smooth_width);
    } else {
      spec = phantom_opts.make(geom, manifest);
    }
    check(dtomo_phantom_write(spec.get(), phantom_out.c_str()));
    manifest.add_output("phantom", phantom_out);
    if (!phantom_raster.empty()) {
      manifest.set("size", phantom_size);
      ImageHandle img;
      check(dtomo_phantom_rasterize(spec.get(), geom.get(), phantom_size, phantom_size, img.out()));
      write_image_outputs(img, phantom_raster, phantom_pgm, manifest);
    }
  } else if (cmd_forward->parsed()) {
    manifest.subcommand = "forward";
    GeometryHandle geom = forward_geom.make(manifest);
    PhantomHandle spec = forward_phantom.make(geom, manifest);
    manifest.set("np", forward_np);
    manifest.set("nphi", forward_nphi);
    SinogramHandle sino;
    check(dtomo_forward(spec.get(), forward_np, forward_nphi, sino.out()));
    check(dtomo_sinogram_write(sino.get(), forward_out.c_str()));
    manifest.add_output("sinogram", forward_out);
  } else if (cmd_noise->parsed()) {
    manifest.subcommand = "noise";
    manifest.set("in", noise_in);
    manifest.set("percent", noise_percent);
    manifest.set("seed", noise_seed);
    SinogramHandle sino;
    check(dtomo_sinogram_read(noise_in.c_str(), sino.out()));
    SinogramHandle noisy;
    check(dtomo_add_noise(sino.get(), noise_percent, noise_seed, noisy.out()));
    check(dtomo_sinogram_write(noisy.get(), noise_out.c_str()));
    manifest.add_output("sinogram", noise_out);
  } else if (cmd_smooth->parsed()) {
    manifest.subcommand = "smooth";
    manifest.set("in", smooth_in);
    manifest.set("window", smooth_window);
    manifest.set("stride", smooth_stride);
    SinogramHandle sino;
    check(dtomo_sinogram_read(smooth_in.c_str(), sino.out()));
    SinogramHandle smoothed;
    check(dtomo_smooth(sino.get(), smooth_window, smooth_stride, smoothed.out()));
    check(dtomo_sinogram_write(smoothed.get(), smooth_out.c_str()));
    manifest.add_output("sinogram", smooth_out);
    if (!smooth_diag.empty()) {
      const int np = dtomo_sinogram_np(sino.get());
      const int nphi = dtomo_sinogram_nphi(sino.get());
      if (smooth_phi_index < 0 || smooth_phi_index >= nphi) fail_run("--phi-index out of range");
      SinogramHandle exact;
      if (!smooth_exact.empty()) {
        check(dtomo_sinogram_read(smooth_exact.c_str(), exact.out()));
        if (dtomo_sinogram_np(exact.get()) != np || dtomo_sinogram_nphi(exact.get()) != nphi)
          fail_run("--exact reference grids do not match the input");
      }
      std::ofstream diag(smooth_diag);
      if (!diag.good()) fail_run("cannot open " + smooth_diag + " for writing");
      diag << (exact ? "p,raw,smoothed,exact\n" : "p,raw,smoothed\n");
      const double* ps = dtomo_sinogram_p_values(sino.get());
      const double* raw = dtomo_sinogram_data(sino.get());
      const double* fit = dtomo_sinogram_data(smoothed.get());
      const double* ref = exact ? dtomo_sinogram_data(exact.get()) : nullptr;
      char buf[160];
      for (int i = 0; i < np; ++i) {
        const size_t k = static_cast<size_t>(smooth_phi_index) * np + i;
        if (ref)
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", ps[i], raw[k], fit[k],
                        ref[k]);
        else
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", ps[i], raw[k], fit[k]);
        diag << buf;
      }
      manifest.set("phi_index", smooth_phi_index);
      manifest.add_output("diagnostics", smooth_diag);
    }
  } else if (cmd_recon->parsed()) {
    manifest.subcommand = "reconstruct";
    GeometryHandle geom = recon_geom.make(manifest);
    manifest.set("in", recon_in);
    manifest.set("filter", recon_filter);
    manifest.set("cutoff", recon_cutoff);
    manifest.set("size", recon_size);
    manifest.set("inverted_size", recon_inverted);
    manifest.set("central", recon_central ? 1 : 0);
    SinogramHandle sino;
    check(dtomo_sinogram_read(recon_in.c_str(), sino.out()));
    ImageHandle img;
    check(dtomo_reconstruct(sino.get(), geom.get(), recon_filter.c_str(), recon_cutoff, recon_size,
                            recon_inverted, recon_central ? 1 : 0, img.out()));
    write_image_outputs(img, recon_out, recon_pgm, manifest);
  } else if (cmd_avg->parsed()) {
    manifest.subcommand = "average";
    GeometryHandle geom = avg_geom.make(manifest);
    PhantomHandle spec = avg_phantom.make(geom, manifest);
    manifest.set("np", avg_np);
    manifest.set("nphi", avg_nphi);
    manifest.set("views", avg_views);
    manifest.set("filter", avg_filter);
    manifest.set("cutoff", avg_cutoff);
    manifest.set("size", avg_size);
    manifest.set("inverted_size", avg_inverted);
    manifest.set("noise_percent", avg_noise);
    manifest.set("seed", avg_seed);
    manifest.set("smooth_window", avg_window);
    manifest.set("smooth_stride", avg_stride);
    manifest.set("central", avg_central ? 1 : 0);
    ImageHandle img;
    check(dtomo_average_views(spec.get(), geom.get(), avg_np, avg_nphi, avg_views,
                              avg_filter.c_str(), avg_cutoff, avg_size, avg_inverted,
                              avg_central ? 1 : 0, avg_noise, avg_seed, avg_window, avg_stride,
                              img.out()));
    write_image_outputs(img, avg_out, avg_pgm, manifest);
  } else if (cmd_weight->parsed()) {
    manifest.subcommand = "physics-weight";
    GeometryHandle geom = weight_geom.make(manifest);
    const dtomo_physics_params params = weight_phys.make(manifest);
    ImageHandle mu = weight_phys.load_mu();
    manifest.set("np", weight_np);
    manifest.set("nphi", weight_nphi);
    manifest.set("cells", weight_cells);
    SinogramHandle table;
    check(dtomo_pavg_table(geom.get(), &params, weight_phys.atten.c_str(), mu.get(),
                           weight_phys.ratio, weight_np, weight_nphi, weight_cells,
                           weight_out.c_str(), table.out()));
    manifest.add_output("pavg", weight_out);
  } else if (cmd_norm->parsed()) {
    manifest.subcommand = "normalize";
    GeometryHandle geom = norm_geom.make(manifest);
    const dtomo_physics_params params = norm_phys.make(manifest);
    ImageHandle mu = norm_phys.load_mu();
    manifest.set("cells", norm_cells);
    SinogramHandle intensity;
    if (norm_simulate) {
      PhantomHandle spec = norm_phantom.make(geom, manifest);
      manifest.set("np", norm_np);
      manifest.set("nphi", norm_nphi);
      check(dtomo_simulate_intensity(spec.get(), geom.get(), &params, norm_phys.atten.c_str(),
                                     mu.get(), norm_phys.ratio, norm_np, norm_nphi, norm_cells,
                                     intensity.out()));
      const std::string intensity_out = norm_out + ".intensity.csv";
      check(dtomo_sinogram_write(intensity.get(), intensity_out.c_str()));
      manifest.add_output("intensity", intensity_out);
    } else {
      if (norm_in.empty()) fail_run("normalize needs --in or --simulate");
      manifest.set("in", norm_in);
      check(dtomo_sinogram_read(norm_in.c_str(), intensity.out()));
    }
    SinogramHandle normalized;
    check(dtomo_normalize(intensity.get(), geom.get(), &params, norm_phys.atten.c_str(), mu.get(),
                          norm_phys.ratio, norm_cells, normalized.out()));
    check(dtomo_sinogram_write(normalized.get(), norm_out.c_str()));
    manifest.add_output("sinogram", norm_out);
  } else if (cmd_z->parsed()) {
    manifest.subcommand = "atomic-number";
    manifest.set("mu", z_mu);
    double n_e = z_ne;
    if (!z_image.empty()) {
      GeometryHandle geom = z_geom.make(manifest);
      PhantomHandle spec = z_phantom.make(geom, manifest);
      ImageHandle img;
      check(dtomo_image_read(z_image.c_str(), img.out()));
      manifest.set("image", z_image);
      // mean over the true support: the union of positive components
      double sum = 0.0;
      double count = 0.0;
      const int n = dtomo_phantom_n_components(spec.get());
      for (int k = 0; k < n; ++k) {
        double comp[4];
        check(dtomo_phantom_component(spec.get(), k, comp));
        if (comp[3] <= 0.0) continue;
        double mean = 0.0;
        check(dtomo_image_mean_in_disc(img.get(), comp[0], comp[1], comp[2], &mean));
        sum += mean;
        count += 1.0;
      }
      if (count == 0.0) fail_run("phantom has no positive components");
      n_e = sum / count;
      manifest.set("ne_estimated", n_e);
    } else {
      if (n_e <= 0.0) fail_run("atomic-number needs --ne > 0 or --image");
      manifest.set("ne", n_e);
    }
    double z = 0.0;
    check(dtomo_estimate_z(z_mu, n_e, z_fit.empty() ? nullptr : z_fit.c_str(), &z));
    manifest.set("z", z);
    std::printf("n_e = %.6g\nZ = %.6g\n", n_e, z);
  } else if (cmd_slice->parsed()) {
    manifest.subcommand = "slice-check";
    GeometryHandle geom = slice_geom.make(manifest);
    PhantomHandle spec = slice_phantom.make(geom, manifest);
    if (slice_sigmas.empty()) {
      const double base = 2.0 * 3.14159265358979323846 / 2.1;
      slice_sigmas = {0.5 * base, -0.5 * base, base, -base, 2.0 * base, -2.0 * base};
    }
    manifest.set("phi", slice_phi);
    manifest.set("np", slice_np);
    manifest.set("cells", slice_cells);
    manifest.set("tol", slice_tol);
    double err = 0.0;
    check(dtomo_slice_check(spec.get(), slice_phi, slice_sigmas.data(),
                            static_cast<int>(slice_sigmas.size()), slice_np, slice_cells, &err));
    manifest.set("max_rel_err", err);
    std::printf("slice identity max relative error: %.6g (tolerance %.3g)\n", err, slice_tol);
    manifest.write(outdir);
    if (err >= slice_tol) fail_run("slice identity residual exceeds the tolerance");
    return 0;
  } else if (cmd_rtt->parsed()) {
    manifest.subcommand = "validate-rtt80";
    manifest.set("r", rtt_r);
    manifest.set("gap", rtt_gap);
    manifest.set("np", rtt_np);
    manifest.set("nphi", rtt_nphi);
    manifest.set("cells", rtt_cells);
    manifest.set("tol_rel", rtt_tol);
    GeometryHandle geom;
    check(dtomo_geometry_create(rtt_r, rtt_detectors, rtt_gap, geom.out()));
    dtomo_rtt_report report;
    check(dtomo_validate_rtt80(geom.get(), rtt_np, rtt_nphi, rtt_cells, rtt_report.c_str(),
                               rtt_csv.empty() ? nullptr : rtt_csv.c_str(), &report));
    manifest.add_output("report", rtt_report);
    if (!rtt_csv.empty()) manifest.add_output("areas", rtt_csv);
    std::printf(
        "evaluated %d discs (%d skipped); max over discs of the best toric mismatch: %.6g "
        "(%.3g of the tunnel area)\n",
        report.n_evaluated, report.n_skipped, report.max_min_diff,
        report.max_min_diff / report.tunnel_area);
    manifest.write(outdir);
    if (report.max_min_diff > rtt_tol * report.tunnel_area)
      fail_run("toric-section mismatch exceeds the tolerance");
    return 0;
  }

  manifest.write(outdir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
