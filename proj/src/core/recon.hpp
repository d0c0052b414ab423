#pragma once

#include <functional>

#include "core/geometry.hpp"
#include "core/image.hpp"
#include "core/phantom.hpp"
#include "core/sinogram.hpp"

namespace dtomo {

struct FilterSpec {
  enum class Kind { ramlak, ramlak_hamming };
  Kind kind = Kind::ramlak;
  double cutoff = 1.0;  // fraction of Nyquist in (0, 1]

  void validate() const {
    require(cutoff > 0.0 && cutoff <= 1.0, Errc::invalid_argument, "filter cutoff outside (0, 1]");
  }
};

FilterSpec::Kind filter_kind_from_string(const std::string& name);

// Extent of the inverted-image frame; the support of the inverted density
// lies inside the unit disc.
inline Extent inverted_frame() { return {-1.05, 1.05, -1.05, 1.05}; }

// Parallel-beam filtered backprojection of radon-quantity data. A sinogram
// covering phi in [0, 2pi) with positive p is folded to [0, pi) rows over a
// symmetric p axis; a sinogram whose p axis already spans negative values is
// backprojected row by row over its phi span.
ImageGrid fbp(const DiscSinogram& radon, const FilterSpec& filter, int width, int height,
              const Extent& extent = inverted_frame());

// Pipeline: p-derivative -> filtered backprojection on the inverted frame ->
// plane inversion onto the ring frame -> zero outside the ring disc.
// The inverted coordinate squeezes the far side of the ring into a thin
// band, so the intermediate grid defaults to twice the output resolution;
// inverted_size overrides it.
ImageGrid reconstruct_view(const DiscSinogram& data, const FilterSpec& filter, double h, int size,
                           const ScannerGeometry& geom, bool central_difference = false,
                           int inverted_size = 0);

// Per-view sinogram hook: receives the exact forward data of the rotated
// phantom and the view index; may add noise / smoothing. Identity when empty.
using ViewDataHook = std::function<DiscSinogram(DiscSinogram, int)>;

// Rotates the source around the ring center through n_views positions,
// reconstructs each view in the source-local frame, rotates the images back
// and returns the pixelwise mean. Accumulation order is fixed by view index.
ImageGrid average_views(const PhantomSpec& phantom, const ScannerGeometry& geom,
                        const std::vector<double>& p_values, const std::vector<double>& phi_values,
                        int n_views, const FilterSpec& filter, double h, int size,
                        const ViewDataHook& hook = {}, bool central_difference = false,
                        int inverted_size = 0);

// Resamples an image rotated by angle about a pivot (bilinear).
ImageGrid rotate_image(const ImageGrid& img, double angle, Vec2 about);

// Region statistics over pixel centers.
double mean_in_disc(const ImageGrid& img, Vec2 center, double radius);
double mean_in_annulus(const ImageGrid& img, Vec2 center, double r_in, double r_out);
double mean_abs_dev_in_disc(const ImageGrid& img, Vec2 center, double radius, double ref);

}  // namespace dtomo
