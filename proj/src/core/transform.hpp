#pragma once

#include <functional>
#include <vector>

#include "core/geometry.hpp"
#include "core/image.hpp"
#include "core/phantom.hpp"
#include "core/sinogram.hpp"

namespace dtomo {

// Disc transform: integrals over discs through the origin, sampled at
// sinogram coordinates p = 1/diameter. The phantom path is exact; the image
// path uses midpoint quadrature of the pixels whose centers fall inside the
// disc (accelerated with per-row prefix sums).
DiscSinogram disc_transform(const PhantomSpec& spec, const std::vector<double>& p_values,
                            const std::vector<double>& phi_values);
DiscSinogram disc_transform(const ImageGrid& img, const std::vector<double>& p_values,
                            const std::vector<double>& phi_values, double r);

// Extension across p = 0: negative p filled from (-p, phi + pi), p = 0 with
// the half-plane average, and c(phi) sgn(p) added to remove the jump. With a
// density the one-sided limits are exact half-plane integrals; without one
// they fall back to the smallest-p samples.
DiscSinogram extend_sinogram(const DiscSinogram& s, const PhantomSpec* density = nullptr);

// Negated p-derivative by forward difference with step h (the grid spacing);
// the last sample uses a backward difference. Yields radon-quantity data.
DiscSinogram derivative_p(const DiscSinogram& s, double h, bool central = false);

// Line integrals over {x . Phi = p} by sampled-line quadrature.
DiscSinogram radon_transform(const ImageGrid& img, const std::vector<double>& p_values,
                             const std::vector<double>& phi_values, double step_factor = 0.5);

// Single line integral of an arbitrary sampler, for oracles that avoid grids.
double radon_line(const std::function<double(Vec2)>& density, double p, double phi, double step,
                  double half_span);

// Weighted plane inversion: output pixel at x takes |x|^-4 times the source
// sampled at x/|x|^2; pixels with |x| < eps0 are zeroed.
ImageGrid inversion_map(const ImageGrid& src, int width, int height, const Extent& extent,
                        double eps0 = -1.0);

// Fills entries outside the boundary-intersecting set: discs covering the
// ring interior get the total-mass value, disjoint discs get 0. Entries that
// the condition requires must already be present (finite).
DiscSinogram complete_dataset(const DiscSinogram& s, const ScannerGeometry& geom);

}  // namespace dtomo
