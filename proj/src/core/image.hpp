#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace dtomo {

struct Extent {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  void validate() const {
    require(xmax > xmin && ymax > ymin, Errc::invalid_argument, "degenerate extent");
  }
};

// Raster of density values over a physical rectangle. Pixel (i, j) has its
// center at (xmin + (i+1/2)dx, ymin + (j+1/2)dy); row j = 0 is the bottom row.
struct ImageGrid {
  int width = 0;
  int height = 0;
  Extent extent;
  std::vector<double> values;  // row-major, bottom row first

  ImageGrid() = default;
  ImageGrid(int w, int h, const Extent& e) : width(w), height(h), extent(e) {
    require(w > 0 && h > 0, Errc::invalid_argument, "image dimensions must be positive");
    e.validate();
    values.assign(static_cast<size_t>(w) * h, 0.0);
  }

  double dx() const { return extent.width() / width; }
  double dy() const { return extent.height() / height; }
  double px(int i) const { return extent.xmin + (i + 0.5) * dx(); }
  double py(int j) const { return extent.ymin + (j + 0.5) * dy(); }
  double& at(int i, int j) { return values[static_cast<size_t>(j) * width + i]; }
  double at(int i, int j) const { return values[static_cast<size_t>(j) * width + i]; }

  // Bilinear sample at physical coordinates; zero outside the pixel-center hull.
  double bilinear(double x, double y) const;

  double min_value() const;
  double max_value() const;
  double mean() const;
};

// DTIMG: one ASCII header line "DTIMG <w> <h> <xmin> <xmax> <ymin> <ymax>\n"
// followed by w*h little-endian float32, row-major, bottom row first.
void write_dtimg(const ImageGrid& img, const std::string& path);
ImageGrid read_dtimg(const std::string& path);

// 8-bit binary PGM with affine min-max scaling, top row first for viewers.
void write_pgm(const ImageGrid& img, const std::string& path);

}  // namespace dtomo
