#include "core/image.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dtomo {

double ImageGrid::bilinear(double x, double y) const {
  const double u = (x - extent.xmin) / dx() - 0.5;
  const double v = (y - extent.ymin) / dy() - 0.5;
  if (u <= -1.0 || v <= -1.0 || u >= width || v >= height) return 0.0;
  const int i0 = static_cast<int>(std::floor(u));
  const int j0 = static_cast<int>(std::floor(v));
  const double fu = u - i0;
  const double fv = v - j0;
  auto sample = [&](int i, int j) -> double {
    if (i < 0 || j < 0 || i >= width || j >= height) return 0.0;
    return at(i, j);
  };
  return (1.0 - fu) * (1.0 - fv) * sample(i0, j0) + fu * (1.0 - fv) * sample(i0 + 1, j0) +
         (1.0 - fu) * fv * sample(i0, j0 + 1) + fu * fv * sample(i0 + 1, j0 + 1);
}

double ImageGrid::min_value() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double ImageGrid::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double ImageGrid::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host assumed for DTIMG IO");

void check_finite(const ImageGrid& img) {
  for (double v : img.values)
    require(std::isfinite(v), Errc::invalid_argument, "image contains non-finite values");
}

}  // namespace

void write_dtimg(const ImageGrid& img, const std::string& path) {
  check_finite(img);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  char header[256];
  std::snprintf(header, sizeof(header), "DTIMG %d %d %.17g %.17g %.17g %.17g\n", img.width,
                img.height, img.extent.xmin, img.extent.xmax, img.extent.ymin, img.extent.ymax);
  out << header;
  std::vector<float> buf(img.values.size());
  for (size_t k = 0; k < buf.size(); ++k) buf[k] = static_cast<float>(img.values[k]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  require(out.good(), Errc::io_error, "failed writing " + path);
}

ImageGrid read_dtimg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::istringstream hs(line);
  std::string magic;
  int w = 0, h = 0;
  Extent e;
  hs >> magic >> w >> h >> e.xmin >> e.xmax >> e.ymin >> e.ymax;
  require(!hs.fail() && magic == "DTIMG", Errc::io_error, path + ": malformed DTIMG header");
  require(w > 0 && h > 0, Errc::io_error, path + ": bad DTIMG dimensions");
  ImageGrid img(w, h, e);
  std::vector<float> buf(img.values.size());
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  require(in.gcount() == static_cast<std::streamsize>(buf.size() * sizeof(float)), Errc::io_error,
          path + ": truncated DTIMG payload");
  for (size_t k = 0; k < buf.size(); ++k) img.values[k] = buf[k];
  return img;
}

void write_pgm(const ImageGrid& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  const double lo = img.min_value();
  const double hi = img.max_value();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<size_t>(img.width));
  for (int j = img.height - 1; j >= 0; --j) {
    for (int i = 0; i < img.width; ++i) {
      double v = (img.at(i, j) - lo) * scale;
      row[static_cast<size_t>(i)] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0) + 0.5);
    }
    out.write(reinterpret_cast<const char*>(row.data()), img.width);
  }
  require(out.good(), Errc::io_error, "failed writing " + path);
}

}  // namespace dtomo
