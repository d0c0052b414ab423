#include "core/sinogram.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dtomo {

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::disc_integral: return "disc_integral";
    case Quantity::extended: return "extended";
    case Quantity::radon: return "radon";
  }
  return "unknown";
}

Quantity quantity_from_string(const std::string& name) {
  if (name == "disc_integral") return Quantity::disc_integral;
  if (name == "extended") return Quantity::extended;
  if (name == "radon") return Quantity::radon;
  fail(Errc::io_error, "unknown sinogram quantity: " + name);
}

DiscSinogram::DiscSinogram(std::vector<double> p, std::vector<double> phi, Quantity q, double ring_r)
    : p_values(std::move(p)), phi_values(std::move(phi)), quantity(q), r(ring_r) {
  data.assign(p_values.size() * phi_values.size(), 0.0);
  if (quantity == Quantity::extended) c_values.assign(phi_values.size(), 0.0);
  validate(false);
}

void DiscSinogram::validate(bool require_finite) const {
  require(!p_values.empty() && !phi_values.empty(), Errc::invalid_argument, "empty sinogram axes");
  require(data.size() == p_values.size() * phi_values.size(), Errc::invalid_argument,
          "sinogram data size does not match axes");
  for (size_t i = 1; i < p_values.size(); ++i)
    require(p_values[i] > p_values[i - 1], Errc::invalid_argument, "p axis must be ascending");
  for (size_t j = 0; j < phi_values.size(); ++j) {
    require(phi_values[j] >= 0.0 && phi_values[j] < kTwoPi, Errc::invalid_argument,
            "phi axis must lie in [0, 2pi)");
    if (j > 0)
      require(phi_values[j] > phi_values[j - 1], Errc::invalid_argument, "phi axis must be ascending");
  }
  if (quantity == Quantity::extended)
    require(c_values.size() == phi_values.size(), Errc::invalid_argument,
            "extended sinogram must carry one c value per phi");
  if (require_finite)
    for (double v : data)
      require(std::isfinite(v), Errc::invalid_argument, "sinogram contains non-finite values");
}

double DiscSinogram::p_spacing() const {
  require(p_values.size() >= 2, Errc::invalid_argument, "need at least two p samples");
  const double h = p_values[1] - p_values[0];
  for (size_t i = 1; i < p_values.size(); ++i)
    require(std::abs(p_values[i] - p_values[i - 1] - h) <= 1e-9 * std::max(1.0, std::abs(h)),
            Errc::axis_error, "p axis is not uniform");
  return h;
}

int DiscSinogram::opposite_phi_index(int iphi) const {
  double target = phi_values[static_cast<size_t>(iphi)] + kPi;
  if (target >= kTwoPi) target -= kTwoPi;
  for (size_t j = 0; j < phi_values.size(); ++j)
    if (std::abs(phi_values[j] - target) <= 1e-9) return static_cast<int>(j);
  fail(Errc::axis_error, "phi grid is not closed under phi -> phi + pi");
}

std::vector<double> default_p_grid(int n) {
  require(n >= 2, Errc::invalid_argument, "p grid needs at least two samples");
  std::vector<double> p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = (i + 0.5) / n;
  return p;
}

std::vector<double> default_phi_grid(int n) {
  require(n >= 1, Errc::invalid_argument, "phi grid needs at least one sample");
  std::vector<double> phi(static_cast<size_t>(n));
  // The sample set {2 pi (j+1)/n} maps 2 pi to 0, giving an ascending grid from 0.
  for (int j = 0; j < n; ++j) phi[static_cast<size_t>(j)] = kTwoPi * static_cast<double>(j) / n;
  return phi;
}

namespace {

void append_doubles(std::string& out, const std::vector<double>& vals) {
  char buf[64];
  for (size_t k = 0; k < vals.size(); ++k) {
    std::snprintf(buf, sizeof(buf), k == 0 ? "%.17g" : ",%.17g", vals[k]);
    out += buf;
  }
}

std::vector<double> parse_doubles(const std::string& text, const std::string& context) {
  std::vector<double> vals;
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      require(used == tok.size(), Errc::io_error, context + ": trailing characters in number");
    } catch (const std::logic_error&) {
      fail(Errc::io_error, context + ": malformed number: " + tok);
    }
  }
  return vals;
}

}  // namespace

void write_sinogram_csv(const DiscSinogram& s, const std::string& path) {
  s.validate();
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  std::string line = "# quantity=" + quantity_name(s.quantity) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "# r=%.17g\n", s.r);
  line += buf;
  line += "# p=";
  append_doubles(line, s.p_values);
  line += "\n";
  if (s.quantity == Quantity::extended) {
    line += "# c=";
    append_doubles(line, s.c_values);
    line += "\n";
  }
  out << line;
  for (int j = 0; j < s.n_phi(); ++j) {
    line.clear();
    std::snprintf(buf, sizeof(buf), "%.17g", s.phi_values[static_cast<size_t>(j)]);
    line += buf;
    for (int i = 0; i < s.n_p(); ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", s.at(j, i));
      line += buf;
    }
    line += "\n";
    out << line;
  }
  require(out.good(), Errc::io_error, "failed writing " + path);
}

DiscSinogram read_sinogram_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open " + path);
  DiscSinogram s;
  s.p_values.clear();
  std::string line;
  bool have_quantity = false, have_r = false, have_p = false;
  std::vector<double> phis;
  std::vector<double> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      const auto eq = body.find('=');
      require(eq != std::string::npos, Errc::io_error, path + ": malformed header line: " + line);
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "quantity") {
        s.quantity = quantity_from_string(value);
        have_quantity = true;
      } else if (key == "r") {
        s.r = std::stod(value);
        have_r = true;
      } else if (key == "p") {
        s.p_values = parse_doubles(value, path + " p axis");
        have_p = true;
      } else if (key == "c") {
        s.c_values = parse_doubles(value, path + " c values");
      } else {
        fail(Errc::io_error, path + ": unknown header key: " + key);
      }
      continue;
    }
    require(have_p, Errc::io_error, path + ": data row before the p header");
    std::vector<double> vals = parse_doubles(line, path + " data row");
    require(vals.size() == s.p_values.size() + 1, Errc::io_error,
            path + ": row width does not match the p axis");
    phis.push_back(vals[0]);
    rows.insert(rows.end(), vals.begin() + 1, vals.end());
  }
  require(have_quantity && have_r && have_p, Errc::io_error, path + ": missing header lines");
  require(!phis.empty(), Errc::io_error, path + ": no data rows");
  s.phi_values = std::move(phis);
  s.data = std::move(rows);
  s.validate();
  return s;
}

}  // namespace dtomo
