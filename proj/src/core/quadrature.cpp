#include "core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace dtomo {

namespace {

std::vector<std::pair<double, double>> compute_rule(int n) {
  std::vector<std::pair<double, double>> rule(static_cast<size_t>(n));
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[static_cast<size_t>(k)] = {-x, w};
    rule[static_cast<size_t>(n - 1 - k)] = {x, w};
  }
  return rule;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

}  // namespace dtomo
