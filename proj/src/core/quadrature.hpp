#pragma once

#include <utility>
#include <vector>

namespace dtomo {

// Gauss-Legendre nodes and weights on [-1, 1].
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

// Integrates fn over [a, b] with an n-point Gauss-Legendre rule.
template <typename Fn>
double gauss_legendre_integrate(double a, double b, int n, Fn&& fn) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (const auto& [x, w] : rule) sum += w * fn(mid + half * x);
  return sum * half;
}

}  // namespace dtomo
