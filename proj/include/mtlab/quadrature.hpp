#pragma once

#include <cmath>
#include <span>

namespace mtlab::quad {

// Gauss-Legendre rule on [-1, 1]; orders 1..kMaxOrder are precomputed.
inline constexpr int kMaxOrder = 32;

struct Rule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

const Rule& gauss_legendre(int order);

template <class F>
double fixed(F&& f, double a, double b, int order) {
  const Rule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return half * sum;
}

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-13;
  int maxDepth = 40;
};

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double whole, const Tolerance& tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = fixed(f, a, m, 10);
  const double right = fixed(f, m, b, 10);
  const double both = left + right;
  const double err = std::abs(both - whole);
  if (depth >= tol.maxDepth || err <= tol.abs || err <= tol.rel * std::abs(both)) {
    return both;
  }
  Tolerance half = tol;
  half.abs = 0.5 * tol.abs;
  return adapt(f, a, m, left, half, depth + 1) + adapt(f, m, b, right, half, depth + 1);
}
}  // namespace detail

// Adaptive composite Gauss-Legendre (10 points per panel, bisection
// refinement). Stops on either the absolute or the relative criterion.
template <class F>
double adaptive(F&& f, double a, double b, const Tolerance& tol = {}) {
  if (a == b) return 0.0;
  const double whole = fixed(f, a, b, 10);
  return detail::adapt(f, a, b, whole, tol, 0);
}

}  // namespace mtlab::quad
