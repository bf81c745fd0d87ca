#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "mtlab/discrete.hpp"
#include "mtlab/radial.hpp"
#include "mtlab/radial_function.hpp"

namespace mtlab::testing {

// Uniform double in [lo, hi) from explicit bits, identical across platforms.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Connected graph: random spanning tree plus extra edges.
inline std::shared_ptr<const DiscreteMMS> random_graph(std::mt19937_64& rng, std::size_t n, double extraProb = 0.4,
                                                       double lo = 0.5, double hi = 1.5) {
  std::vector<double> mu(n);
  for (double& m : mu) m = uniform(rng, lo, hi);
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t parent = pick(rng, v);
    edges.push_back({parent, v, uniform(rng, lo, hi), uniform(rng, lo, hi)});
    used[parent][v] = used[v][parent] = true;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!used[a][b] && uniform(rng, 0.0, 1.0) < extraProb) {
        edges.push_back({a, b, uniform(rng, lo, hi), uniform(rng, lo, hi)});
      }
    }
  }
  return std::make_shared<const DiscreteMMS>(std::move(mu), std::move(edges));
}

// Continuous piecewise-linear radial function with random knots in
// [0, support] and values in [0, 1], vanishing at the support radius.
inline RadialFunction random_radial(std::mt19937_64& rng, std::shared_ptr<const RadialSpace> space, double support,
                                    int pieces = 6) {
  std::vector<double> r{0.0};
  for (int i = 1; i < pieces; ++i) r.push_back(uniform(rng, 0.0, support));
  std::sort(r.begin(), r.end());
  r.push_back(support);
  std::vector<double> v;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) v.push_back(uniform(rng, 0.05, 1.0));
  v.push_back(0.0);
  return RadialFunction(std::move(space), std::move(r), std::move(v));
}

// Radial nonincreasing variant.
inline RadialFunction random_decreasing_radial(std::mt19937_64& rng, std::shared_ptr<const RadialSpace> space,
                                               double support, int pieces = 6) {
  RadialFunction u = random_radial(rng, space, support, pieces);
  std::vector<double> v(u.values().begin(), u.values().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return RadialFunction(std::move(space), std::vector<double>(u.knots().begin(), u.knots().end()), std::move(v));
}

}  // namespace mtlab::testing
