#include <algorithm>
#include <cmath>
#include <string>

#include "mtlab/errors.hpp"
#include "mtlab/quadrature.hpp"
#include "mtlab/radial.hpp"

namespace mtlab {
namespace {

void require_dimension(int n) {
  if (n < 2) fail_domain("radial space: dimension must be >= 2, got " + std::to_string(n));
}

// Cubic Hermite basis on x in [0, 1] for values (va, vb) and slopes
// (pa, pb) already multiplied by the cell width.
inline double hermite(double x, double va, double vb, double ha, double hb) {
  const double x2 = x * x;
  const double x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * va + (x3 - 2 * x2 + x) * ha + (-2 * x3 + 3 * x2) * vb +
         (x3 - x2) * hb;
}

inline double hermite_slope(double x, double va, double vb, double ha, double hb) {
  const double x2 = x * x;
  return (6 * x2 - 6 * x) * (va - vb) + (3 * x2 - 4 * x + 1) * ha + (3 * x2 - 2 * x) * hb;
}

}  // namespace

std::vector<double> radial_grid(double rMax, int count, double ratio) {
  if (!(rMax > 0.0) || !std::isfinite(rMax)) fail_domain("radial_grid: rMax must be positive");
  if (count < 16) fail_domain("radial_grid: need at least 16 nodes");
  if (!(ratio > 1.0)) fail_domain("radial_grid: ratio must exceed 1");
  const double h = 2.0 * rMax / count;
  const double shrink = 1.0 - 1.0 / ratio;
  std::vector<double> nodes(static_cast<std::size_t>(count) + 1);
  double r = rMax;
  for (int k = count; k >= 1; --k) {
    nodes[static_cast<std::size_t>(k)] = r;
    r -= std::min(h, r * shrink);
  }
  nodes[0] = 0.0;
  return nodes;
}

RadialSpace RadialSpace::from_nodes(int n, std::vector<double> radii, std::vector<double> warp,
                                    std::vector<double> volumes, std::string label) {
  require_dimension(n);
  RadialSpace s;
  s.n_ = n;
  s.label_ = std::move(label);
  s.radii_ = std::move(radii);
  s.warp_ = std::move(warp);
  s.volume_ = std::move(volumes);
  s.finish();
  return s;
}

RadialSpace RadialSpace::from_warp(int n, std::vector<double> radii,
                                   const std::function<double(double)>& warp, std::string label) {
  require_dimension(n);
  if (radii.size() < 2) fail_input("radial space: need at least two nodes");
  const double sphere = unit_sphere_area(n);
  std::vector<double> g(radii.size()), v(radii.size());
  g[0] = 0.0;
  v[0] = 0.0;
  auto area = [&](double r) { return sphere * std::pow(warp(r), n - 1); };
  for (std::size_t i = 1; i < radii.size(); ++i) {
    g[i] = warp(radii[i]);
    v[i] = v[i - 1] + quad::adaptive(area, radii[i - 1], radii[i], quad::Tolerance{0.0, 1e-15, 30});
  }
  return from_nodes(n, std::move(radii), std::move(g), std::move(v), std::move(label));
}

RadialSpace RadialSpace::from_warp_table(int n, std::vector<double> radii,
                                         std::vector<double> warp, std::string label) {
  require_dimension(n);
  if (radii.size() < 2 || warp.size() != radii.size()) {
    fail_input("radial space: radii and warp must have equal length >= 2");
  }
  const double sphere = unit_sphere_area(n);
  std::vector<double> v(radii.size(), 0.0);
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(warp[i] > 0.0)) fail_input("radial space: warp must be positive away from 0");
    const double pb = sphere * std::pow(warp[i], n - 1);
    const double h = radii[i] - radii[i - 1];
    if (i == 1) {
      v[i] = pb * radii[i] / n;
      continue;
    }
    const double pa = sphere * std::pow(warp[i - 1], n - 1);
    const double lr = std::log(pb / pa);
    v[i] = v[i - 1] + (std::abs(lr) < 1e-12 ? h * 0.5 * (pa + pb) : h * (pb - pa) / lr);
  }
  return from_nodes(n, std::move(radii), std::move(warp), std::move(v), std::move(label));
}

void RadialSpace::finish() {
  const std::size_t m = radii_.size();
  if (m < 2) fail_input("radial space: need at least two nodes");
  if (warp_.size() != m || volume_.size() != m) {
    fail_input("radial space: radii, warp and volumes must have equal length");
  }
  if (radii_[0] != 0.0 || volume_[0] != 0.0) fail_input("radial space: grid must start at r = 0 with V = 0");
  sphere_ = unit_sphere_area(n_);
  perimeter_.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    if (!(radii_[i] > radii_[i - 1]) || !std::isfinite(radii_[i])) {
      fail_input("radial space: radii must be strictly increasing and finite");
    }
    if (!(warp_[i] > 0.0) || !std::isfinite(warp_[i])) fail_input("radial space: warp must be positive and finite");
    if (!(volume_[i] > volume_[i - 1]) || !std::isfinite(volume_[i])) {
      fail_input("radial space: volumes must be strictly increasing and finite");
    }
    perimeter_[i] = sphere_ * std::pow(warp_[i], n_ - 1);
  }
  // V' of the Hermite interpolant is quadratic per cell; its minimum must stay
  // positive for the volume map to be increasing.
  for (std::size_t i = 2; i < m; ++i) {
    const double h = radii_[i] - radii_[i - 1];
    const double va = volume_[i - 1], vb = volume_[i];
    const double ha = h * perimeter_[i - 1], hb = h * perimeter_[i];
    // slope(x) = a x^2 + b x + c
    const double a = 6 * (va - vb) + 3 * ha + 3 * hb;
    const double b = -6 * (va - vb) - 4 * ha - 2 * hb;
    if (a > 0.0) {
      const double x = -b / (2 * a);
      if (x > 0.0 && x < 1.0 && hermite_slope(x, va, vb, ha, hb) <= 0.0) {
        fail_input("radial space: volume map not increasing near r = " + std::to_string(radii_[i]));
      }
    }
  }
}

std::size_t RadialSpace::cell_of_radius(double r) const {
  if (!(r >= 0.0) || r > radii_.back()) {
    fail_range("radial space: radius " + std::to_string(r) + " outside [0, " +
               std::to_string(radii_.back()) + "]");
  }
  auto it = std::lower_bound(radii_.begin() + 1, radii_.end(), r);
  return static_cast<std::size_t>(it - radii_.begin());
}

double RadialSpace::volume(double r) const {
  const std::size_t i = cell_of_radius(r);
  if (r == radii_[i]) return volume_[i];
  if (i == 1) {
    const double gamma = perimeter_[1] * radii_[1] / volume_[1];
    return volume_[1] * std::pow(r / radii_[1], gamma);
  }
  const double h = radii_[i] - radii_[i - 1];
  const double x = (r - radii_[i - 1]) / h;
  return hermite(x, volume_[i - 1], volume_[i], h * perimeter_[i - 1], h * perimeter_[i]);
}

double RadialSpace::perimeter(double r) const {
  const std::size_t i = cell_of_radius(r);
  if (r == radii_[i]) return perimeter_[i];
  if (r == 0.0) return 0.0;
  if (i == 1) {
    const double gamma = perimeter_[1] * radii_[1] / volume_[1];
    return perimeter_[1] * std::pow(r / radii_[1], gamma - 1.0);
  }
  const double h = radii_[i] - radii_[i - 1];
  const double x = (r - radii_[i - 1]) / h;
  return hermite_slope(x, volume_[i - 1], volume_[i], h * perimeter_[i - 1], h * perimeter_[i]) / h;
}

double RadialSpace::warp(double r) const {
  const std::size_t i = cell_of_radius(r);
  if (r == radii_[i]) return warp_[i];
  if (i == 1 || radii_.size() < 4) return std::pow(perimeter(r) / sphere_, 1.0 / (n_ - 1));
  // Cubic Lagrange through four nodal warps; reproduces g = r exactly.
  const std::size_t j0 = std::min(i - 2, radii_.size() - 4);
  double sum = 0.0;
  for (std::size_t a = j0; a < j0 + 4; ++a) {
    double basis = 1.0;
    for (std::size_t b = j0; b < j0 + 4; ++b) {
      if (b != a) basis *= (r - radii_[b]) / (radii_[a] - radii_[b]);
    }
    sum += basis * warp_[a];
  }
  return sum;
}

double RadialSpace::radius_of_volume(double t) const {
  if (!(t >= 0.0) || t > volume_.back()) {
    fail_range("radial space: volume " + std::to_string(t) + " outside [0, " +
               std::to_string(volume_.back()) + "]");
  }
  auto it = std::lower_bound(volume_.begin(), volume_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - volume_.begin());
  if (*it == t) return radii_[i];
  if (i == 1) {
    const double gamma = perimeter_[1] * radii_[1] / volume_[1];
    return radii_[1] * std::pow(t / volume_[1], 1.0 / gamma);
  }
  const double a = radii_[i - 1], b = radii_[i];
  const double h = b - a;
  const double va = volume_[i - 1], vb = volume_[i];
  const double ha = h * perimeter_[i - 1], hb = h * perimeter_[i];
  double lo = 0.0, hi = 1.0;
  double x = (t - va) / (vb - va);
  for (int it2 = 0; it2 < 100; ++it2) {
    const double f = hermite(x, va, vb, ha, hb) - t;
    if (f > 0.0) hi = x; else lo = x;
    const double df = hermite_slope(x, va, vb, ha, hb);
    double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 || hi - lo <= 1e-16) {
      x = next;
      break;
    }
    x = next;
  }
  return a + h * x;
}

double Trumpet::warp(double r) const { return std::pow(beta, 1.0 / (n - 1)) * std::sinh(r); }

Trumpet make_trumpet(int n, double beta) {
  require_dimension(n);
  if (!(beta > 0.0 && beta <= 1.0)) fail_domain("trumpet: cone angle must lie in (0, 1]");
  return Trumpet{n, beta};
}

double trumpet_ball_volume(const Trumpet& t, double r) {
  const double sphere = unit_sphere_area(t.n);
  if (t.n == 2) {
    const double s = std::sinh(0.5 * r);
    return t.beta * sphere * 2.0 * s * s;
  }
  auto f = [&](double rho) { return std::pow(std::sinh(rho), t.n - 1); };
  return t.beta * sphere * quad::adaptive(f, 0.0, r, quad::Tolerance{0.0, 1e-15, 40});
}

RadialSpace trumpet_space(int n, double beta, double rMax, int M) {
  return trumpet_space_on(n, beta, radial_grid(rMax, M));
}

RadialSpace trumpet_space_on(int n, double beta, std::vector<double> radii) {
  const Trumpet t = make_trumpet(n, beta);
  const double sphere = unit_sphere_area(n);
  std::vector<double> g(radii.size(), 0.0), v(radii.size(), 0.0);
  auto f = [&](double rho) { return std::pow(std::sinh(rho), n - 1); };
  double acc = 0.0;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    g[i] = t.warp(radii[i]);
    if (n == 2) {
      v[i] = trumpet_ball_volume(t, radii[i]);
    } else {
      acc += quad::adaptive(f, radii[i - 1], radii[i], quad::Tolerance{0.0, 1e-15, 30});
      v[i] = beta * sphere * acc;
    }
  }
  return RadialSpace::from_nodes(n, std::move(radii), std::move(g), std::move(v),
                                 "trumpet(n=" + std::to_string(n) + ",beta=" + std::to_string(beta) + ")");
}

RadialSpace cone_space(int n, double beta, double rMax, int M) {
  require_dimension(n);
  if (!(beta > 0.0)) fail_domain("cone space: cone angle must be positive");
  std::vector<double> radii = radial_grid(rMax, M);
  const double omega = unit_ball_volume(n);
  const double scale = std::pow(beta, 1.0 / (n - 1));
  std::vector<double> g(radii.size(), 0.0), v(radii.size(), 0.0);
  for (std::size_t i = 1; i < radii.size(); ++i) {
    g[i] = scale * radii[i];
    v[i] = beta * omega * std::pow(radii[i], n);
  }
  return RadialSpace::from_nodes(n, std::move(radii), std::move(g), std::move(v),
                                 "cone(n=" + std::to_string(n) + ",beta=" + std::to_string(beta) + ")");
}

}  // namespace mtlab
