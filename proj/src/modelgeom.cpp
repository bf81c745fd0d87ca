#include "mtlab/modelgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mtlab/errors.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {

double unit_ball_volume(int n) {
  if (n < 1) fail_domain("unit_ball_volume: n must be >= 1, got " + std::to_string(n));
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double ModelSpace::horizon() const {
  if (k <= 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi * std::sqrt((n - 1.0) / k);
}

ModelSpace make_model_space(int n, double k) {
  if (n < 2) fail_domain("model space: n must be >= 2");
  if (!std::isfinite(k)) fail_domain("model space: curvature must be finite");
  return ModelSpace{n, k};
}

double sn(double k, double r) {
  if (k == 0.0) return r;
  if (k < 0.0) {
    const double a = std::sqrt(-k);
    return std::sinh(a * r) / a;
  }
  const double a = std::sqrt(k);
  return std::sin(a * r) / a;
}

double model_sphere_area(const ModelSpace& m, double r) {
  if (!(r >= 0.0)) fail_domain("model_sphere_area: radius must be nonnegative");
  if (r >= m.horizon()) fail_domain("model_sphere_area: radius at or beyond the horizon");
  return unit_sphere_area(m.n) * std::pow(sn(m.k, r), m.n - 1);
}

double model_ball_volume(const ModelSpace& m, double r) {
  if (!(r >= 0.0)) fail_domain("model_ball_volume: radius must be nonnegative");
  if (r > m.horizon()) fail_domain("model_ball_volume: radius beyond the horizon");
  if (r == 0.0) return 0.0;
  if (m.k == 0.0) return unit_ball_volume(m.n) * std::pow(r, m.n);
  if (m.n == 2) {
    // 2 pi (1 - cos) written through half-angle squares to avoid cancellation.
    const double a = std::sqrt(std::abs(m.k));
    const double h = m.k < 0.0 ? std::sinh(0.5 * a * r) : std::sin(0.5 * a * r);
    return 4.0 * std::numbers::pi * h * h / std::abs(m.k);
  }
  const double s = unit_sphere_area(m.n);
  auto area = [&](double rho) { return s * std::pow(sn(m.k, rho), m.n - 1); };
  return quad::adaptive(area, 0.0, r, quad::Tolerance{1e-10, 1e-14, 40});
}

void validate(const GrowthSamples& g) {
  const std::size_t n = g.radii.size();
  if (g.ballVolumes.size() != n) fail_input("growth samples: radii/volumes length mismatch");
  if (g.perimeters && g.perimeters->size() != n) {
    fail_input("growth samples: radii/perimeters length mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g.radii[i] > 0.0) || !std::isfinite(g.radii[i])) fail_input("growth samples: radii must be positive");
    if (i > 0 && !(g.radii[i] > g.radii[i - 1])) fail_input("growth samples: radii must be strictly increasing");
    if (!(g.ballVolumes[i] > 0.0) || !std::isfinite(g.ballVolumes[i])) {
      fail_input("growth samples: volumes must be positive");
    }
    if (i > 0 && g.ballVolumes[i] < g.ballVolumes[i - 1]) {
      fail_input("growth samples: volumes must be nondecreasing");
    }
    if (g.perimeters && (!((*g.perimeters)[i] >= 0.0) || !std::isfinite((*g.perimeters)[i]))) {
      fail_input("growth samples: perimeters must be nonnegative");
    }
  }
}

BishopGromovReport bishop_gromov_check(const GrowthSamples& g, const ModelSpace& m, double tol) {
  validate(g);
  const std::size_t count = g.radii.size();
  if (count < 2) fail_input("bishop_gromov_check: need at least 2 samples");
  if (g.radii.back() >= m.horizon()) fail_domain("bishop_gromov_check: samples beyond the horizon");

  BishopGromovReport report;
  report.perimetersChecked = g.perimeters.has_value();
  report.worstViolation = -std::numeric_limits<double>::infinity();
  auto record = [&](double violation, std::size_t index) {
    if (violation > report.worstViolation) {
      report.worstViolation = violation;
      report.worstIndex = index;
    }
  };

  std::vector<double> volRatio(count), perRatio(count);
  for (std::size_t i = 0; i < count; ++i) {
    volRatio[i] = g.ballVolumes[i] / model_ball_volume(m, g.radii[i]);
    if (g.perimeters) perRatio[i] = (*g.perimeters)[i] / model_sphere_area(m, g.radii[i]);
  }

  // Pairwise r <= R comparisons reduce to the running minimum of the ratio.
  double volMin = volRatio[0];
  double perMin = perRatio[0];
  for (std::size_t i = 1; i < count; ++i) {
    const double dv = (volRatio[i] - volMin) / volMin;
    record(dv, i);
    if (dv > tol) report.monotoneVolumeRatio = false;
    volMin = std::min(volMin, volRatio[i]);
    if (g.perimeters) {
      const double dp = perMin > 0.0 ? (perRatio[i] - perMin) / perMin : perRatio[i];
      record(dp, i);
      if (dp > tol) report.perimeterRatioMonotone = false;
      perMin = std::min(perMin, perRatio[i]);
    }
  }
  if (g.perimeters) {
    for (std::size_t i = 0; i < count; ++i) {
      const double d = (perRatio[i] - volRatio[i]) / volRatio[i];
      record(d, i);
      if (d > tol) report.perimeterLeqVolumeRatio = false;
    }
  }
  return report;
}

std::size_t decile_window(std::size_t count) {
  const std::size_t tenth = (count + 9) / 10;
  return std::min(count, std::max<std::size_t>(3, tenth));
}

WindowedEstimate asymptotic_growth_ratio(const GrowthSamples& g, int n) {
  validate(g);
  const double omega = unit_ball_volume(n);
  WindowedEstimate est;
  const std::size_t count = g.radii.size();
  if (count == 0) return est;
  est.windowSize = decile_window(count);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < est.windowSize; ++i) {
    const double ratio = g.ballVolumes[i] / (omega * std::pow(g.radii[i], n));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  est.value = lo;
  est.windowUpper = g.radii[est.windowSize - 1];
  est.spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  est.reliable = count >= 3 && est.spread <= 0.05;
  return est;
}

}  // namespace mtlab
