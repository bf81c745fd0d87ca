#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace mtlab {

// omega_n = pi^{n/2} / Gamma(n/2 + 1), volume of the Euclidean unit ball.
double unit_ball_volume(int n);

// s_{n-1} = n * omega_n, area of the unit sphere bounding the unit n-ball.
double unit_sphere_area(int n);

// Constant-curvature comparison model of dimension n and curvature k.
struct ModelSpace {
  int n = 2;
  double k = 0.0;

  // Conjugate radius: infinite for k <= 0, pi * sqrt((n - 1) / k) otherwise.
  double horizon() const;
};

ModelSpace make_model_space(int n, double k);

// sn_k(r): r, sinh(r sqrt(-k)) / sqrt(-k) or sin(r sqrt(k)) / sqrt(k).
double sn(double k, double r);

double model_sphere_area(const ModelSpace& m, double r);
double model_ball_volume(const ModelSpace& m, double r);

struct GrowthSamples {
  std::vector<double> radii;
  std::vector<double> ballVolumes;
  std::optional<std::vector<double>> perimeters;
};

void validate(const GrowthSamples& g);

struct BishopGromovReport {
  bool monotoneVolumeRatio = true;
  bool perimeterRatioMonotone = true;
  bool perimeterLeqVolumeRatio = true;
  // Largest relative amount by which any comparison is violated; <= 0 when
  // every comparison holds, exactly 0 on exact model data.
  double worstViolation = 0.0;
  std::size_t worstIndex = 0;
  bool perimetersChecked = false;
};

BishopGromovReport bishop_gromov_check(const GrowthSamples& g, const ModelSpace& m,
                                       double tol = 1e-9);

// Windowed minimum used wherever a liminf at small scale is estimated.
struct WindowedEstimate {
  double value = 0.0;
  std::size_t windowSize = 0;
  double windowUpper = 0.0;  // largest abscissa inside the window
  double spread = 0.0;       // (max - min) / max of the ratio over the window
  bool reliable = false;
};

// Number of samples in the smallest-decile window (at least 3).
std::size_t decile_window(std::size_t count);

WindowedEstimate asymptotic_growth_ratio(const GrowthSamples& g, int n);

}  // namespace mtlab
