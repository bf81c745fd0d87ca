#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mtlab/functionals.hpp"
#include "mtlab/radial.hpp"
#include "mtlab/radial_function.hpp"

namespace mtlab {

// Moser test function: C t_0 on B(r), C n ln(R / rho) on r <= rho <= R, 0
// beyond, with C chosen so that the n-energy is at most 1 whenever
// Per(S(rho)) <= theta (1 + eta) s_{n-1} rho^{n-1} on (0, R).
struct MoserProbe {
  int n = 2;
  double theta = 1.0;
  double eta = 0.01;
  double R = 1.0;
  double r = 0.1;

  double t0() const;  // n ln(R / r)
  double C() const;
};

void validate(const MoserProbe& p);

RadialFunction moser_function(const MoserProbe& p, std::shared_ptr<const RadialSpace> space,
                              int knotsPerDecade = 200);

struct PerimeterComparison {
  bool holds = false;
  double worstRatio = 0.0;  // max of Per / (theta s_{n-1} rho^{n-1})
  double worstRadius = 0.0;
};

PerimeterComparison perimeter_comparison(const RadialSpace& s, double theta, double eta, double R);

// Largest R (up to the grid end) with the perimeter comparison on (0, R].
double moser_max_radius(const RadialSpace& s, double theta, double eta);

struct MoserEnergyReport {
  double energy = 0.0;
  double bound = 0.0;  // C^n n^{n-1} theta (1 + eta) s_{n-1} t_0, equal to 1
  bool holds = false;
  PerimeterComparison perimeter;
};

MoserEnergyReport moser_energy_bound_check(const MoserProbe& p, std::shared_ptr<const RadialSpace> space,
                                           double tol = 1e-9);

enum class Verdict { Divergent, Bounded, Inconclusive };
const char* verdict_name(Verdict v);

// DecadeHeuristic: divergent at >= 10x growth per decade of r, bounded when
// the last decade changes the value by < 1%. GrowthTrend: divergent when the
// last decade grows, bounded otherwise.
enum class VerdictRule { DecadeHeuristic, GrowthTrend };

struct ScanRow {
  double alpha = 0.0;
  double r = 0.0;
  double value = 0.0;
  double logValue = 0.0;
  double energy = 0.0;
  bool overflow = false;
};

struct AlphaVerdict {
  double alpha = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double decadeFactor = 0.0;    // value growth per decade over the last decade
  double relativeChange = 0.0;  // |v_last - v_prev| / v_prev
  double rLast = 0.0;
  double rPrev = 0.0;
};

struct ScanSettings {
  double theta = 1.0;
  double eta = 0.01;
  double R = 0.2;
  VerdictRule rule = VerdictRule::DecadeHeuristic;
  int knotsPerDecade = 200;
};

struct BlowupScan {
  std::vector<ScanRow> rows;
  std::vector<AlphaVerdict> verdicts;
  ScanSettings settings;
  int n = 2;
};

// rGrid strictly decreasing inside (0, R).
BlowupScan blowup_scan(std::shared_ptr<const RadialSpace> space, const std::vector<double>& alphaGrid,
                       const std::vector<double>& rGrid, const ScanSettings& settings);

// Probe settings for a space: theta from the cone angle, R from the
// perimeter comparison at slack eta, capped at half the grid.
ScanSettings default_scan_settings(const RadialSpace& s, double eta = 0.01);

// R 10^{-1}, ..., down to rMin, one point per decade.
std::vector<double> decade_grid(double R, double rMin);

struct BumpRow {
  double rm = 0.0;
  double doublingC = 0.0;
  double Tm = 0.0;  // (1 / ((C - 1) r_m))^{1/n}
  double energy = 0.0;
  double value = 0.0;
  double logValue = 0.0;
  double plateauBound = 0.0;  // r_m F_n(alpha T_m^{n/(n-1)})
};

struct BumpTable {
  std::vector<BumpRow> rows;  // sorted by decreasing r_m
  bool energiesOk = false;
  bool increasing = false;
};

// Each space supplies r_m = sigma(B(1)) and sigma(B(2)) <= C r_m.
BumpTable bump_sequence_check(const std::vector<std::shared_ptr<const RadialSpace>>& family, double doublingC,
                              double alpha);

// Trumpets with sigma(B(1)) = r_m; the tight doubling constant is shared.
std::vector<std::shared_ptr<const RadialSpace>> trumpet_bump_family(int n, const std::vector<double>& rms,
                                                                    int gridCount = 200);
double trumpet_doubling_constant(int n);

struct ThresholdOptions {
  double eta = 0.01;
  double rMin = 1e-12;
  double relTol = 0.01;
  int maxIterations = 40;
  VerdictRule rule = VerdictRule::GrowthTrend;
};

struct ThresholdEstimate {
  bool found = false;
  double estimate = 0.0;
  double lo = 0.0;  // last bounded alpha
  double hi = 0.0;  // last divergent alpha
  double reference = 0.0;  // n (theta s_{n-1})^{1/(n-1)} with theta the cone angle
  double coneAngle = 0.0;
  double R = 0.0;
  int iterations = 0;
  std::string note;
};

// Refuses spaces whose profile has no linear lower bound.
ThresholdEstimate threshold_estimate(std::shared_ptr<const RadialSpace> space, int n,
                                     const ThresholdOptions& opts = {});

}  // namespace mtlab
