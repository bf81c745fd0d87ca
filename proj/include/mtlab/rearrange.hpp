#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mtlab/discrete.hpp"
#include "mtlab/radial.hpp"
#include "mtlab/radial_function.hpp"

namespace mtlab {

// Distribution data at a level s strictly between two breakpoints:
// A(s) = mu({u > s}), rate = -A'(s), perimeter = Per({u > s}).
struct LevelSample {
  double level = 0.0;
  double measure = 0.0;
  double rate = 0.0;
  double perimeter = 0.0;
};

// Tabulated distribution of a nonnegative function. Levels run from max(u)
// down to 0; every breakpoint (value taken on a set of positive measure or at
// a knot) is a level.
struct DistributionTable {
  std::vector<double> levels;           // strictly decreasing, last entry 0
  std::vector<double> measures;         // A(t_j) = mu({u > t_j})
  std::vector<double> plateauMeasures;  // mu({u = t_j}); zero for j = last
  std::vector<double> levelPerimeters;  // Per({u > t_j})
  bool hasPerimeters = false;
  // Exact evaluator between breakpoints. When empty, A is interpolated
  // linearly between breakpoints and Per({u > s}) is constant on each gap,
  // which is the convention for atomic sources.
  std::function<LevelSample(double)> interior;
  // Levels inside gaps where the interior evaluator is only piecewise smooth
  // (a level-set radius meets a grid node); quadrature panels split there.
  std::vector<double> kinks;

  bool empty() const { return levels.empty(); }
  double mass() const { return measures.empty() ? 0.0 : measures.back(); }

  // s strictly between two consecutive levels.
  LevelSample sample(double s) const;
};

DistributionTable distribution(const RadialFunction& u);
DistributionTable distribution(const MeasuredFunction& u);
DistributionTable distribution(const DiscreteFunction& u);

// Distribution of the rearrangement onto target: same A, perimeters replaced
// by the radial profile phi_target(A).
DistributionTable rearranged_distribution(const DistributionTable& d, const RadialSpace& target);

struct CoareaEnergy {
  double value = 0.0;
  bool infinite = false;
  std::size_t flatGaps = 0;  // gaps with A' = 0 and Per > 0
};

// int (-A'(s))^{1-p} l(s)^p ds by adaptive Gauss-Legendre on each gap.
CoareaEnergy coarea_gradient_norm(const DistributionTable& d, double p, double rtol = 1e-11);

struct RearrangeOptions {
  // Extra knots are inserted until the piecewise-linear representative
  // misses A at mid levels by at most this fraction of the mass.
  double massTolerance = 1e-8;
  int maxDepth = 14;
};

// Radial nonincreasing rearrangement of a radial source onto target.
RadialFunction decreasing_rearrangement(const RadialFunction& u, std::shared_ptr<const RadialSpace> target,
                                        const RearrangeOptions& opts = {});

// Atomic sources: values sorted (ties by index) onto nested centered shells,
// giving a step function with exact equimeasurability.
RadialFunction decreasing_rearrangement(const MeasuredFunction& u, std::shared_ptr<const RadialSpace> target);

struct PolyaSzegoReport {
  double lhs = 0.0;  // coarea energy of the rearrangement
  double rhs = 0.0;  // Cheeger p-energy of the source
  double sourceCoarea = 0.0;  // coarea energy of the source's own distribution
  bool lhsInfinite = false;
  bool holds = false;
};

// Continuum source; the caller certifies domination with check_domination.
PolyaSzegoReport polya_szego_check(const RadialFunction& u, const RadialSpace& target, double p,
                                   const DominationReport& certificate);

// Discrete source; domination is checked against the brute-force profile and
// the support must not exceed half the total measure.
PolyaSzegoReport polya_szego_check(const DiscreteFunction& u, const RadialSpace& target, double p);

struct MedianResult {
  double c = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

MedianResult median(const MeasuredFunction& u);

struct MedianGapReport {
  double median = 0.0;
  double mean = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// |c - mean| <= (2 / mu(X))^{1/p} ||u - mean||_p.
MedianGapReport median_average_gap_check(const MeasuredFunction& u, double p, double tol = 1e-12);

struct MedianSplit {
  double c = 0.0;
  RadialFunction uPlus;
  RadialFunction uMinus;
  double omegaVolume = 0.0;  // sigma(Omega) = mu(X) / 2
  double omegaRadius = 0.0;
};

MedianSplit double_rearrangement(const MeasuredFunction& u, std::shared_ptr<const RadialSpace> target);

struct SplitIdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double relativeError = 0.0;
  bool identityHolds = false;
  bool gradientChecked = false;
  double p = 0.0;
  double gradPlus = 0.0;   // coarea energy of the rearranged (u - c)_+
  double gradMinus = 0.0;  // coarea energy of the rearranged (c - u)_+
  double cheegerEnergy = 0.0;
  bool gradientHolds = false;
};

// int F(u) dmu = int F(u_+ + c) dsigma + int F(c - u_-) dsigma, for F(c) = 0.
SplitIdentityReport split_identity_check(const MedianSplit& split, const std::function<double(double)>& F,
                                         const MeasuredFunction& source, double tol = 1e-10);

// Adds the gradient comparison ||grad u_+||^p + ||grad u_-||^p <= Ch_p(u).
SplitIdentityReport split_identity_check(const MedianSplit& split, const std::function<double(double)>& F,
                                         const DiscreteFunction& source, double p, double tol = 1e-10);

}  // namespace mtlab
