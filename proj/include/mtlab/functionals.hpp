#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mtlab/discrete.hpp"
#include "mtlab/radial.hpp"
#include "mtlab/radial_function.hpp"
#include "mtlab/rearrange.hpp"

namespace mtlab {

// F_m(t) = e^{|t|} - sum_{j=0}^{m-2} |t|^j / j!.
double truncated_exp(int m, double t);

// log F_m(t); -inf at t = 0. Finite for every finite t.
double log_truncated_exp(int m, double t);

// Sum of positive terms held as log values.
class LogSum {
 public:
  void add_log(double logTerm);
  double log_value() const;  // -inf when empty
  double value() const;      // +inf past the double range

 private:
  double max_ = -kInfinity;
  double scaled_ = 0.0;
};

struct MTParams {
  int m = 2;
  double alpha = 0.0;  // alpha = 0 gives the zero functional
};

void validate(const MTParams& p);

// Exponent m / (m - 1) applied to |u|.
double mt_exponent(int m);

struct MTReport {
  double energy = 0.0;  // Cheeger m-energy of the input
  double functionalValue = 0.0;
  double logValue = 0.0;  // log of functionalValue, finite even on overflow
  bool overflow = false;  // functionalValue above 1e300
  bool admissible = false;  // energy <= 1
};

// int F_m(alpha |u|^{m/(m-1)}) dsigma; constant pieces exact, others by
// Gauss-Legendre per grid cell, accumulated in log space.
MTReport mt_functional(const RadialFunction& u, const MTParams& params);
MTReport mt_functional(const DiscreteFunction& u, const MTParams& params);

// m (beta s_{m-1})^{1/(m-1)}.
double mt_threshold(int m, double beta);

struct TrumpetScalingReport {
  double beta = 1.0;
  int n = 2;
  double energyRatio = 0.0;    // ||grad u||_n on the trumpet over the same on H^n
  double integralRatio = 0.0;  // MT integral on the trumpet over the same on H^n
  double expectedEnergyRatio = 0.0;
  double energyError = 0.0;  // relative
  double integralError = 0.0;
  bool holds = false;
};

// u lives on a trumpet of cone angle beta; H^n is rebuilt on the same radii.
TrumpetScalingReport trumpet_scaling_check(const RadialFunction& u, double beta, double alpha,
                                           double tol = 1e-10);

struct GradientBoundReport {
  double lhs = 0.0;  // ||grad w||_n^n
  double rhs = 0.0;  // beta^{1/(n-1)} (3(1 - 1/n))^n c^n sigma(Omega)
  double wellIntegral = 0.0;
  bool holds = false;
};

// The well w = c - u >= 0, supported in the centered ball of volume
// omegaVolume, with int w >= 3 c sigma(Omega).
GradientBoundReport better_gradient_bound(const RadialFunction& w, double c, double omegaVolume,
                                          double beta, int n, double tol = 1e-10);

struct Step2Report {
  double c = 0.0;
  double omegaVolume = 0.0;
  double C6 = 0.0;
  double gradPlus = 0.0;
  double gradMinus = 0.0;
  double wellIntegral = 0.0;      // int of the interpolated well
  double averageResidual = 0.0;   // mean of the source implied by the split
  double lemmaBound = 0.0;        // C6 c^m sigma(Omega)
  double bound = 0.0;             // sourceEnergy - lemmaBound
  bool holds = false;
};

// Split from a zero-average source of energy sourceEnergy. The parts are step
// functions; their energies are those of the level-interpolated rearrangements.
Step2Report step2_certificate(const MedianSplit& split, int m, double beta, double sourceEnergy = 1.0,
                              double tol = 1e-9);

struct Step3Report {
  double minNumeric = 0.0;
  double minClosed = 0.0;
  double argNumeric = 0.0;
  double argClosed = 0.0;
  double relativeError = 0.0;
  bool holds = false;
};

// min over t >= 0 of t^q / R - (t + c)^q, q = m / (m - 1).
Step3Report step3_envelope(int m, double R, double c);

// beta^{1/(n-1)} ((n-1)/n)^n.
double plaplacian_lower_bound_trumpet(int n, double beta);

struct PLaplacianCheck {
  double bound = 0.0;
  double numericInf = 0.0;  // best Rayleigh quotient over the test family
  double bestDecay = 0.0;
  double bestSupport = 0.0;
  bool holds = false;
};

// Rayleigh quotients of e^{-a r} (1 - r / rho)_+ on the given trumpet.
PLaplacianCheck plaplacian_numeric_check(std::shared_ptr<const RadialSpace> trumpet, double beta);

}  // namespace mtlab
