#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mtlab/modelgeom.hpp"

namespace mtlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Grid on [0, rMax] with count + 1 nodes, r_0 = 0: uniform spacing h in the
// outer half, geometric with ratio `ratio` toward 0 where r(1 - 1/ratio) < h.
std::vector<double> radial_grid(double rMax, int count, double ratio = 1.05);

// Warped space dr^2 + g(r)^2 dtheta^2 tabulated on a grid. Stores warp and
// cumulative volume at the nodes; between nodes the volume map is the cubic
// Hermite interpolant of (V, V') and a power law on the first cell, so the
// perimeter V'(r) is continuous and exact at the nodes.
class RadialSpace {
 public:
  RadialSpace() = default;

  // radii[0] must be 0, strictly increasing; warp[i] > 0 for i >= 1;
  // volumes[0] = 0 and strictly increasing.
  static RadialSpace from_nodes(int n, std::vector<double> radii, std::vector<double> warp,
                                std::vector<double> volumes, std::string label);

  // Nodal volumes by adaptive quadrature of s_{n-1} g^{n-1} per cell.
  static RadialSpace from_warp(int n, std::vector<double> radii,
                               const std::function<double(double)>& warp, std::string label);

  // Nodal volumes from a warp table alone, integrating g^{n-1} as an
  // exponential between nodes and as a cone on the first cell.
  static RadialSpace from_warp_table(int n, std::vector<double> radii, std::vector<double> warp,
                                     std::string label);

  int dimension() const { return n_; }
  const std::string& label() const { return label_; }
  std::span<const double> radii() const { return radii_; }
  std::span<const double> warps() const { return warp_; }
  std::span<const double> nodal_volumes() const { return volume_; }
  std::span<const double> nodal_perimeters() const { return perimeter_; }
  std::size_t node_count() const { return radii_.size(); }

  double max_radius() const { return radii_.back(); }
  double capacity() const { return volume_.back(); }

  double volume(double r) const;
  // Derivative of the volume interpolant.
  double perimeter(double r) const;
  // Nodal warps interpolated by cubics between nodes.
  double warp(double r) const;

  // Inverse of volume(); exact node radius when t is a nodal volume.
  double radius_of_volume(double t) const;

 private:
  void finish();
  std::size_t cell_of_radius(double r) const;

  int n_ = 2;
  std::string label_;
  double sphere_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> warp_;
  std::vector<double> volume_;
  std::vector<double> perimeter_;
};

// Hyperbolic trumpet of dimension n and cone angle beta: g = beta^{1/(n-1)} sinh r.
struct Trumpet {
  int n = 2;
  double beta = 1.0;

  double warp(double r) const;
};

Trumpet make_trumpet(int n, double beta);

// Volume of the trumpet ball of radius r, beta * s_{n-1} * int_0^r sinh^{n-1}.
double trumpet_ball_volume(const Trumpet& t, double r);

RadialSpace trumpet_space(int n, double beta, double rMax, int M);

// Same construction on a caller-supplied grid (radii[0] = 0, increasing).
RadialSpace trumpet_space_on(int n, double beta, std::vector<double> radii);

// Euclidean (g = r) or cone (g = beta^{1/(n-1)} r) space on the standard grid.
RadialSpace cone_space(int n, double beta, double rMax, int M);

struct ProfileTable {
  std::vector<double> volumes;
  std::vector<double> perimeters;
  double totalVolume = kInfinity;
};

// Strictly increasing nonnegative volumes, nonnegative finite perimeters,
// totalVolume > 0 and not below the last volume.
void validate(const ProfileTable& f);

// Radial profile at the nodes r_1..r_M of the space.
ProfileTable profile_table(const RadialSpace& s, double totalVolume = kInfinity);

// Tabulates a closed-form profile on a log-spaced volume grid.
ProfileTable tabulate_profile(const std::function<double(double)>& phi, double tMin, double tMax,
                              int pointsPerDecade, double totalVolume = kInfinity);

// phi_sigma(t): perimeter of the centered ball of volume t.
double radial_profile(const RadialSpace& s, double t);

// Monotone (PCHIP) interpolation of a profile in log-log coordinates.
class ProfileInterpolant {
 public:
  explicit ProfileInterpolant(const ProfileTable& f);
  double operator()(double t) const;
  double min_volume() const { return logT_.empty() ? 0.0 : std::exp(logT_.front()); }
  double max_volume() const { return logT_.empty() ? 0.0 : std::exp(logT_.back()); }

 private:
  std::vector<double> logT_;
  std::vector<double> logPhi_;
  std::vector<double> slope_;
};

struct SynthesisOptions {
  double maxStep = 0.01;      // spacing cap of the output grid
  double ratio = 1.05;        // geometric refinement toward r = 0
  double rtol = 1e-12;        // integrator relative tolerance
  double seriesUntil = 1e-8;  // F value where the series start hands over
  double asymptoteSpread = 1e-2;
};

struct SynthesisResult {
  RadialSpace space;
  double alpha = 0.0;      // limit of f(t) / t^{1-1/n}
  double coneAngle = 0.0;  // alpha^n / (n^{n-1} s_{n-1})
  WindowedEstimate asymptote;
  std::size_t steps = 0;
};

// Radial space whose radial profile is f, by integrating
// F' = f(s F^n) / (n s F^{n-1}), G = F^n, g = (G')^{1/(n-1)} with s = s_{n-1}.
SynthesisResult synthesize_from_profile(const ProfileTable& f, int n,
                                        const SynthesisOptions& opts = {});

// Small-ball density V(r) / (omega_n r^n) over the smallest decile of nodes.
WindowedEstimate cone_angle(const RadialSpace& s);

struct DominationReport {
  bool dominated = false;
  bool capacityOk = false;
  double worstGap = 0.0;  // min over checked t of (Phi - phi) / phi
  double worstVolume = 0.0;
  double halfVolumeUsed = 0.0;  // largest t compared
  std::size_t checked = 0;
};

// Phi(t) >= phi_sigma(t) at every tabulated t <= totalVolume / 2.
DominationReport check_domination(const ProfileTable& phi, const RadialSpace& s,
                                  double tol = 1e-12);

enum class RatioTrend { Vanishing, Stable, Divergent };

struct RatioEstimate {
  int m = 0;
  double value = 0.0;     // windowed minimum of Phi^m / (m^m omega_m t^{m-1})
  double logSlope = 0.0;  // d log(ratio) / d log(t) over the window
  RatioTrend trend = RatioTrend::Stable;
};

struct IsoInvariants {
  int isoDimension = 0;  // smallest m with a stable positive ratio, 0 if none
  bool isoDimensionFound = false;
  double exponentEstimate = 0.0;  // 1 / (1 - d log Phi / d log t) over the window
  std::map<int, RatioEstimate> ratios;
  double cheegerSlope = 0.0;
  std::size_t windowSize = 0;
  double windowUpper = 0.0;
};

IsoInvariants iso_invariants(const ProfileTable& phi, const std::vector<int>& mRange,
                             double stableSlope = 0.05);

struct SmallVolumeBound {
  double C = 0.0;
  double eta = 0.0;
  double logSlope = 0.0;
  bool flagged = false;  // ratio Phi / t^{1-1/n} still drifting to 0 in the window
  bool holds = false;
  std::size_t windowSize = 0;
};

SmallVolumeBound small_volume_bound_check(const ProfileTable& phi, int n,
                                          double stableSlope = 0.05);

struct BallVolumeBound {
  double bound = 0.0;          // min(eta, (C r / n)^n)
  double integratedForm = 0.0;  // (C r / n)^n
  double displayedForm = 0.0;   // (n C r)^n
  double C = 0.0;
  double eta = 0.0;
  bool flagged = false;
};

BallVolumeBound ball_volume_lower_bound(const ProfileTable& phi, int n, double r);

struct DominatingTrumpet {
  int n = 2;
  double beta = 1.0;
  double delta = 1e-3;
  ProfileTable glue;
  RadialSpace space;
};

// f(t) = (1 - delta) max(m (lInf omega_m)^{1/m} t^{1-1/m}, h t) and the space
// synthesized from it.
DominatingTrumpet dominating_trumpet(double h, double lInf, int m, double delta = 1e-3);

}  // namespace mtlab
