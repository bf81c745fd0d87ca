#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mtlab/radial.hpp"

namespace mtlab {

// Finite measure space given by atoms: value and measure per atom.
struct MeasuredFunction {
  std::vector<double> values;
  std::vector<double> measures;

  double total_measure() const;
};

void validate(const MeasuredFunction& u);

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double length = 1.0;  // d_ij, enters the discrete slope
  double weight = 1.0;  // w_ij, enters the cut perimeter
};

// Connected weighted graph with vertex measures.
class DiscreteMMS {
 public:
  struct Neighbor {
    std::size_t vertex;
    double length;
    double weight;
  };

  DiscreteMMS(std::vector<double> measures, std::vector<Edge> edges, std::string label = {});

  std::size_t size() const { return measures_.size(); }
  double measure(std::size_t i) const { return measures_[i]; }
  std::span<const double> measures() const { return measures_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(std::size_t i) const;
  double total_measure() const { return total_; }
  const std::string& label() const { return label_; }

 private:
  std::vector<double> measures_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::string label_;
  double total_ = 0.0;
};

struct DiscreteFunction {
  std::shared_ptr<const DiscreteMMS> space;
  std::vector<double> values;

  MeasuredFunction measured() const;
};

void validate(const DiscreteFunction& f);

inline constexpr std::size_t kEnumerationBudget = 24;

// Cut weight of A; vertices may repeat and appear in any order.
double perimeter(const DiscreteMMS& s, std::span<const std::size_t> A);
double perimeter(const DiscreteMMS& s, std::uint64_t mask);

// Minimum cut weight for each achievable measure of a nonempty proper subset.
ProfileTable iso_profile_bruteforce(const DiscreteMMS& s, std::size_t budget = kEnumerationBudget);

struct CheegerReport {
  double h = 0.0;
  std::vector<std::size_t> witnessSet;
};

CheegerReport cheeger_constant(const DiscreteMMS& s, std::size_t budget = kEnumerationBudget);

// lip(f)(i) = max over neighbors j of |f_i - f_j| / d_ij.
std::vector<double> discrete_slope(const DiscreteFunction& f);

// Ch_p(f) = sum_i mu_i lip(f)(i)^p.
double cheeger_energy(const DiscreteFunction& f, double p);

// inf_c sum_i mu_i |f_i - c|^p and its minimizer (p > 1: unique).
struct ShiftInfimum {
  double value = 0.0;
  double shift = 0.0;
};

ShiftInfimum shift_infimum(std::span<const double> values, std::span<const double> measures, double p);

struct SpectralGapOptions {
  int restarts = 20;
  int iterations = 400;
  std::uint64_t seed = 0;
  std::size_t budget = kEnumerationBudget;
};

// Best quotient Ch_p(f) / inf_c ||f - c||_p^p found by multistart projected
// descent; an upper estimate of lambda_p.
struct SpectralGapEstimate {
  double lambda = 0.0;
  std::vector<double> witness;
  int bestRestart = -1;
};

SpectralGapEstimate spectral_gap(const DiscreteMMS& s, double p, const SpectralGapOptions& opts = {});

double rayleigh_quotient(const DiscreteMMS& s, std::span<const double> f, double p);

struct CheegerInequalityReport {
  double h = 0.0;
  double lambdaPEstimate = 0.0;
  double bound = 0.0;  // h^p / p^p
  bool holds = false;
  std::vector<std::size_t> witnessSet;
  std::vector<double> witnessFunction;
};

CheegerInequalityReport cheeger_inequality_check(const DiscreteMMS& s, double p,
                                                 const SpectralGapOptions& opts = {},
                                                 double tol = 1e-9);

struct BuserRecord {
  double h = 0.0;
  double lambdaPEstimate = 0.0;
  double ratio = 0.0;  // lambda_p / (h + h^p)
};

BuserRecord buser_data(const DiscreteMMS& s, double p, const SpectralGapOptions& opts = {});

}  // namespace mtlab
