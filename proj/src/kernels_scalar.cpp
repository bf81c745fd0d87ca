#include <cmath>

#include "mtlab/kernels.hpp"

namespace mtlab::kernels::scalar {

double dot(std::span<const double> w, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * x[i];
  return sum;
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                            double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(std::abs(x[i] - c), p);
  return sum;
}

double weighted_signed_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                               double q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - c;
    if (d == 0.0) continue;
    const double mag = w[i] * std::pow(std::abs(d), q);
    sum += d > 0.0 ? mag : -mag;
  }
  return sum;
}

}  // namespace mtlab::kernels::scalar
