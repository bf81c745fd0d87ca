#pragma once

#include <span>

// Dense weighted reductions used by the discrete optimizers and L^p checks.
// Each kernel has a scalar reference and an AVX2/FMA variant; the dispatching
// entry points pick one at first use from the running CPU.
namespace mtlab::kernels {

enum class Isa { Scalar, Avx2 };

// Sum_i w_i * x_i.
double dot(std::span<const double> w, std::span<const double> x);

// Sum_i w_i * |x_i - c|^p, p > 0.
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                            double p);

// Sum_i w_i * |x_i - c|^q * sign(x_i - c), q >= 0 (sign(0) = 0).
double weighted_signed_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                               double q);

Isa active_isa();
const char* isa_name(Isa isa);

// True when the AVX2 variant can run on this CPU.
bool avx2_available();

namespace scalar {
double dot(std::span<const double> w, std::span<const double> x);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                            double p);
double weighted_signed_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                               double q);
}  // namespace scalar

// Only callable when avx2_available().
namespace avx2 {
double dot(std::span<const double> w, std::span<const double> x);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                            double p);
double weighted_signed_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                               double q);
}  // namespace avx2

}  // namespace mtlab::kernels
