#include <cstdlib>
#include <string_view>

#include "mtlab/kernels.hpp"

namespace mtlab::kernels {
namespace {

Isa detect() {
  // MTLAB_FORCE_SCALAR=1 pins the reference kernels (used for A/B runs).
  if (const char* env = std::getenv("MTLAB_FORCE_SCALAR"); env && std::string_view(env) == "1") {
    return Isa::Scalar;
  }
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> w, std::span<const double> x) {
  return active_isa() == Isa::Avx2 ? avx2::dot(w, x) : scalar::dot(w, x);
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                            double p) {
  return active_isa() == Isa::Avx2 ? avx2::weighted_abs_pow_sum(w, x, c, p)
                                   : scalar::weighted_abs_pow_sum(w, x, c, p);
}

double weighted_signed_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                               double q) {
  return active_isa() == Isa::Avx2 ? avx2::weighted_signed_pow_sum(w, x, c, q)
                                   : scalar::weighted_signed_pow_sum(w, x, c, q);
}

}  // namespace mtlab::kernels
