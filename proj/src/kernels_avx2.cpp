// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// CPU check, or from tests guarded by avx2_available().
#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "mtlab/kernels.hpp"

namespace mtlab::kernels::avx2 {
namespace {

// 2p when p is a half-integer in [0, 16], else -1.
int half_integer_code(double p) {
  const double k = 2.0 * p;
  if (k < 0.0 || k > 32.0 || k != std::floor(k)) return -1;
  return static_cast<int>(k);
}

// a^(k/2) for a >= 0 lanes.
inline __m256d pow_half(__m256d a, int k) {
  __m256d result = _mm256_set1_pd(1.0);
  __m256d base = a;
  for (int e = k / 2; e > 0; e >>= 1) {
    if (e & 1) result = _mm256_mul_pd(result, base);
    base = _mm256_mul_pd(base, base);
  }
  if (k & 1) result = _mm256_mul_pd(result, _mm256_sqrt_pd(a));
  return result;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Built on demand: namespace-scope vector constants would execute AVX code
// during static initialization on CPUs without it.
inline __m256d abs_mask() { return _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL)); }
inline __m256d sign_mask() { return _mm256_castsi256_pd(_mm256_set1_epi64x(INT64_MIN)); }

}  // namespace

double dot(std::span<const double> w, std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&x[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i + 4]), _mm256_loadu_pd(&x[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&x[i]), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += w[i] * x[i];
  return sum;
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                            double p) {
  const int k = half_integer_code(p);
  if (k < 0) return scalar::weighted_abs_pow_sum(w, x, c, p);
  const std::size_t n = x.size();
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(&x[i]), vc), abs_mask());
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), pow_half(d, k), acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += w[i] * std::pow(std::abs(x[i] - c), p);
  return sum;
}

double weighted_signed_pow_sum(std::span<const double> w, std::span<const double> x, double c,
                               double q) {
  const int k = half_integer_code(q);
  if (k < 0) return scalar::weighted_signed_pow_sum(w, x, c, q);
  const std::size_t n = x.size();
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), vc);
    const __m256d mag = pow_half(_mm256_and_pd(d, abs_mask()), k);
    const __m256d nonzero = _mm256_cmp_pd(d, zero, _CMP_NEQ_OQ);
    const __m256d signed_mag = _mm256_or_pd(mag, _mm256_and_pd(d, sign_mask()));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), _mm256_and_pd(signed_mag, nonzero), acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - c;
    if (d == 0.0) continue;
    const double mag = w[i] * std::pow(std::abs(d), q);
    sum += d > 0.0 ? mag : -mag;
  }
  return sum;
}

}  // namespace mtlab::kernels::avx2
