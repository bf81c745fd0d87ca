#include <boost/math/special_functions/factorials.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mtlab/errors.hpp"
#include "mtlab/functionals.hpp"
#include "mtlab/modelgeom.hpp"
#include "support.hpp"

using namespace mtlab;
using mtlab::testing::rel_err;
using mtlab::testing::uniform;
using std::numbers::pi;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// e^t - sum_{j < m-1} t^j / j! in 50-digit arithmetic; the tail series
// below 1 where the subtraction would cancel.
Big truncated_exp_big(int m, double t) {
  const Big x = std::abs(t);
  if (x < 1) {
    Big term = 1, sum = 0;
    for (int j = 1; j <= m - 1; ++j) term *= x / j;
    for (int j = m; j < m + 60; ++j) {
      sum += term;
      term *= x / j;
    }
    return sum;
  }
  Big sum = exp(x);
  Big term = 1;
  for (int j = 0; j <= m - 2; ++j) {
    sum -= term;
    term *= x / (j + 1);
  }
  return sum;
}

double truncated_exp_oracle(int m, double t) { return truncated_exp_big(m, t).convert_to<double>(); }

double log_truncated_exp_oracle(int m, double t) { return log(truncated_exp_big(m, t)).convert_to<double>(); }

std::shared_ptr<const RadialSpace> trumpet(int n, double beta, double rMax = 4.0) {
  return std::make_shared<const RadialSpace>(trumpet_space(n, beta, rMax, 400));
}

}  // namespace

TEST_SUITE("functionals") {
  TEST_CASE("truncated exponential against a multiprecision oracle") {
    CHECK(truncated_exp(2, 1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));
    CHECK(truncated_exp(3, 1.0) == doctest::Approx(std::numbers::e - 2.0).epsilon(1e-15));
    for (int m = 2; m <= 6; ++m) {
      CHECK(truncated_exp(m, 0.0) == 0.0);
      for (double t : {1e-300, 1e-12, 1e-6, 1e-3, 0.01, 0.3, 1.0, 2.5, 7.0, 15.0, 33.0, 120.0, 600.0}) {
        CAPTURE(m);
        CAPTURE(t);
        CHECK(rel_err(truncated_exp(m, t), truncated_exp_oracle(m, t)) <= 4e-15);
        CHECK(truncated_exp(m, -t) == truncated_exp(m, t));
        CHECK(rel_err(log_truncated_exp(m, t), log_truncated_exp_oracle(m, t)) <= 4e-15);
      }
    }
  }

  TEST_CASE("truncated exponential shape") {
    for (int m = 2; m <= 5; ++m) {
      double prev = 0.0;
      for (double t = 1e-4; t < 40.0; t *= 1.1) {
        const double f = truncated_exp(m, t);
        CHECK(f > prev);
        prev = f;
      }
      CHECK(truncated_exp(m, 60.0) / std::exp(60.0) == doctest::Approx(1.0).epsilon(1e-20));
      // Past the double range only the log survives, and tends to t.
      CHECK(std::isinf(truncated_exp(m, 800.0)));
      CHECK(log_truncated_exp(m, 800.0) == doctest::Approx(800.0).epsilon(1e-15));
      CHECK(log_truncated_exp(m, 1e6) == doctest::Approx(1e6).epsilon(1e-15));
    }
  }

  TEST_CASE("log sum") {
    LogSum s;
    CHECK(std::isinf(s.log_value()));
    CHECK(s.value() == 0.0);
    s.add_log(std::log(2.0));
    s.add_log(std::log(3.0));
    CHECK(s.value() == doctest::Approx(5.0).epsilon(1e-15));
    LogSum big;
    big.add_log(1000.0);
    big.add_log(1000.0);
    CHECK(big.log_value() == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
    CHECK(std::isinf(big.value()));
  }

  TEST_CASE("thresholds") {
    CHECK(mt_threshold(2, 1.0) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(mt_threshold(2, 0.5) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(mt_threshold(3, 1.0) == doctest::Approx(3.0 * std::sqrt(4.0 * pi)).epsilon(1e-15));
    CHECK(mt_threshold(2, 1e-9) < 1e-7);
    CHECK_THROWS_AS(mt_threshold(2, 0.0), DomainError);
    CHECK_THROWS_AS(mt_threshold(2, 1.5), DomainError);
    CHECK_THROWS_AS(mt_threshold(1, 0.5), DomainError);
    CHECK(mt_exponent(2) == 2.0);
    CHECK(mt_exponent(4) == doctest::Approx(4.0 / 3.0));
  }

  TEST_CASE("functional of simple inputs") {
    auto h = trumpet(2, 1.0);
    CHECK(mt_functional(RadialFunction::zero(h), MTParams{2, 3.0}).functionalValue == 0.0);
    const double rho = 0.7, c = 1.3, alpha = 2.0;
    const RadialFunction step(h, {0.0, rho}, {c, c});
    const MTReport r = mt_functional(step, MTParams{2, alpha});
    CHECK(r.functionalValue == doctest::Approx(h->volume(rho) * std::expm1(alpha * c * c)).epsilon(1e-13));
    CHECK_FALSE(r.admissible);
    const MTReport huge = mt_functional(RadialFunction(h, {0.0, rho}, {40.0, 40.0}), MTParams{2, 1.0});
    CHECK(huge.overflow);
    CHECK(huge.logValue == doctest::Approx(1600.0 + std::log(h->volume(rho))).epsilon(1e-14));
    CHECK(mt_functional(step, MTParams{2, 0.0}).functionalValue == 0.0);
    CHECK_THROWS_AS(mt_functional(step, MTParams{2, -1.0}), DomainError);
  }

  TEST_CASE("functional of a cone on the plane") {
    // u = 1 - r on the unit disk, m = 2: 2 pi int_0^1 (e^{a (1-r)^2} - 1) r dr.
    auto plane = std::make_shared<const RadialSpace>(cone_space(2, 1.0, 2.0, 400));
    const RadialFunction u(plane, {0.0, 1.0}, {1.0, 0.0});
    const double a = 1.5;
    double ref = 0.0;
    const int N = 200000;
    for (int k = 0; k < N; ++k) {
      const double r = (k + 0.5) / N;
      ref += std::expm1(a * (1 - r) * (1 - r)) * r / N;
    }
    ref *= 2.0 * pi;
    const MTReport rep = mt_functional(u, MTParams{2, a});
    CHECK(rep.functionalValue == doctest::Approx(ref).epsilon(1e-9));
    CHECK(rep.energy == doctest::Approx(pi).epsilon(1e-10));
  }

  TEST_CASE("functional is monotone in alpha and in |u|") {
    std::mt19937_64 rng(8);
    auto t = trumpet(2, 0.5);
    for (int trial = 0; trial < 40; ++trial) {
      const RadialFunction u = testing::random_radial(rng, t, uniform(rng, 0.3, 2.0));
      std::vector<double> bigger(u.values().begin(), u.values().end());
      for (double& v : bigger) v *= uniform(rng, 1.0, 1.5);
      const RadialFunction w(t, std::vector<double>(u.knots().begin(), u.knots().end()), bigger);
      const double a = uniform(rng, 0.5, 10.0);
      const double fu = mt_functional(u, MTParams{2, a}).functionalValue;
      CHECK(fu <= mt_functional(u, MTParams{2, a * 1.1}).functionalValue);
      CHECK(fu <= mt_functional(w, MTParams{2, a}).functionalValue * (1 + 1e-14));
    }
  }

  TEST_CASE("discrete functional is an exact sum") {
    auto g = std::make_shared<const DiscreteMMS>(std::vector<double>{1.0, 2.0, 0.5},
                                                 std::vector<Edge>{{0, 1, 1.0, 1.0}, {1, 2, 2.0, 1.0}});
    const DiscreteFunction f{g, {0.5, -1.0, 2.0}};
    const MTReport r = mt_functional(f, MTParams{3, 0.7});
    double ref = 0.0;
    for (int i = 0; i < 3; ++i) ref += g->measure(i) * truncated_exp_oracle(3, 0.7 * std::pow(std::abs(f.values[i]), 1.5));
    CHECK(r.functionalValue == doctest::Approx(ref).epsilon(1e-14));
    CHECK(r.energy == doctest::Approx(cheeger_energy(f, 3.0)));
  }

  TEST_CASE("trumpet scaling is exact") {
    std::mt19937_64 rng(12);
    for (int n : {2, 3, 4}) {
      for (double beta : {1.0, 0.5, 0.25}) {
        auto t = trumpet(n, beta);
        for (int trial = 0; trial < 5; ++trial) {
          const RadialFunction u = testing::random_radial(rng, t, uniform(rng, 0.3, 3.0));
          const TrumpetScalingReport r = trumpet_scaling_check(u, beta, uniform(rng, 0.5, 5.0));
          CAPTURE(n);
          CAPTURE(beta);
          CHECK(r.holds);
          CHECK(r.energyRatio == doctest::Approx(std::pow(beta, 1.0 / n)).epsilon(1e-10));
          CHECK(r.integralRatio == doctest::Approx(beta).epsilon(1e-10));
        }
      }
    }
  }

  TEST_CASE("gradient bound of a well") {
    auto h = trumpet(2, 1.0);
    // rhs depends only on (n, beta, c, sigma(Omega)).
    const double rho = h->radius_of_volume(1.0);
    const RadialFunction deep(h, {0.0, 0.5 * rho, rho}, {8.0, 8.0, 0.0});
    const GradientBoundReport r = better_gradient_bound(deep, 1.0, 1.0, 1.0, 2);
    CHECK(r.rhs == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(r.holds);
    const RadialFunction shallow(h, {0.0, rho}, {1.0, 0.0});
    CHECK_THROWS_AS(better_gradient_bound(shallow, 1.0, 1.0, 1.0, 2), PreconditionError);
    CHECK_THROWS_AS(better_gradient_bound(deep, 1.0, 0.5, 1.0, 2), PreconditionError);
  }

  TEST_CASE("gradient bound over random wells") {
    std::mt19937_64 rng(30);
    int admissible = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 2 + static_cast<int>(testing::pick(rng, 2));
      const double beta = uniform(rng, 0.2, 1.0);
      auto t = trumpet(n, beta, 3.0);
      const double rho = uniform(rng, 0.2, 2.5);
      const RadialFunction w = testing::random_radial(rng, t, rho);
      const double sigma = t->volume(rho);
      const double c = w.integrate([](double x) { return x; }) / (3.0 * sigma) * uniform(rng, 0.05, 1.0);
      const GradientBoundReport r = better_gradient_bound(w, c, sigma, beta, n);
      CHECK(r.holds);
      ++admissible;
    }
    CHECK(admissible == 500);
  }

  TEST_CASE("step2 on handcrafted atoms") {
    auto h = trumpet(2, 1.0);
    // Mean zero, median 0.1, well of depth 2 on half the measure.
    const MeasuredFunction u{{-1.9, 0.1, 0.1, 1.7}, {0.5, 0.5, 0.5, 0.5}};
    const MedianSplit split = double_rearrangement(u, h);
    CHECK(split.c == doctest::Approx(0.1).epsilon(1e-15));
    const Step2Report r = step2_certificate(split, 2, 1.0, 50.0);
    // P^2 = A^2 + 4 pi A on the hyperbolic plane, A linear in the level.
    const double profileSquared = 1.0 / 24.0 + pi / 2.0;
    // The space carries a tabulated profile, good to about 2e-9 here.
    CHECK(r.gradMinus == doctest::Approx(16.0 * profileSquared).epsilon(1e-8));
    CHECK(r.gradPlus == doctest::Approx(10.24 * profileSquared).epsilon(1e-8));
    CHECK(r.lemmaBound == doctest::Approx(0.0225).epsilon(1e-12));
    CHECK(r.bound == doctest::Approx(50.0 - 0.0225).epsilon(1e-12));
    CHECK(std::abs(r.averageResidual) <= 1e-12);
    CHECK(r.holds);
    CHECK_FALSE(step2_certificate(split, 2, 1.0, 40.0).holds);
  }

  TEST_CASE("step2 preconditions") {
    auto h = trumpet(2, 1.0);
    const MedianSplit shallow = double_rearrangement(MeasuredFunction{{-0.7, 0.1, 0.1, 0.5}, {0.5, 0.5, 0.5, 0.5}}, h);
    CHECK_THROWS_AS(step2_certificate(shallow, 2, 1.0), PreconditionError);
    const MedianSplit offCenter = double_rearrangement(MeasuredFunction{{-1.9, 0.1, 0.1, 2.7}, {0.5, 0.5, 0.5, 0.5}}, h);
    CHECK_THROWS_AS(step2_certificate(offCenter, 2, 1.0, 100.0), PreconditionError);
    const MedianSplit negative = double_rearrangement(MeasuredFunction{{1.9, -0.1, -0.1, -1.7}, {0.5, 0.5, 0.5, 0.5}}, h);
    CHECK_THROWS_AS(step2_certificate(negative, 2, 1.0), PreconditionError);
    // c = 0: the lemma bound vanishes and the well condition is void.
    const MedianSplit symmetric = double_rearrangement(MeasuredFunction{{-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}}, h);
    const Step2Report r = step2_certificate(symmetric, 2, 1.0, 100.0);
    CHECK(r.lemmaBound == 0.0);
    CHECK(r.holds);
  }

  TEST_CASE("step3 envelope") {
    const Step3Report a = step3_envelope(2, 0.5, 1.0);
    CHECK(a.minClosed == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(a.minNumeric == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(a.argNumeric == doctest::Approx(1.0).epsilon(1e-6));
    const Step3Report b = step3_envelope(3, 0.5, 1.0);
    CHECK(b.minClosed == doctest::Approx(-1.0 / std::sqrt(0.75)).epsilon(1e-15));
    CHECK(b.holds);
    CHECK(std::abs(step3_envelope(2, 0.5, 1e-9).minNumeric) < 1e-17);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const int m = 2 + static_cast<int>(testing::pick(rng, 4));
      const double R = uniform(rng, 0.01, 0.99), c = std::exp(uniform(rng, -5.0, 5.0));
      const Step3Report r = step3_envelope(m, R, c);
      CAPTURE(m);
      CAPTURE(R);
      CAPTURE(c);
      CHECK(r.holds);
      CHECK(r.relativeError <= 1e-6);
    }
    CHECK_THROWS_AS(step3_envelope(2, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(step3_envelope(2, 0.5, 0.0), DomainError);
  }

  TEST_CASE("p-Laplacian bound on trumpets") {
    CHECK(plaplacian_lower_bound_trumpet(2, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(plaplacian_lower_bound_trumpet(3, 1.0) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
    CHECK(plaplacian_lower_bound_trumpet(2, 0.25) == doctest::Approx(0.0625).epsilon(1e-15));
    for (double beta : {1.0, 0.5}) {
      const PLaplacianCheck r = plaplacian_numeric_check(trumpet(2, beta, 8.0), beta);
      CHECK(r.holds);
      CHECK(r.numericInf >= r.bound);
    }
  }
}
