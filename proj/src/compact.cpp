#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mtlab/errors.hpp"
#include "mtlab/functionals.hpp"

namespace mtlab {
namespace {

void require_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) fail_domain("beta must lie in (0, 1]");
}

double gradient_constant(int n, double beta) {
  return std::pow(beta, 1.0 / (n - 1)) * std::pow(3.0 * (1.0 - 1.0 / n), n);
}

// Step function seen through its atoms: A interpolated linearly in the level.
DistributionTable level_interpolated(const RadialFunction& step) {
  DistributionTable d = distribution(step);
  d.interior = nullptr;
  return d;
}

double layer_cake_integral(const DistributionTable& d) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < d.levels.size(); ++j) {
    sum += 0.5 * (d.levels[j] - d.levels[j + 1]) * (d.measures[j] + d.measures[j + 1]);
  }
  return sum;
}

}  // namespace

GradientBoundReport better_gradient_bound(const RadialFunction& w, double c, double omegaVolume, double beta,
                                          int n, double tol) {
  require_beta(beta);
  if (n != w.space().dimension()) fail_domain("better_gradient_bound: n differs from the space dimension");
  if (!(c > 0.0) || !(omegaVolume > 0.0)) fail_domain("better_gradient_bound: c and sigma(Omega) must be positive");
  GradientBoundReport rep;
  rep.wellIntegral = w.integrate([](double x) { return x; });
  std::vector<std::string> failures;
  if (w.min_value() < 0.0) failures.push_back("u <= c fails (the well c - u takes negative values)");
  const double supportVolume = w.space().volume(w.support_radius());
  if (supportVolume > omegaVolume * (1.0 + 1e-12)) {
    failures.push_back("u - c is not supported in Omega (support volume " + std::to_string(supportVolume) + ")");
  }
  if (rep.wellIntegral < 3.0 * c * omegaVolume * (1.0 - 1e-12)) {
    failures.push_back("int_Omega u <= -2 c sigma(Omega) fails (well integral " + std::to_string(rep.wellIntegral) +
                       ")");
  }
  if (!failures.empty()) {
    std::string msg = "better_gradient_bound preconditions:";
    for (const auto& f : failures) msg += " [" + f + "]";
    fail_precondition(msg);
  }
  rep.lhs = w.energy(n);
  rep.rhs = gradient_constant(n, beta) * std::pow(c, n) * omegaVolume;
  rep.holds = rep.lhs >= rep.rhs * (1.0 - tol);
  return rep;
}

Step2Report step2_certificate(const MedianSplit& split, int m, double beta, double sourceEnergy, double tol) {
  require_beta(beta);
  if (m != split.uPlus.space().dimension()) fail_domain("step2_certificate: m differs from the space dimension");
  Step2Report rep;
  rep.c = split.c;
  rep.omegaVolume = split.omegaVolume;
  rep.C6 = gradient_constant(m, beta);
  if (split.c < 0.0) fail_precondition("step2_certificate: the median must be nonnegative (replace u by -u)");

  const RadialSpace& target = split.uPlus.space();
  const DistributionTable plus = level_interpolated(split.uPlus);
  const DistributionTable minus = level_interpolated(split.uMinus);
  auto energy = [&](const DistributionTable& d) {
    return d.empty() ? 0.0 : coarea_gradient_norm(rearranged_distribution(d, target), m).value;
  };
  rep.gradPlus = energy(plus);
  rep.gradMinus = energy(minus);
  rep.wellIntegral = layer_cake_integral(minus);

  const double intPlus = split.uPlus.integrate([](double x) { return x; });
  const double intMinus = split.uMinus.integrate([](double x) { return x; });
  const double sigma = split.omegaVolume;
  rep.averageResidual = split.c + (intPlus - intMinus) / (2.0 * sigma);

  std::vector<std::string> failures;
  const double scale = split.c + (intPlus + intMinus) / (2.0 * sigma);
  if (std::abs(rep.averageResidual) > 1e-9 * std::max(scale, 1e-300)) {
    failures.push_back("source average is not zero (residual " + std::to_string(rep.averageResidual) + ")");
  }
  if (minus.mass() > sigma * (1.0 + 1e-12)) failures.push_back("well not supported in Omega");
  if (split.c > 0.0 && rep.wellIntegral < 3.0 * split.c * sigma * (1.0 - 1e-12)) {
    failures.push_back("well integral " + std::to_string(rep.wellIntegral) + " below 3 c sigma(Omega) = " +
                       std::to_string(3.0 * split.c * sigma));
  }
  if (!failures.empty()) {
    std::string msg = "step2_certificate preconditions:";
    for (const auto& f : failures) msg += " [" + f + "]";
    fail_precondition(msg);
  }
  rep.lemmaBound = rep.C6 * std::pow(split.c, m) * sigma;
  rep.bound = sourceEnergy - rep.lemmaBound;
  const double slack = tol * std::max(1.0, sourceEnergy);
  rep.holds = rep.gradPlus <= sourceEnergy - rep.gradMinus + slack && rep.gradMinus >= rep.lemmaBound - slack;
  return rep;
}

Step3Report step3_envelope(int m, double R, double c) {
  if (m < 2) fail_domain("step3_envelope: m must be >= 2");
  if (!(R > 0.0 && R < 1.0)) fail_domain("step3_envelope: R must lie in (0, 1)");
  if (!(c > 0.0)) fail_domain("step3_envelope: c must be positive");
  const double q = static_cast<double>(m) / (m - 1);
  auto h = [&](double t) { return std::pow(t, q) / R - std::pow(t + c, q); };
  auto hl = [&](double logT) { return h(std::exp(logT)); };

  const double lo = std::log(c) - 12.0 * std::log(10.0);
  const double hi = std::log(c) + 12.0 * std::log(10.0);
  const int count = 4800;
  const double step = (hi - lo) / count;
  int best = 0;
  double bestValue = hl(lo);
  for (int k = 1; k <= count; ++k) {
    const double v = hl(lo + k * step);
    if (v < bestValue) {
      bestValue = v;
      best = k;
    }
  }
  double a = lo + std::max(0, best - 1) * step, b = lo + std::min(count, best + 1) * step;
  const double invPhi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - invPhi * (b - a), x2 = a + invPhi * (b - a);
  double f1 = hl(x1), f2 = hl(x2);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invPhi * (b - a);
      f1 = hl(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invPhi * (b - a);
      f2 = hl(x2);
    }
  }
  Step3Report rep;
  rep.argNumeric = std::exp(0.5 * (a + b));
  rep.minNumeric = std::min({bestValue, f1, f2, h(rep.argNumeric)});
  const double rho = std::pow(R, m - 1);
  rep.argClosed = c * rho / (1.0 - rho);
  rep.minClosed = -std::pow(c, q) / std::pow(1.0 - rho, 1.0 / (m - 1));
  rep.relativeError = std::abs(rep.minNumeric - rep.minClosed) / std::abs(rep.minClosed);
  rep.holds = rep.relativeError <= 1e-6;
  return rep;
}

double plaplacian_lower_bound_trumpet(int n, double beta) {
  if (n < 2) fail_domain("plaplacian_lower_bound_trumpet: n must be >= 2");
  require_beta(beta);
  return std::pow(beta, 1.0 / (n - 1)) * std::pow((n - 1.0) / n, n);
}

PLaplacianCheck plaplacian_numeric_check(std::shared_ptr<const RadialSpace> trumpet, double beta) {
  if (!trumpet) fail_input("plaplacian_numeric_check: missing space");
  const int n = trumpet->dimension();
  PLaplacianCheck rep;
  rep.bound = plaplacian_lower_bound_trumpet(n, beta);
  rep.numericInf = kInfinity;
  const double rMax = trumpet->max_radius();
  const int knots = 600;
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    const double rho = frac * rMax;
    for (int ia = 0; ia <= 30; ++ia) {
      const double a = 0.05 * ia;
      std::vector<double> r(knots + 1), v(knots + 1);
      for (int k = 0; k <= knots; ++k) {
        r[k] = rho * k / knots;
        v[k] = std::exp(-a * r[k]) * (1.0 - r[k] / rho);
      }
      r.back() = rho;
      const RadialFunction u(trumpet, std::move(r), std::move(v));
      const double quotient = u.energy(n) / u.lp_norm_pow(n);
      if (quotient < rep.numericInf) {
        rep.numericInf = quotient;
        rep.bestDecay = a;
        rep.bestSupport = rho;
      }
    }
  }
  rep.holds = rep.numericInf >= rep.bound * (1.0 - 1e-9);
  return rep;
}

}  // namespace mtlab
