#include "mtlab/functionals.hpp"

#include <cmath>
#include <string>

#include "mtlab/errors.hpp"
#include "mtlab/modelgeom.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {
namespace {

constexpr double kOverflowValue = 1e300;

// Past this argument the subtracted polynomial is below one ulp of e^x.
double series_cutoff(int m) { return 2.0 * m + 20.0; }

double partial_exp(int m, double x) {
  double term = 1.0, sum = 0.0;
  for (int j = 0; j <= m - 2; ++j) {
    sum += term;
    term *= x / (j + 1);
  }
  return sum;
}

// sum_{k >= 0} x^k (m-1)! / (m-1+k)!, the tail series over its leading term.
double tail_ratio(int m, double x) {
  double term = 1.0, sum = 0.0;
  for (int j = m; sum + term != sum; ++j) {
    sum += term;
    term *= x / j;
  }
  return sum;
}

double tail_series(int m, double x) {
  double lead = 1.0;
  for (int j = 1; j <= m - 1; ++j) lead *= x / j;
  return lead * tail_ratio(m, x);
}

void require_m(int m) {
  if (m < 2) fail_domain("truncated exponential: m must be >= 2, got " + std::to_string(m));
}

}  // namespace

double truncated_exp(int m, double t) {
  require_m(m);
  const double x = std::abs(t);
  if (x == 0.0) return 0.0;
  if (m == 2) return std::expm1(x);
  if (x <= series_cutoff(m)) return tail_series(m, x);
  return std::exp(x) - partial_exp(m, x);
}

double log_truncated_exp(int m, double t) {
  require_m(m);
  const double x = std::abs(t);
  if (x == 0.0) return -kInfinity;
  if (x <= 1.0) return (m - 1) * std::log(x) - std::lgamma(m) + std::log(tail_ratio(m, x));
  if (x <= 700.0) return std::log(truncated_exp(m, x));
  return x + std::log1p(-std::exp(std::log(partial_exp(m, x)) - x));
}

void LogSum::add_log(double logTerm) {
  if (logTerm == -kInfinity) return;
  if (logTerm > max_) {
    scaled_ = scaled_ * std::exp(max_ - logTerm) + 1.0;
    max_ = logTerm;
  } else {
    scaled_ += std::exp(logTerm - max_);
  }
}

double LogSum::log_value() const { return max_ == -kInfinity ? -kInfinity : max_ + std::log(scaled_); }

double LogSum::value() const { return std::exp(log_value()); }

void validate(const MTParams& p) {
  require_m(p.m);
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) fail_domain("MT parameters: alpha must be finite and >= 0");
}

double mt_exponent(int m) {
  require_m(m);
  return static_cast<double>(m) / (m - 1);
}

namespace {

MTReport finish_report(const LogSum& acc, double energy) {
  MTReport r;
  r.energy = energy;
  r.logValue = acc.log_value();
  r.functionalValue = acc.value();
  r.overflow = r.logValue > std::log(kOverflowValue);
  r.admissible = energy <= 1.0 + 1e-12;
  return r;
}

}  // namespace

MTReport mt_functional(const RadialFunction& u, const MTParams& params) {
  validate(params);
  const double q = mt_exponent(params.m);
  const RadialSpace& s = u.space();
  auto logF = [&](double x) { return log_truncated_exp(params.m, params.alpha * std::pow(std::abs(x), q)); };
  LogSum acc;
  if (params.alpha > 0.0) {
    const quad::Rule& rule = quad::gauss_legendre(8);
    u.for_each_cell_piece([&](double r0, double r1, double u0, double u1) {
      if (u0 == u1) {
        const double dv = s.volume(r1) - s.volume(r0);
        if (dv > 0.0) acc.add_log(logF(u0) + std::log(dv));
        return;
      }
      const double half = 0.5 * (r1 - r0), mid = 0.5 * (r0 + r1);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double r = mid + half * rule.nodes[k];
        const double x = u0 + (u1 - u0) * (r - r0) / (r1 - r0);
        const double density = half * rule.weights[k] * s.perimeter(r);
        if (density > 0.0) acc.add_log(logF(x) + std::log(density));
      }
    });
  }
  return finish_report(acc, u.energy(params.m));
}

MTReport mt_functional(const DiscreteFunction& u, const MTParams& params) {
  validate(params);
  validate(u);
  const double q = mt_exponent(params.m);
  LogSum acc;
  if (params.alpha > 0.0) {
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      acc.add_log(log_truncated_exp(params.m, params.alpha * std::pow(std::abs(u.values[i]), q)) +
                  std::log(u.space->measure(i)));
    }
  }
  return finish_report(acc, cheeger_energy(u, params.m));
}

double mt_threshold(int m, double beta) {
  if (m < 2) fail_domain("mt_threshold: m must be >= 2");
  if (!(beta > 0.0 && beta <= 1.0)) fail_domain("mt_threshold: beta must lie in (0, 1]");
  return m * std::pow(beta * unit_sphere_area(m), 1.0 / (m - 1));
}

TrumpetScalingReport trumpet_scaling_check(const RadialFunction& u, double beta, double alpha, double tol) {
  const RadialSpace& s = u.space();
  const int n = s.dimension();
  const Trumpet t = make_trumpet(n, beta);
  const double rLast = s.max_radius();
  const double expected = unit_sphere_area(n) * std::pow(t.warp(rLast), n - 1);
  if (std::abs(s.perimeter(rLast) - expected) > 1e-9 * expected) {
    fail_precondition("trumpet_scaling_check: the function's space is not the trumpet with beta = " +
                      std::to_string(beta));
  }
  auto radii = s.radii();
  auto hyperbolic = std::make_shared<const RadialSpace>(
      trumpet_space_on(n, 1.0, std::vector<double>(radii.begin(), radii.end())));
  const RadialFunction v = u.on(hyperbolic);
  const double eb = u.energy(n), e1 = v.energy(n);
  if (!(e1 > 0.0) || !std::isfinite(e1)) fail_input("trumpet_scaling_check: energy must be finite and positive");
  TrumpetScalingReport rep;
  rep.beta = beta;
  rep.n = n;
  rep.energyRatio = std::pow(eb / e1, 1.0 / n);
  rep.expectedEnergyRatio = std::pow(beta, 1.0 / n);
  const MTParams params{n, alpha};
  const MTReport fb = mt_functional(u, params), f1 = mt_functional(v, params);
  rep.integralRatio = f1.logValue == -kInfinity ? beta : std::exp(fb.logValue - f1.logValue);
  rep.energyError = std::abs(rep.energyRatio - rep.expectedEnergyRatio) / rep.expectedEnergyRatio;
  rep.integralError = std::abs(rep.integralRatio - beta) / beta;
  rep.holds = rep.energyError <= tol && rep.integralError <= tol;
  return rep;
}

}  // namespace mtlab
