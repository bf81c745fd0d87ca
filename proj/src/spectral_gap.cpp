#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mtlab/discrete.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/kernels.hpp"

namespace mtlab {

double cheeger_energy(const DiscreteFunction& f, double p) {
  if (!(p > 0.0)) fail_domain("cheeger_energy: p must be positive");
  const std::vector<double> lip = discrete_slope(f);
  return kernels::weighted_abs_pow_sum(f.space->measures(), lip, 0.0, p);
}

ShiftInfimum shift_infimum(std::span<const double> values, std::span<const double> measures, double p) {
  if (!(p > 1.0)) fail_domain("shift_infimum: p must exceed 1");
  if (values.empty() || values.size() != measures.size()) fail_input("shift_infimum: size mismatch");
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  // c -> sum mu |f - c|^p is strictly convex; bisect on the sign of its
  // derivative, which is -p * sum mu |f - c|^{p-1} sign(f - c).
  for (int it = 0; it < 200 && hi > lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kernels::weighted_signed_pow_sum(measures, values, mid, p - 1.0) > 0.0) lo = mid; else hi = mid;
  }
  ShiftInfimum out;
  const double a = kernels::weighted_abs_pow_sum(measures, values, lo, p);
  const double b = kernels::weighted_abs_pow_sum(measures, values, hi, p);
  out.shift = a <= b ? lo : hi;
  out.value = std::min(a, b);
  return out;
}

namespace {

struct Evaluation {
  double quotient = kInfinity;
  double energy = 0.0;
  double denominator = 0.0;
  double shift = 0.0;
};

// Quotient, and optionally a subgradient, of Ch_p(f) / inf_c ||f - c||_p^p.
Evaluation evaluate(const DiscreteMMS& s, std::span<const double> f, double p, std::vector<double>* grad) {
  const std::size_t n = s.size();
  std::vector<double> lip(n, 0.0);
  std::vector<std::size_t> arg(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : s.neighbors(i)) {
      const double slope = std::abs(f[i] - f[nb.vertex]) / nb.length;
      if (slope > lip[i]) {
        lip[i] = slope;
        arg[i] = nb.vertex;
      }
    }
  }
  Evaluation ev;
  ev.energy = kernels::weighted_abs_pow_sum(s.measures(), lip, 0.0, p);
  const ShiftInfimum si = shift_infimum(f, s.measures(), p);
  ev.denominator = si.value;
  ev.shift = si.shift;
  if (!(ev.denominator > 0.0)) return ev;
  ev.quotient = ev.energy / ev.denominator;
  if (grad) {
    grad->assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (arg[i] == n || lip[i] == 0.0) continue;
      double length = 0.0;
      for (const auto& nb : s.neighbors(i)) {
        if (nb.vertex == arg[i]) length = nb.length;
      }
      const double diff = f[i] - f[arg[i]];
      const double g = s.measure(i) * p * std::pow(lip[i], p - 1.0) * (diff > 0.0 ? 1.0 : -1.0) / length;
      (*grad)[i] += g;
      (*grad)[arg[i]] -= g;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = f[i] - ev.shift;
      const double gd = d == 0.0 ? 0.0 : s.measure(i) * p * std::pow(std::abs(d), p - 1.0) * (d > 0.0 ? 1.0 : -1.0);
      (*grad)[i] = ((*grad)[i] - ev.quotient * gd) / ev.denominator;
    }
  }
  return ev;
}

// Shift to the optimal c and scale to unit denominator; Q is invariant.
void normalize(std::vector<double>& f, const Evaluation& ev, double p) {
  const double scale = std::pow(ev.denominator, -1.0 / p);
  for (double& x : f) x = (x - ev.shift) * scale;
}

double uniform_pm1(std::mt19937_64& rng) {
  // Explicit bit conversion keeps streams identical across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

double rayleigh_quotient(const DiscreteMMS& s, std::span<const double> f, double p) {
  if (!(p > 1.0)) fail_domain("rayleigh_quotient: p must exceed 1");
  if (f.size() != s.size()) fail_input("rayleigh_quotient: one value per vertex required");
  return evaluate(s, f, p, nullptr).quotient;
}

SpectralGapEstimate spectral_gap(const DiscreteMMS& s, double p, const SpectralGapOptions& opts) {
  if (!(p > 1.0)) fail_domain("spectral_gap: p must exceed 1");
  const std::size_t n = s.size();
  if (n < 2) fail_domain("spectral_gap: need at least two vertices");

  std::vector<std::vector<double>> starts;
  if (n <= opts.budget && n <= 62) {
    const CheegerReport ch = cheeger_constant(s, opts.budget);
    std::vector<double> f(n, 0.0);
    for (std::size_t v : ch.witnessSet) f[v] = 1.0;
    starts.push_back(std::move(f));
  }
  std::mt19937_64 rng(opts.seed);
  for (int k = 0; k < opts.restarts; ++k) {
    std::vector<double> f(n);
    for (double& x : f) x = uniform_pm1(rng);
    starts.push_back(std::move(f));
  }

  SpectralGapEstimate best;
  best.lambda = kInfinity;
  std::vector<double> grad, trial;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    std::vector<double> f = std::move(starts[k]);
    Evaluation ev = evaluate(s, f, p, &grad);
    if (!std::isfinite(ev.quotient)) continue;
    normalize(f, ev, p);
    ev = evaluate(s, f, p, &grad);
    double step = 0.5;
    for (int it = 0; it < opts.iterations; ++it) {
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      if (!(norm > 0.0)) break;
      bool accepted = false;
      step = std::min(2.0 * step, 1.0);
      for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
        trial = f;
        for (std::size_t i = 0; i < n; ++i) trial[i] -= step * grad[i] / norm;
        const Evaluation te = evaluate(s, trial, p, nullptr);
        if (std::isfinite(te.quotient) && te.quotient <= ev.quotient - 1e-4 * step * norm) {
          f.swap(trial);
          normalize(f, te, p);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      ev = evaluate(s, f, p, &grad);
    }
    if (ev.quotient < best.lambda) {
      best.lambda = ev.quotient;
      best.witness = f;
      best.bestRestart = static_cast<int>(k);
    }
  }
  return best;
}

CheegerInequalityReport cheeger_inequality_check(const DiscreteMMS& s, double p, const SpectralGapOptions& opts,
                                                 double tol) {
  if (!(p > 1.0)) fail_domain("cheeger_inequality_check: p must exceed 1");
  const CheegerReport ch = cheeger_constant(s, opts.budget);
  const SpectralGapEstimate gap = spectral_gap(s, p, opts);
  CheegerInequalityReport rep;
  rep.h = ch.h;
  rep.witnessSet = ch.witnessSet;
  rep.lambdaPEstimate = gap.lambda;
  rep.witnessFunction = gap.witness;
  rep.bound = std::pow(ch.h, p) / std::pow(p, p);
  rep.holds = rep.lambdaPEstimate >= rep.bound - tol;
  return rep;
}

BuserRecord buser_data(const DiscreteMMS& s, double p, const SpectralGapOptions& opts) {
  const CheegerReport ch = cheeger_constant(s, opts.budget);
  const SpectralGapEstimate gap = spectral_gap(s, p, opts);
  BuserRecord r;
  r.h = ch.h;
  r.lambdaPEstimate = gap.lambda;
  r.ratio = gap.lambda / (ch.h + std::pow(ch.h, p));
  return r;
}

}  // namespace mtlab
