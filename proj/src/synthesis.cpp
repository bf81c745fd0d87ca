#include <algorithm>
#include <cmath>
#include <string>

#include "mtlab/errors.hpp"
#include "mtlab/radial.hpp"

namespace mtlab {
namespace {

// Dormand-Prince 5(4) for a scalar autonomous ODE y' = rhs(y), stepping
// exactly onto requested abscissae.
template <class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs rhs, double rtol, double h0) : rhs_(rhs), rtol_(rtol), h_(h0) {}

  double advance(double r0, double y, double r1, std::size_t& steps) {
    double r = r0;
    double k1 = rhs_(y);
    while (r < r1) {
      double h = std::min(h_, r1 - r);
      for (int attempt = 0;; ++attempt) {
        const double k2 = rhs_(y + h * (k1 / 5));
        const double k3 = rhs_(y + h * (3 * k1 / 40 + 9 * k2 / 40));
        const double k4 = rhs_(y + h * (44 * k1 / 45 - 56 * k2 / 15 + 32 * k3 / 9));
        const double k5 = rhs_(y + h * (19372 * k1 / 6561 - 25360 * k2 / 2187 + 64448 * k3 / 6561 - 212 * k4 / 729));
        const double k6 = rhs_(y + h * (9017 * k1 / 3168 - 355 * k2 / 33 + 46732 * k3 / 5247 + 49 * k4 / 176 -
                                         5103 * k5 / 18656));
        const double yn = y + h * (35 * k1 / 384 + 500 * k3 / 1113 + 125 * k4 / 192 - 2187 * k5 / 6784 + 11 * k6 / 84);
        const double k7 = rhs_(yn);
        const double e = h * (71 * k1 / 57600 - 71 * k3 / 16695 + 71 * k4 / 1920 - 17253 * k5 / 339200 +
                              22 * k6 / 525 - k7 / 40);
        const double scale = rtol_ * std::max(std::abs(y), std::abs(yn));
        const double err = scale > 0.0 ? std::abs(e) / scale : 0.0;
        const double factor = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        if (err <= 1.0 || attempt > 60) {
          const bool clipped = h < h_;
          r = (h == r1 - r) ? r1 : r + h;
          y = yn;
          k1 = k7;
          ++steps;
          if (!clipped || factor < 1.0) h_ = h * factor;
          break;
        }
        h *= std::max(factor, 0.1);
      }
    }
    return y;
  }

 private:
  Rhs rhs_;
  double rtol_;
  double h_;
};

}  // namespace

SynthesisResult synthesize_from_profile(const ProfileTable& f, int n, const SynthesisOptions& opts) {
  if (n < 2) fail_domain("synthesize_from_profile: n must be >= 2");
  validate(f);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < f.volumes.size(); ++j) {
    if (f.volumes[j] > 0.0) {
      if (!(f.perimeters[j] > 0.0)) {
        throw SingularProfileError("synthesize_from_profile: profile vanishes at t = " + std::to_string(f.volumes[j]));
      }
      idx.push_back(j);
    }
  }
  if (idx.size() < 3) throw SingularProfileError("synthesize_from_profile: need at least 3 positive samples");

  const double e = 1.0 - 1.0 / n;
  SynthesisResult out;
  WindowedEstimate& asym = out.asymptote;
  asym.windowSize = decile_window(idx.size());
  double lo = kInfinity, hi = 0.0;
  for (std::size_t k = 0; k < asym.windowSize; ++k) {
    const double ratio = f.perimeters[idx[k]] / std::pow(f.volumes[idx[k]], e);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  asym.value = lo;
  asym.windowUpper = f.volumes[idx[asym.windowSize - 1]];
  asym.spread = (hi - lo) / hi;
  asym.reliable = asym.spread <= opts.asymptoteSpread;
  if (!asym.reliable) {
    throw SingularProfileError("synthesize_from_profile: ratio f(t)/t^(1-1/n) does not settle near 0 (spread " +
                               std::to_string(asym.spread) + ")");
  }

  const double tMin = f.volumes[idx.front()];
  const double tMax = f.volumes[idx.back()];
  const double alpha = f.perimeters[idx.front()] / std::pow(tMin, e);
  const ProfileInterpolant interp(f);
  auto profile = [&](double t) { return t <= tMin ? alpha * std::pow(t, e) : interp(t); };

  const double S = unit_sphere_area(n);
  const double slope0 = alpha / (n * std::pow(S, 1.0 / n));
  out.alpha = alpha;
  out.coneAngle = std::pow(alpha, n) / (std::pow(n, n - 1) * S);

  // Below the first tabulated volume f is the power law, whose solution is
  // exactly F = F'(0) r; use it past the 1e-8 series threshold when possible.
  const double rSeries = opts.seriesUntil / slope0;
  const double rTable = std::pow(tMin / S, 1.0 / n) / slope0;
  const double rStart = std::max(rSeries, rTable);

  std::vector<double> radii{0.0}, warp{0.0}, volumes{0.0};
  auto push = [&](double r, double F) {
    const double V = S * std::pow(F, n);
    radii.push_back(r);
    volumes.push_back(V);
    warp.push_back(std::pow(profile(V) / S, 1.0 / (n - 1)));
  };

  const int below = static_cast<int>(std::ceil(std::log(1e4) / std::log(opts.ratio)));
  for (int k = below; k >= 1; --k) {
    const double r = rStart / std::pow(opts.ratio, k);
    if (S * std::pow(slope0 * r, n) >= tMax) break;
    push(r, slope0 * r);
  }

  auto rhs = [&](double F) { return profile(S * std::pow(F, n)) / (n * S * std::pow(F, n - 1)); };
  Dopri5<decltype(rhs)> ode(rhs, opts.rtol, rStart * (opts.ratio - 1.0));

  double r = rStart;
  double F = slope0 * rStart;
  const double Fmax = std::pow(tMax / S, 1.0 / n);
  if (F >= Fmax) fail_input("synthesize_from_profile: table ends inside the series region");
  push(r, F);
  const std::size_t maxNodes = 4'000'000;
  while (true) {
    if (radii.size() > maxNodes) fail_input("synthesize_from_profile: node budget exhausted before reaching tMax");
    const double next = r + std::min(opts.maxStep, r * (opts.ratio - 1.0));
    const double Fn = ode.advance(r, F, next, out.steps);
    if (Fn >= Fmax) {
      // Land the last node on V = tMax.
      double a = 0.0, b = next - r;
      for (int it = 0; it < 200 && b - a > 1e-15 * next; ++it) {
        const double m = 0.5 * (a + b);
        Dopri5<decltype(rhs)> probe(rhs, opts.rtol, m);
        if (probe.advance(r, F, r + m, out.steps) >= Fmax) b = m; else a = m;
      }
      if (b > 1e-14 * r) {
        radii.push_back(r + b);
        volumes.push_back(tMax);
        warp.push_back(std::pow(profile(volumes.back()) / S, 1.0 / (n - 1)));
      }
      break;
    }
    r = next;
    F = Fn;
    push(r, F);
  }
  out.space = RadialSpace::from_nodes(n, std::move(radii), std::move(warp), std::move(volumes), "synthesized");
  return out;
}

DominatingTrumpet dominating_trumpet(double h, double lInf, int m, double delta) {
  if (!(h > 0.0) || !std::isfinite(h)) fail_domain("dominating_trumpet: Cheeger slope must be positive");
  if (!(lInf > 0.0)) fail_domain("dominating_trumpet: asymptotic ratio must be positive");
  if (lInf > 1.0) fail_domain("dominating_trumpet: trumpet cone angle must not exceed 1");
  if (m < 2) fail_domain("dominating_trumpet: m must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) fail_domain("dominating_trumpet: delta must lie in (0, 1)");
  DominatingTrumpet out;
  out.n = m;
  out.beta = lInf;
  out.delta = delta;
  const double a = m * std::pow(lInf * unit_ball_volume(m), 1.0 / m);
  const double e = 1.0 - 1.0 / m;
  // Power law and linear tail cross at tc.
  const double tc = std::pow(a / h, static_cast<double>(m));
  auto f = [&](double t) { return (1.0 - delta) * std::max(a * std::pow(t, e), h * t); };
  out.glue = tabulate_profile(f, tc * 1e-10, tc * 1e4, 40);
  SynthesisOptions opts;
  opts.maxStep = 0.01 * std::max(1.0, 1.0 / h);
  out.space = synthesize_from_profile(out.glue, m, opts).space;
  return out;
}

}  // namespace mtlab
