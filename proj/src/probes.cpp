#include "mtlab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mtlab/errors.hpp"
#include "mtlab/modelgeom.hpp"

namespace mtlab {

double MoserProbe::t0() const { return n * std::log(R / r); }

double MoserProbe::C() const {
  const double nn = n;
  return 1.0 / (nn * std::pow(theta * (1.0 + eta) * unit_sphere_area(n) * std::log(R / r), 1.0 / nn));
}

void validate(const MoserProbe& p) {
  if (p.n < 2) fail_domain("Moser probe: n must be >= 2");
  if (!(p.theta > 0.0) || !std::isfinite(p.theta)) fail_domain("Moser probe: theta must be positive");
  if (!(p.eta > 0.0 && p.eta < 1.0)) fail_domain("Moser probe: eta must lie in (0, 1)");
  if (!(p.r > 0.0 && p.r < p.R) || !std::isfinite(p.R)) fail_domain("Moser probe: need 0 < r < R");
}

RadialFunction moser_function(const MoserProbe& p, std::shared_ptr<const RadialSpace> space, int knotsPerDecade) {
  validate(p);
  if (!space) fail_input("moser_function: missing space");
  if (p.R > space->max_radius()) fail_range("moser_function: R lies beyond the grid");
  if (p.n != space->dimension()) fail_domain("moser_function: probe and space dimensions differ");
  const double C = p.C();
  const int count = std::max(2, static_cast<int>(std::ceil(knotsPerDecade * std::log10(p.R / p.r))));
  std::vector<double> knots{0.0, p.r}, values{C * p.t0(), C * p.t0()};
  const double logRatio = std::log(p.R / p.r);
  for (int k = 1; k <= count; ++k) {
    const double rho = k == count ? p.R : p.r * std::exp(logRatio * k / count);
    knots.push_back(rho);
    values.push_back(k == count ? 0.0 : C * p.n * std::log(p.R / rho));
  }
  return RadialFunction(std::move(space), std::move(knots), std::move(values));
}

namespace {

double perimeter_ratio(const RadialSpace& s, double theta, double rho) {
  return s.perimeter(rho) / (theta * unit_sphere_area(s.dimension()) * std::pow(rho, s.dimension() - 1));
}

}  // namespace

PerimeterComparison perimeter_comparison(const RadialSpace& s, double theta, double eta, double R) {
  if (R > s.max_radius()) fail_range("perimeter comparison: R lies beyond the grid");
  PerimeterComparison pc;
  auto consider = [&](double rho) {
    const double q = perimeter_ratio(s, theta, rho);
    if (q > pc.worstRatio) {
      pc.worstRatio = q;
      pc.worstRadius = rho;
    }
  };
  auto radii = s.radii();
  for (std::size_t i = 1; i < radii.size() && radii[i - 1] < R; ++i) {
    const double b = std::min(radii[i], R);
    consider(0.5 * (radii[i - 1] + b));
    consider(b);
  }
  pc.holds = pc.worstRatio <= 1.0 + eta;
  return pc;
}

double moser_max_radius(const RadialSpace& s, double theta, double eta) {
  const double limit = 1.0 + eta;
  auto radii = s.radii();
  double good = 0.0;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    for (double rho : {0.5 * (radii[i - 1] + radii[i]), radii[i]}) {
      if (perimeter_ratio(s, theta, rho) <= limit) {
        good = rho;
        continue;
      }
      if (good == 0.0) fail_precondition("moser_max_radius: perimeter comparison fails at the first node");
      double lo = good, hi = rho;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (perimeter_ratio(s, theta, mid) <= limit ? lo : hi) = mid;
      }
      return lo;
    }
  }
  return s.max_radius();
}

MoserEnergyReport moser_energy_bound_check(const MoserProbe& p, std::shared_ptr<const RadialSpace> space,
                                           double tol) {
  validate(p);
  if (!space) fail_input("moser_energy_bound_check: missing space");
  MoserEnergyReport rep;
  rep.perimeter = perimeter_comparison(*space, p.theta, p.eta, p.R);
  if (!rep.perimeter.holds) {
    fail_precondition("Moser probe: Per(S(rho)) exceeds theta (1 + eta) s_{n-1} rho^{n-1}; worst ratio " +
                      std::to_string(rep.perimeter.worstRatio) + " at rho = " +
                      std::to_string(rep.perimeter.worstRadius));
  }
  const RadialFunction u = moser_function(p, space);
  rep.energy = u.energy(p.n);
  rep.bound = std::pow(p.C(), p.n) * std::pow(p.n, p.n - 1) * p.theta * (1.0 + p.eta) * unit_sphere_area(p.n) * p.t0();
  rep.holds = rep.energy <= 1.0 + tol;
  return rep;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Divergent:
      return "divergent";
    case Verdict::Bounded:
      return "bounded";
    case Verdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

namespace {

AlphaVerdict judge(double alpha, const std::vector<ScanRow>& rows, VerdictRule rule) {
  AlphaVerdict v;
  v.alpha = alpha;
  if (rows.size() < 2) return v;
  const ScanRow& last = rows.back();
  std::size_t prev = 0;
  double bestMiss = kInfinity;
  for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
    const double miss = std::abs(std::log10(rows[j].r / last.r) - 1.0);
    if (miss < bestMiss) {
      bestMiss = miss;
      prev = j;
    }
  }
  v.rLast = last.r;
  v.rPrev = rows[prev].r;
  const double decades = std::log10(v.rPrev / v.rLast);
  const double lp = rows[prev].logValue, ll = last.logValue;
  if (lp == -kInfinity && ll == -kInfinity) {
    v.verdict = Verdict::Bounded;
    v.decadeFactor = 1.0;
    return v;
  }
  if (lp == -kInfinity) {
    v.verdict = Verdict::Divergent;
    v.decadeFactor = kInfinity;
    v.relativeChange = kInfinity;
    return v;
  }
  const double growth = ll - lp;
  v.decadeFactor = std::exp(growth / decades);
  v.relativeChange = std::abs(std::expm1(growth));
  if (rule == VerdictRule::GrowthTrend) {
    v.verdict = growth > 0.0 ? Verdict::Divergent : Verdict::Bounded;
  } else if (v.decadeFactor >= 10.0) {
    v.verdict = Verdict::Divergent;
  } else if (v.relativeChange < 0.01) {
    v.verdict = Verdict::Bounded;
  }
  return v;
}

}  // namespace

BlowupScan blowup_scan(std::shared_ptr<const RadialSpace> space, const std::vector<double>& alphaGrid,
                       const std::vector<double>& rGrid, const ScanSettings& settings) {
  if (!space) fail_input("blowup_scan: missing space");
  if (alphaGrid.empty() || rGrid.empty()) fail_domain("blowup_scan: grids must be nonempty");
  for (std::size_t i = 0; i < rGrid.size(); ++i) {
    if (!(rGrid[i] > 0.0 && rGrid[i] < settings.R)) fail_domain("blowup_scan: r values must lie in (0, R)");
    if (i > 0 && !(rGrid[i] < rGrid[i - 1])) fail_domain("blowup_scan: r grid must decrease");
  }
  BlowupScan scan;
  scan.settings = settings;
  scan.n = space->dimension();
  for (double alpha : alphaGrid) {
    std::vector<ScanRow> rows;
    for (double r : rGrid) {
      const MoserProbe probe{scan.n, settings.theta, settings.eta, settings.R, r};
      const MTReport rep = mt_functional(moser_function(probe, space, settings.knotsPerDecade), {scan.n, alpha});
      rows.push_back({alpha, r, rep.functionalValue, rep.logValue, rep.energy, rep.overflow});
    }
    scan.verdicts.push_back(judge(alpha, rows, settings.rule));
    scan.rows.insert(scan.rows.end(), rows.begin(), rows.end());
  }
  return scan;
}

ScanSettings default_scan_settings(const RadialSpace& s, double eta) {
  ScanSettings st;
  st.eta = eta;
  st.theta = cone_angle(s).value;
  st.R = std::min(moser_max_radius(s, st.theta, eta), 0.5 * s.max_radius());
  return st;
}

std::vector<double> decade_grid(double R, double rMin) {
  if (!(R > 0.0) || !(rMin > 0.0)) fail_domain("decade_grid: radii must be positive");
  std::vector<double> out;
  for (int k = 1;; ++k) {
    const double r = R * std::pow(10.0, -k);
    if (r < rMin * (1.0 - 1e-9)) break;
    out.push_back(r);
  }
  return out;
}

BumpTable bump_sequence_check(const std::vector<std::shared_ptr<const RadialSpace>>& family, double doublingC,
                              double alpha) {
  if (!(doublingC > 1.0)) fail_domain("bump_sequence_check: the doubling constant must exceed 1");
  BumpTable table;
  for (const auto& s : family) {
    if (!s) fail_input("bump_sequence_check: missing space");
    if (s->max_radius() < 2.0) fail_range("bump_sequence_check: space must reach radius 2");
    const int n = s->dimension();
    BumpRow row;
    row.rm = s->volume(1.0);
    row.doublingC = doublingC;
    if (s->volume(2.0) > doublingC * row.rm * (1.0 + 1e-9)) {
      fail_precondition("bump_sequence_check: sigma(B(2)) exceeds C sigma(B(1)) on " + s->label());
    }
    row.Tm = std::pow(1.0 / ((doublingC - 1.0) * row.rm), 1.0 / n);
    const RadialFunction bump(s, {0.0, 1.0, 2.0}, {row.Tm, row.Tm, 0.0});
    const MTReport rep = mt_functional(bump, {n, alpha});
    row.energy = rep.energy;
    row.value = rep.functionalValue;
    row.logValue = rep.logValue;
    row.plateauBound = row.rm * truncated_exp(n, alpha * std::pow(row.Tm, mt_exponent(n)));
    table.rows.push_back(row);
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const BumpRow& a, const BumpRow& b) { return a.rm > b.rm; });
  table.energiesOk = std::all_of(table.rows.begin(), table.rows.end(),
                                 [](const BumpRow& r) { return r.energy <= 1.0 + 1e-8; });
  table.increasing = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].logValue > table.rows[i - 1].logValue)) table.increasing = false;
  }
  return table;
}

double trumpet_doubling_constant(int n) {
  const Trumpet h = make_trumpet(n, 1.0);
  return trumpet_ball_volume(h, 2.0) / trumpet_ball_volume(h, 1.0);
}

std::vector<std::shared_ptr<const RadialSpace>> trumpet_bump_family(int n, const std::vector<double>& rms,
                                                                    int gridCount) {
  const double unit = trumpet_ball_volume(make_trumpet(n, 1.0), 1.0);
  std::vector<std::shared_ptr<const RadialSpace>> out;
  for (double rm : rms) {
    const double beta = rm / unit;
    if (!(beta > 0.0 && beta <= 1.0)) fail_domain("trumpet_bump_family: r_m must lie in (0, sigma_H(B(1))]");
    out.push_back(std::make_shared<const RadialSpace>(trumpet_space(n, beta, 2.0, gridCount)));
  }
  return out;
}

ThresholdEstimate threshold_estimate(std::shared_ptr<const RadialSpace> space, int n, const ThresholdOptions& opts) {
  if (!space) fail_input("threshold_estimate: missing space");
  if (n != space->dimension()) fail_domain("threshold_estimate: n differs from the space dimension");
  const double tMax = space->capacity();
  const double slopeHi = radial_profile(*space, tMax) / tMax;
  const double slopeLo = radial_profile(*space, 0.1 * tMax) / (0.1 * tMax);
  if (!(slopeHi >= 0.75 * slopeLo)) {
    fail_precondition("threshold_estimate: profile lacks a linear lower bound (Phi/t falls from " +
                      std::to_string(slopeLo) + " to " + std::to_string(slopeHi) + " over the last volume decade)");
  }
  ScanSettings settings = default_scan_settings(*space, opts.eta);
  settings.rule = opts.rule;
  const std::vector<double> rGrid = decade_grid(settings.R, opts.rMin);
  auto verdict = [&](double alpha) { return blowup_scan(space, {alpha}, rGrid, settings).verdicts.front().verdict; };

  ThresholdEstimate est;
  est.coneAngle = settings.theta;
  est.R = settings.R;
  est.reference = n * std::pow(settings.theta * unit_sphere_area(n), 1.0 / (n - 1));
  double lo = 0.5 * est.reference, hi = 2.0 * est.reference;
  bool loOk = false, hiOk = false;
  for (int k = 0; k < 6 && !loOk; ++k, lo *= 0.5) loOk = verdict(lo) == Verdict::Bounded;
  if (loOk) lo *= 2.0;
  for (int k = 0; k < 6 && !hiOk; ++k, hi *= 2.0) hiOk = verdict(hi) == Verdict::Divergent;
  if (hiOk) hi *= 0.5;
  if (!loOk || !hiOk) {
    est.note = !loOk ? "no bounded alpha found" : "no divergent alpha found";
    return est;
  }
  while (est.iterations < opts.maxIterations && (hi - lo) > opts.relTol * lo) {
    const double mid = 0.5 * (lo + hi);
    const Verdict v = verdict(mid);
    ++est.iterations;
    if (v == Verdict::Bounded) {
      lo = mid;
    } else if (v == Verdict::Divergent) {
      hi = mid;
    } else {
      est.note = "inconclusive verdict at alpha = " + std::to_string(mid);
      break;
    }
  }
  est.lo = lo;
  est.hi = hi;
  est.found = est.note.empty();
  est.estimate = 0.5 * (lo + hi);
  return est;
}

}  // namespace mtlab
