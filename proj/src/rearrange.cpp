#include "mtlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "mtlab/errors.hpp"
#include "mtlab/kernels.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {
namespace {

// Superlevel set {u > t} of a radial function as disjoint radius intervals.
std::vector<std::pair<double, double>> superlevel_intervals(const RadialFunction& u, double t) {
  std::vector<std::pair<double, double>> out;
  auto k = u.knots();
  auto v = u.values();
  for (std::size_t i = 1; i < k.size(); ++i) {
    const double a = k[i - 1], b = k[i];
    if (!(b > a)) continue;
    const double ua = v[i - 1], ub = v[i];
    double lo, hi;
    if (ua > t && ub > t) {
      lo = a;
      hi = b;
    } else if (ua > t) {
      lo = a;
      hi = a + (b - a) * (ua - t) / (ua - ub);
    } else if (ub > t) {
      lo = a + (b - a) * (t - ua) / (ub - ua);
      hi = b;
    } else {
      continue;
    }
    if (!out.empty() && out.back().second == lo) {
      out.back().second = hi;
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

LevelSample radial_level_sample(const RadialFunction& u, double s) {
  const RadialSpace& sp = u.space();
  LevelSample ls;
  ls.level = s;
  for (const auto& [lo, hi] : superlevel_intervals(u, s)) {
    ls.measure += sp.volume(hi) - sp.volume(lo);
    if (lo > 0.0) ls.perimeter += sp.perimeter(lo);
    ls.perimeter += sp.perimeter(hi);
  }
  auto k = u.knots();
  auto v = u.values();
  for (std::size_t i = 1; i < k.size(); ++i) {
    const double a = k[i - 1], b = k[i];
    const double ua = v[i - 1], ub = v[i];
    if (!(b > a) || ua == ub) continue;
    if ((ua - s) * (ub - s) < 0.0) {
      const double r = a + (b - a) * (s - ua) / (ub - ua);
      ls.rate += sp.perimeter(r) * (b - a) / std::abs(ub - ua);
    }
  }
  return ls;
}

void require_nonnegative(std::span<const double> values) {
  for (double x : values) {
    if (x < 0.0) fail_domain("distribution: negative values (split the sign first)");
  }
}

std::vector<double> breakpoint_levels(std::span<const double> values) {
  std::vector<double> levels;
  for (double x : values) {
    if (x > 0.0) levels.push_back(x);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (!levels.empty()) levels.push_back(0.0);
  return levels;
}

}  // namespace

LevelSample DistributionTable::sample(double s) const {
  if (interior) return interior(s);
  // levels are decreasing; find j with levels[j] > s > levels[j+1].
  auto it = std::lower_bound(levels.begin(), levels.end(), s, std::greater<>());
  std::size_t j = static_cast<std::size_t>(it - levels.begin());
  if (j == 0 || j >= levels.size()) fail_range("distribution sample: level outside the table");
  --j;
  const double width = levels[j] - levels[j + 1];
  LevelSample ls;
  ls.level = s;
  ls.rate = (measures[j + 1] - measures[j]) / width;
  ls.measure = measures[j] + ls.rate * (levels[j] - s);
  ls.perimeter = levelPerimeters[j + 1];
  return ls;
}

DistributionTable distribution(const RadialFunction& u) {
  require_nonnegative(u.values());
  DistributionTable d;
  d.levels = breakpoint_levels(u.values());
  if (d.levels.empty()) return d;
  d.hasPerimeters = true;
  const RadialSpace& sp = u.space();
  for (double t : d.levels) {
    double measure = 0.0, perim = 0.0;
    for (const auto& [lo, hi] : superlevel_intervals(u, t)) {
      measure += sp.volume(hi) - sp.volume(lo);
      if (lo > 0.0) perim += sp.perimeter(lo);
      perim += sp.perimeter(hi);
    }
    double plateau = 0.0;
    if (t > 0.0) {
      auto k = u.knots();
      auto v = u.values();
      for (std::size_t i = 1; i < k.size(); ++i) {
        if (k[i] > k[i - 1] && v[i] == t && v[i - 1] == t) plateau += sp.volume(k[i]) - sp.volume(k[i - 1]);
      }
    }
    d.measures.push_back(measure);
    d.plateauMeasures.push_back(plateau);
    d.levelPerimeters.push_back(perim);
  }
  d.interior = [u](double s) { return radial_level_sample(u, s); };
  auto k = u.knots();
  auto v = u.values();
  auto nodes = sp.radii();
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (!(k[i] > k[i - 1]) || v[i] == v[i - 1]) continue;
    auto first = std::upper_bound(nodes.begin(), nodes.end(), k[i - 1]);
    for (auto it = first; it != nodes.end() && *it < k[i]; ++it) {
      d.kinks.push_back(v[i - 1] + (v[i] - v[i - 1]) * (*it - k[i - 1]) / (k[i] - k[i - 1]));
    }
  }
  std::sort(d.kinks.begin(), d.kinks.end());
  d.kinks.erase(std::unique(d.kinks.begin(), d.kinks.end()), d.kinks.end());
  return d;
}

DistributionTable distribution(const MeasuredFunction& u) {
  validate(u);
  require_nonnegative(u.values);
  DistributionTable d;
  d.levels = breakpoint_levels(u.values);
  for (double t : d.levels) {
    double above = 0.0, at = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      if (u.values[i] > t) above += u.measures[i];
      else if (u.values[i] == t && t > 0.0) at += u.measures[i];
    }
    d.measures.push_back(above);
    d.plateauMeasures.push_back(at);
    d.levelPerimeters.push_back(0.0);
  }
  return d;
}

DistributionTable distribution(const DiscreteFunction& u) {
  DistributionTable d = distribution(u.measured());
  d.hasPerimeters = true;
  for (std::size_t j = 0; j < d.levels.size(); ++j) {
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      if (u.values[i] > d.levels[j]) set.push_back(i);
    }
    d.levelPerimeters[j] = perimeter(*u.space, set);
  }
  return d;
}

DistributionTable rearranged_distribution(const DistributionTable& d, const RadialSpace& target) {
  if (d.mass() > target.capacity()) {
    fail_range("rearrangement: source mass " + std::to_string(d.mass()) + " exceeds target capacity " +
               std::to_string(target.capacity()));
  }
  DistributionTable r;
  r.levels = d.levels;
  r.measures = d.measures;
  r.plateauMeasures = d.plateauMeasures;
  r.hasPerimeters = true;
  r.levelPerimeters.resize(d.levels.size());
  for (std::size_t j = 0; j < d.levels.size(); ++j) {
    r.levelPerimeters[j] = d.measures[j] > 0.0 ? radial_profile(target, d.measures[j]) : 0.0;
  }
  // A(s) meets a node volume of the target: the profile is piecewise there.
  r.kinks = d.kinks;
  for (double volume : target.nodal_volumes()) {
    if (!(volume > 0.0) || volume >= d.mass()) continue;
    for (std::size_t j = 0; j + 1 < d.levels.size(); ++j) {
      const double top = d.measures[j] + d.plateauMeasures[j];
      if (!(volume > top && volume < d.measures[j + 1])) continue;
      double hi = d.levels[j], lo = d.levels[j + 1];
      for (int it = 0; it < 60 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (d.sample(mid).measure < volume) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      r.kinks.push_back(0.5 * (lo + hi));
      break;
    }
  }
  std::sort(r.kinks.begin(), r.kinks.end());
  DistributionTable source = d;
  RadialSpace space = target;
  r.interior = [source = std::move(source), space = std::move(space)](double s) {
    LevelSample ls = source.sample(s);
    ls.perimeter = ls.measure > 0.0 ? radial_profile(space, ls.measure) : 0.0;
    return ls;
  };
  return r;
}

CoareaEnergy coarea_gradient_norm(const DistributionTable& d, double p, double rtol) {
  if (!(p > 1.0)) fail_domain("coarea_gradient_norm: p must exceed 1");
  if (!d.hasPerimeters && !d.empty()) fail_input("coarea_gradient_norm: distribution carries no perimeters");
  CoareaEnergy out;
  for (std::size_t j = 0; j + 1 < d.levels.size(); ++j) {
    const double hi = d.levels[j], lo = d.levels[j + 1];
    const LevelSample mid = d.sample(0.5 * (hi + lo));
    if (mid.rate == 0.0) {
      if (mid.perimeter > 0.0) {
        ++out.flatGaps;
        out.infinite = true;
      }
      continue;
    }
    auto integrand = [&](double s) {
      const LevelSample ls = d.sample(s);
      if (ls.perimeter == 0.0) return 0.0;
      if (ls.rate == 0.0) return kInfinity;
      return std::pow(ls.perimeter, p) * std::pow(ls.rate, 1.0 - p);
    };
    if (!d.interior) {
      out.value += integrand(mid.level) * (hi - lo);
      continue;
    }
    std::vector<double> cuts{lo};
    for (auto it = std::upper_bound(d.kinks.begin(), d.kinks.end(), lo); it != d.kinks.end() && *it < hi; ++it) {
      cuts.push_back(*it);
    }
    cuts.push_back(hi);
    // Panels next to a peak are too narrow for a relative target; an
    // absolute floor shared over the gap keeps them from recursing on noise.
    double coarse = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) coarse += quad::fixed(integrand, cuts[k], cuts[k + 1], 10);
    const quad::Tolerance tol{rtol * std::abs(coarse) / static_cast<double>(cuts.size() - 1), rtol, 30};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) out.value += quad::adaptive(integrand, cuts[k], cuts[k + 1], tol);
  }
  if (out.infinite || !std::isfinite(out.value)) {
    out.infinite = true;
    out.value = kInfinity;
  }
  return out;
}

namespace {

// Knot list under construction; keeps radii nondecreasing and collapses runs
// of equal radii to a single jump.
struct KnotBuilder {
  std::vector<double> r, v;

  void add(double radius, double value) {
    if (!r.empty()) radius = std::max(radius, r.back());
    if (!r.empty() && r.back() == radius && v.back() == value) return;
    if (r.size() >= 2 && r[r.size() - 1] == radius && r[r.size() - 2] == radius) {
      v.back() = value;
      return;
    }
    r.push_back(radius);
    v.push_back(value);
  }
};

void refine_gap(const DistributionTable& d, const RadialSpace& target, double tol, int depth, double sHi,
                double rHi, double sLo, double rLo, KnotBuilder& kb) {
  if (depth <= 0 || rLo == rHi) return;
  const double sm = 0.5 * (sHi + sLo);
  const double rTrue = target.radius_of_volume(std::min(d.sample(sm).measure, target.capacity()));
  const double rLinear = rHi + (rLo - rHi) * (sHi - sm) / (sHi - sLo);
  const double miss = std::abs(target.volume(rLinear) - target.volume(rTrue));
  if (miss <= tol) return;
  refine_gap(d, target, tol, depth - 1, sHi, rHi, sm, rTrue, kb);
  kb.add(rTrue, sm);
  refine_gap(d, target, tol, depth - 1, sm, rTrue, sLo, rLo, kb);
}

}  // namespace

RadialFunction decreasing_rearrangement(const RadialFunction& u, std::shared_ptr<const RadialSpace> target,
                                        const RearrangeOptions& opts) {
  if (!target) fail_input("decreasing_rearrangement: missing target");
  const DistributionTable d = distribution(u);
  if (d.empty()) return RadialFunction::zero(target);
  if (d.mass() > target->capacity()) {
    fail_range("decreasing_rearrangement: source mass exceeds target capacity");
  }
  const RadialSpace& sp = *target;
  const double tol = opts.massTolerance * d.mass();
  auto radius = [&](double volume) { return sp.radius_of_volume(std::min(volume, sp.capacity())); };
  KnotBuilder kb;
  kb.add(0.0, d.levels[0]);
  for (std::size_t j = 0; j + 1 < d.levels.size(); ++j) {
    const double rHi = radius(d.measures[j] + d.plateauMeasures[j]);
    kb.add(rHi, d.levels[j]);
    const double rLo = radius(d.measures[j + 1]);
    refine_gap(d, sp, tol, opts.maxDepth, d.levels[j], rHi, d.levels[j + 1], rLo, kb);
    kb.add(rLo, d.levels[j + 1]);
  }
  return RadialFunction(target, std::move(kb.r), std::move(kb.v));
}

RadialFunction decreasing_rearrangement(const MeasuredFunction& u, std::shared_ptr<const RadialSpace> target) {
  if (!target) fail_input("decreasing_rearrangement: missing target");
  validate(u);
  require_nonnegative(u.values);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.values[i] > 0.0) order.push_back(i);
  }
  if (order.empty()) return RadialFunction::zero(target);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u.values[a] > u.values[b]; });
  double mass = 0.0;
  for (std::size_t i : order) mass += u.measures[i];
  if (mass > target->capacity()) fail_range("decreasing_rearrangement: source mass exceeds target capacity");
  KnotBuilder kb;
  double cumulative = 0.0;
  kb.add(0.0, u.values[order[0]]);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double value = u.values[order[k]];
    cumulative += u.measures[order[k]];
    const bool blockEnd = k + 1 == order.size() || u.values[order[k + 1]] != value;
    if (!blockEnd) continue;
    const double r = target->radius_of_volume(std::min(cumulative, target->capacity()));
    kb.add(r, value);
    if (k + 1 < order.size()) kb.add(r, u.values[order[k + 1]]);
  }
  return RadialFunction(target, std::move(kb.r), std::move(kb.v));
}

PolyaSzegoReport polya_szego_check(const RadialFunction& u, const RadialSpace& target, double p,
                                   const DominationReport& certificate) {
  if (!certificate.dominated) fail_precondition("polya_szego_check: domination of the source profile not certified");
  const DistributionTable d = distribution(u);
  PolyaSzegoReport rep;
  const CoareaEnergy lhs = coarea_gradient_norm(rearranged_distribution(d, target), p);
  rep.lhs = lhs.value;
  rep.lhsInfinite = lhs.infinite;
  rep.rhs = u.energy(p);
  rep.sourceCoarea = coarea_gradient_norm(d, p).value;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-8) + 1e-12;
  return rep;
}

PolyaSzegoReport polya_szego_check(const DiscreteFunction& u, const RadialSpace& target, double p) {
  validate(u);
  const DiscreteMMS& s = *u.space;
  const DistributionTable d = distribution(u);
  if (d.mass() > 0.5 * s.total_measure() * (1.0 + 1e-12)) {
    fail_precondition("polya_szego_check: support exceeds half of the total measure");
  }
  const DominationReport dom = check_domination(iso_profile_bruteforce(s), target);
  if (!dom.dominated) {
    fail_precondition("polya_szego_check: target does not dominate the graph profile (worst gap " +
                      std::to_string(dom.worstGap) + " at t = " + std::to_string(dom.worstVolume) + ")");
  }
  PolyaSzegoReport rep;
  const CoareaEnergy lhs = coarea_gradient_norm(rearranged_distribution(d, target), p);
  rep.lhs = lhs.value;
  rep.lhsInfinite = lhs.infinite;
  rep.rhs = cheeger_energy(u, p);
  rep.sourceCoarea = coarea_gradient_norm(d, p).value;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-8) + 1e-12;
  return rep;
}

MedianResult median(const MeasuredFunction& u) {
  validate(u);
  const std::size_t n = u.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u.values[a] < u.values[b]; });
  const double total = u.total_measure();
  const double half = 0.5 * total;
  const double eps = 1e-12 * total;
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) cum[k + 1] = cum[k] + u.measures[order[k]];
  // c is a median iff mu(u < c) <= half and mu(u > c) <= half.
  std::size_t kStar = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (cum[k] <= half + eps) kStar = k;
  }
  std::size_t jStar = n;
  for (std::size_t j = n; j >= 1; --j) {
    if (cum[j] >= half - eps) jStar = j;
  }
  MedianResult m;
  m.hi = u.values[order[std::min(kStar, n - 1)]];
  m.lo = u.values[order[jStar - 1]];
  if (m.lo > m.hi) std::swap(m.lo, m.hi);
  m.c = 0.5 * (m.lo + m.hi);
  double below = 0.0, above = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (u.values[i] < m.c) below += u.measures[i];
    if (u.values[i] > m.c) above += u.measures[i];
  }
  if (below > half + eps || above > half + eps) fail_input("median: defining inequalities fail (internal)");
  return m;
}

MedianGapReport median_average_gap_check(const MeasuredFunction& u, double p, double tol) {
  if (!(p >= 1.0)) fail_domain("median_average_gap_check: p must be >= 1");
  validate(u);
  MedianGapReport rep;
  const double total = u.total_measure();
  rep.median = median(u).c;
  rep.mean = kernels::dot(u.measures, u.values) / total;
  rep.lhs = std::abs(rep.median - rep.mean);
  const double norm = std::pow(kernels::weighted_abs_pow_sum(u.measures, u.values, rep.mean, p), 1.0 / p);
  rep.rhs = std::pow(2.0 / total, 1.0 / p) * norm;
  rep.holds = rep.lhs <= rep.rhs + tol * std::max(1.0, rep.rhs);
  return rep;
}

MedianSplit double_rearrangement(const MeasuredFunction& u, std::shared_ptr<const RadialSpace> target) {
  if (!target) fail_input("double_rearrangement: missing target");
  validate(u);
  const double total = u.total_measure();
  if (0.5 * total > target->capacity()) {
    fail_range("double_rearrangement: target capacity below half the total measure");
  }
  const double c = median(u).c;
  MeasuredFunction plus, minus;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.values[i] > c) {
      plus.values.push_back(u.values[i] - c);
      plus.measures.push_back(u.measures[i]);
    } else if (u.values[i] < c) {
      minus.values.push_back(c - u.values[i]);
      minus.measures.push_back(u.measures[i]);
    }
  }
  auto rearrange = [&](const MeasuredFunction& part) {
    return part.values.empty() ? RadialFunction::zero(target) : decreasing_rearrangement(part, target);
  };
  return MedianSplit{c, rearrange(plus), rearrange(minus), 0.5 * total, target->radius_of_volume(0.5 * total)};
}

SplitIdentityReport split_identity_check(const MedianSplit& split, const std::function<double(double)>& F,
                                         const MeasuredFunction& source, double tol) {
  validate(source);
  const double c = split.c;
  double scale = 0.0;
  for (double x : source.values) scale = std::max(scale, std::abs(F(x)));
  if (std::abs(F(c)) > 1e-14 * (1.0 + scale)) {
    fail_precondition("split_identity_check: F(c) must vanish at the median c = " + std::to_string(c));
  }
  SplitIdentityReport rep;
  for (std::size_t i = 0; i < source.values.size(); ++i) rep.lhs += source.measures[i] * F(source.values[i]);
  rep.rhs = split.uPlus.integrate([&](double x) { return F(x + c); }) +
            split.uMinus.integrate([&](double x) { return F(c - x); });
  const double diff = std::abs(rep.lhs - rep.rhs);
  const double ref = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.relativeError = ref > 0.0 ? diff / ref : 0.0;
  rep.identityHolds = rep.relativeError <= tol;
  return rep;
}

SplitIdentityReport split_identity_check(const MedianSplit& split, const std::function<double(double)>& F,
                                         const DiscreteFunction& source, double p, double tol) {
  SplitIdentityReport rep = split_identity_check(split, F, source.measured(), tol);
  const RadialSpace& target = split.uPlus.space();
  DiscreteFunction plus{source.space, source.values}, minus{source.space, source.values};
  for (std::size_t i = 0; i < source.values.size(); ++i) {
    plus.values[i] = std::max(0.0, source.values[i] - split.c);
    minus.values[i] = std::max(0.0, split.c - source.values[i]);
  }
  auto energy = [&](const DiscreteFunction& part) {
    const DistributionTable d = distribution(part);
    return d.empty() ? 0.0 : coarea_gradient_norm(rearranged_distribution(d, target), p).value;
  };
  rep.gradientChecked = true;
  rep.p = p;
  rep.gradPlus = energy(plus);
  rep.gradMinus = energy(minus);
  rep.cheegerEnergy = cheeger_energy(source, p);
  rep.gradientHolds = rep.gradPlus + rep.gradMinus <= rep.cheegerEnergy * (1.0 + 1e-8) + 1e-12;
  return rep;
}

}  // namespace mtlab
