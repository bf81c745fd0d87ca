#include <algorithm>
#include <cmath>
#include <string>

#include "detail.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/radial.hpp"

namespace mtlab {
namespace {

// Indices of the strictly positive volumes of a validated table.
std::vector<std::size_t> positive_entries(const ProfileTable& f) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < f.volumes.size(); ++j) {
    if (f.volumes[j] > 0.0) idx.push_back(j);
  }
  return idx;
}

}  // namespace

void validate(const ProfileTable& f) {
  if (f.volumes.size() != f.perimeters.size()) fail_input("profile table: volumes/perimeters length mismatch");
  if (f.volumes.empty()) fail_input("profile table: empty");
  if (!(f.totalVolume > 0.0)) fail_input("profile table: totalVolume must be positive");
  for (std::size_t j = 0; j < f.volumes.size(); ++j) {
    if (!std::isfinite(f.volumes[j]) || f.volumes[j] < 0.0) fail_input("profile table: volumes must be finite and nonnegative");
    if (j > 0 && !(f.volumes[j] > f.volumes[j - 1])) fail_input("profile table: volumes must be strictly increasing");
    if (!std::isfinite(f.perimeters[j]) || f.perimeters[j] < 0.0) {
      fail_input("profile table: perimeters must be finite and nonnegative");
    }
  }
  if (f.volumes.back() > f.totalVolume) fail_input("profile table: volume beyond totalVolume");
}

ProfileTable profile_table(const RadialSpace& s, double totalVolume) {
  ProfileTable f;
  f.totalVolume = totalVolume;
  auto v = s.nodal_volumes();
  auto p = s.nodal_perimeters();
  f.volumes.assign(v.begin() + 1, v.end());
  f.perimeters.assign(p.begin() + 1, p.end());
  validate(f);
  return f;
}

ProfileTable tabulate_profile(const std::function<double(double)>& phi, double tMin, double tMax,
                              int pointsPerDecade, double totalVolume) {
  if (!(tMin > 0.0) || !(tMax > tMin)) fail_domain("tabulate_profile: need 0 < tMin < tMax");
  if (pointsPerDecade < 1) fail_domain("tabulate_profile: pointsPerDecade must be positive");
  const double decades = std::log10(tMax / tMin);
  const int count = std::max(2, static_cast<int>(std::ceil(decades * pointsPerDecade)) + 1);
  ProfileTable f;
  f.totalVolume = totalVolume;
  for (int j = 0; j < count; ++j) {
    const double t = j + 1 == count ? tMax : tMin * std::pow(10.0, decades * j / (count - 1));
    f.volumes.push_back(t);
    f.perimeters.push_back(phi(t));
  }
  validate(f);
  return f;
}

double radial_profile(const RadialSpace& s, double t) {
  if (!(t > 0.0) || t > s.capacity()) {
    fail_range("radial_profile: volume " + std::to_string(t) + " outside (0, " +
               std::to_string(s.capacity()) + "]");
  }
  auto v = s.nodal_volumes();
  auto it = std::lower_bound(v.begin(), v.end(), t);
  if (it != v.end() && *it == t) return s.nodal_perimeters()[static_cast<std::size_t>(it - v.begin())];
  return s.perimeter(s.radius_of_volume(t));
}

ProfileInterpolant::ProfileInterpolant(const ProfileTable& f) {
  validate(f);
  for (std::size_t j = 0; j < f.volumes.size(); ++j) {
    if (f.volumes[j] > 0.0) {
      if (!(f.perimeters[j] > 0.0)) throw SingularProfileError("profile vanishes at t = " + std::to_string(f.volumes[j]));
      logT_.push_back(std::log(f.volumes[j]));
      logPhi_.push_back(std::log(f.perimeters[j]));
    }
  }
  const std::size_t m = logT_.size();
  if (m < 2) fail_input("profile interpolant: need at least two positive volumes");
  std::vector<double> d(m - 1);
  for (std::size_t j = 0; j + 1 < m; ++j) d[j] = (logPhi_[j + 1] - logPhi_[j]) / (logT_[j + 1] - logT_[j]);
  slope_.assign(m, 0.0);
  slope_[0] = d[0];
  slope_[m - 1] = d[m - 2];
  for (std::size_t j = 1; j + 1 < m; ++j) {
    // Fritsch-Carlson weighted harmonic mean keeps the interpolant monotone.
    if (d[j - 1] * d[j] <= 0.0) {
      slope_[j] = 0.0;
    } else {
      const double h0 = logT_[j] - logT_[j - 1];
      const double h1 = logT_[j + 1] - logT_[j];
      const double w0 = 2 * h1 + h0, w1 = h1 + 2 * h0;
      slope_[j] = (w0 + w1) / (w0 / d[j - 1] + w1 / d[j]);
    }
  }
}

double ProfileInterpolant::operator()(double t) const {
  const double x = std::log(t);
  const std::size_t m = logT_.size();
  if (x <= logT_.front()) return std::exp(logPhi_.front() + slope_.front() * (x - logT_.front()));
  if (x >= logT_.back()) return std::exp(logPhi_.back() + slope_.back() * (x - logT_.back()));
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(logT_.begin(), logT_.end(), x) - logT_.begin()) - 1;
  if (j + 1 >= m) return std::exp(logPhi_.back());
  const double h = logT_[j + 1] - logT_[j];
  const double u = (x - logT_[j]) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double y = (2 * u3 - 3 * u2 + 1) * logPhi_[j] + (u3 - 2 * u2 + u) * h * slope_[j] +
                   (-2 * u3 + 3 * u2) * logPhi_[j + 1] + (u3 - u2) * h * slope_[j + 1];
  return std::exp(y);
}

WindowedEstimate cone_angle(const RadialSpace& s) {
  const int n = s.dimension();
  const double omega = unit_ball_volume(n);
  auto r = s.radii();
  auto v = s.nodal_volumes();
  WindowedEstimate est;
  const std::size_t count = r.size() - 1;
  est.windowSize = decile_window(count);
  double lo = kInfinity, hi = 0.0;
  for (std::size_t i = 1; i <= est.windowSize; ++i) {
    const double d = v[i] / (omega * std::pow(r[i], n));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  est.value = lo;
  est.windowUpper = r[est.windowSize];
  est.spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  est.reliable = est.spread <= 1e-3;
  return est;
}

DominationReport check_domination(const ProfileTable& phi, const RadialSpace& s, double tol) {
  validate(phi);
  DominationReport rep;
  const double half = 0.5 * phi.totalVolume;
  double largest = 0.0;
  for (double t : phi.volumes) {
    if (t > 0.0 && t <= half) largest = t;
  }
  if (largest == 0.0) fail_input("check_domination: no tabulated volume in (0, totalVolume/2]");
  rep.capacityOk = std::isfinite(half) ? s.capacity() >= half : s.capacity() >= largest;
  const double limit = std::min(largest, s.capacity());
  rep.worstGap = kInfinity;
  for (std::size_t j = 0; j < phi.volumes.size(); ++j) {
    const double t = phi.volumes[j];
    if (!(t > 0.0) || t > limit) continue;
    const double model = radial_profile(s, t);
    const double gap = (phi.perimeters[j] - model) / model;
    ++rep.checked;
    rep.halfVolumeUsed = t;
    if (gap < rep.worstGap) {
      rep.worstGap = gap;
      rep.worstVolume = t;
    }
  }
  if (rep.checked == 0) fail_input("check_domination: profile and space volume ranges are disjoint");
  rep.dominated = rep.capacityOk && rep.worstGap >= -tol;
  return rep;
}

IsoInvariants iso_invariants(const ProfileTable& phi, const std::vector<int>& mRange,
                             double stableSlope) {
  validate(phi);
  const auto idx = positive_entries(phi);
  IsoInvariants inv;
  if (idx.empty()) return inv;
  inv.windowSize = decile_window(idx.size());
  inv.windowUpper = phi.volumes[idx[inv.windowSize - 1]];

  std::vector<double> logT(inv.windowSize), logPhi(inv.windowSize);
  for (std::size_t k = 0; k < inv.windowSize; ++k) {
    logT[k] = std::log(phi.volumes[idx[k]]);
    logPhi[k] = std::log(phi.perimeters[idx[k]]);
  }
  const double phiSlope = detail::ls_slope(logT, logPhi);
  inv.exponentEstimate = phiSlope < 1.0 ? 1.0 / (1.0 - phiSlope) : kInfinity;

  for (int m : mRange) {
    if (m < 1) fail_domain("iso_invariants: m must be >= 1");
    const double omega = unit_ball_volume(m);
    RatioEstimate est;
    est.m = m;
    est.value = kInfinity;
    std::vector<double> logRatio(inv.windowSize);
    for (std::size_t k = 0; k < inv.windowSize; ++k) {
      const double t = phi.volumes[idx[k]];
      const double ratio = std::pow(phi.perimeters[idx[k]], m) / (std::pow(m, m) * omega * std::pow(t, m - 1));
      est.value = std::min(est.value, ratio);
      logRatio[k] = std::log(ratio);
    }
    est.logSlope = detail::ls_slope(logT, logRatio);
    if (est.logSlope > stableSlope) {
      est.trend = RatioTrend::Vanishing;
    } else if (est.logSlope < -stableSlope) {
      est.trend = RatioTrend::Divergent;
    } else {
      est.trend = RatioTrend::Stable;
    }
    if (!inv.isoDimensionFound && est.trend == RatioTrend::Stable && est.value > 0.0 && std::isfinite(est.value)) {
      inv.isoDimension = m;
      inv.isoDimensionFound = true;
    }
    inv.ratios[m] = est;
  }

  const double half = std::isfinite(phi.totalVolume) ? 0.5 * phi.totalVolume : kInfinity;
  inv.cheegerSlope = kInfinity;
  for (std::size_t j : idx) {
    if (phi.volumes[j] <= half) inv.cheegerSlope = std::min(inv.cheegerSlope, phi.perimeters[j] / phi.volumes[j]);
  }
  if (!std::isfinite(inv.cheegerSlope)) inv.cheegerSlope = 0.0;
  return inv;
}

SmallVolumeBound small_volume_bound_check(const ProfileTable& phi, int n, double stableSlope) {
  validate(phi);
  if (n < 2) fail_domain("small_volume_bound_check: n must be >= 2");
  const auto idx = positive_entries(phi);
  SmallVolumeBound b;
  if (idx.empty()) {
    b.flagged = true;
    return b;
  }
  b.windowSize = decile_window(idx.size());
  b.eta = phi.volumes[idx[b.windowSize - 1]];
  const double e = 1.0 - 1.0 / n;
  b.C = kInfinity;
  std::vector<double> logT, logRatio;
  for (std::size_t k = 0; k < b.windowSize; ++k) {
    const double t = phi.volumes[idx[k]];
    const double ratio = phi.perimeters[idx[k]] / std::pow(t, e);
    b.C = std::min(b.C, ratio);
    if (ratio > 0.0) {
      logT.push_back(std::log(t));
      logRatio.push_back(std::log(ratio));
    }
  }
  b.logSlope = detail::ls_slope(logT, logRatio);
  b.flagged = !(b.C > 0.0) || b.logSlope > stableSlope;
  b.holds = b.C > 0.0 && !b.flagged;
  return b;
}

BallVolumeBound ball_volume_lower_bound(const ProfileTable& phi, int n, double r) {
  if (!(r > 0.0)) fail_domain("ball_volume_lower_bound: radius must be positive");
  const SmallVolumeBound sb = small_volume_bound_check(phi, n);
  BallVolumeBound out;
  out.C = sb.C;
  out.eta = sb.eta;
  if (!sb.holds) {
    out.flagged = true;
    return out;
  }
  out.integratedForm = std::pow(sb.C * r / n, n);
  out.displayedForm = std::pow(n * sb.C * r, n);
  out.bound = std::min(sb.eta, out.integratedForm);
  return out;
}

}  // namespace mtlab
