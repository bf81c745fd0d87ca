// Acceptance suite: one PASS/FAIL line per criterion. Run with --criterion k
// for a single criterion or without arguments for all of them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/functionals.hpp"
#include "mtlab/modelgeom.hpp"
#include "mtlab/probes.hpp"
#include "mtlab/radial.hpp"
#include "mtlab/rearrange.hpp"
#include "support.hpp"

using namespace mtlab;
using mtlab::testing::rel_err;
using mtlab::testing::uniform;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const RadialSpace> trumpet(int n, double beta, double rMax = 4.0, int nodes = 400) {
  return std::make_shared<const RadialSpace>(trumpet_space(n, beta, rMax, nodes));
}

Outcome euclidean_round_trip() {
  Outcome o{true, ""};
  for (int n : {2, 3, 4}) {
    Stopwatch sw;
    const double w = unit_ball_volume(n);
    auto f = [&](double t) { return n * std::pow(w, 1.0 / n) * std::pow(t, (n - 1.0) / n); };
    const SynthesisResult res = synthesize_from_profile(tabulate_profile(f, 1e-10, w * std::pow(5.5, n), 20), n);
    double worst = 0.0;
    for (int k = 0; k <= 499; ++k) {
      const double r = 0.01 + k * 0.01;
      worst = std::max(worst, rel_err(res.space.warp(r), r));
    }
    const double t = sw.seconds();
    const bool ok = worst <= 1e-6 && t < 1.0;
    o.pass = o.pass && ok;
    o.detail += fmt("n=%d err=%.2e t=%.2fs; ", n, worst, t);
  }
  return o;
}

Outcome hyperbolic_round_trip() {
  Outcome o{true, ""};
  for (int n : {2, 3}) {
    const ProfileTable table = profile_table(*trumpet(n, 1.0));
    const SynthesisResult res = synthesize_from_profile(table, n);
    double worst = 0.0;
    for (std::size_t j = 0; j < table.volumes.size(); ++j) {
      const double t = table.volumes[j];
      if (t > res.space.capacity()) break;
      worst = std::max(worst, rel_err(radial_profile(res.space, t), table.perimeters[j]));
    }
    const double angle = cone_angle(res.space).value;
    const bool ok = worst <= 1e-5 && std::abs(angle - 1.0) <= 1e-3;
    o.pass = o.pass && ok;
    o.detail += fmt("n=%d err=%.2e angle=%.6f; ", n, worst, angle);
  }
  return o;
}

// Largest trumpet on a halving ladder whose profile the graph dominates.
std::shared_ptr<const RadialSpace> dominated_target(const DiscreteMMS& g, const ProfileTable& profile) {
  for (double beta = 1.0; beta > 1e-3; beta *= 0.5) {
    double rMax = 3.0;
    auto t = trumpet(2, beta, rMax, 200);
    while (t->capacity() < g.total_measure() && rMax < 40.0) t = trumpet(2, beta, rMax *= 1.5, 200);
    if (t->capacity() < g.total_measure()) continue;
    if (check_domination(profile, *t).dominated) return t;
  }
  return nullptr;
}

Outcome polya_szego_suite() {
  Stopwatch sw;
  std::mt19937_64 rng(2024);
  std::size_t radialChecks = 0, radialFails = 0, equalityFails = 0;
  double worstEquality = 0.0;
  for (double beta : {1.0, 0.5}) {
    auto t = trumpet(2, beta);
    const DominationReport cert = check_domination(profile_table(*t), *t);
    for (double p : {2.0, 3.0}) {
      for (int trial = 0; trial < 100; ++trial) {
        const RadialFunction u = testing::random_radial(rng, t, uniform(rng, 0.3, 3.0));
        const PolyaSzegoReport r = polya_szego_check(u, *t, p, cert);
        ++radialChecks;
        if (!(r.lhs <= r.rhs + 1e-8)) ++radialFails;
        const RadialFunction v = testing::random_decreasing_radial(rng, t, uniform(rng, 0.3, 3.0));
        const PolyaSzegoReport e = polya_szego_check(v, *t, p, cert);
        const double gap = std::abs(e.lhs - e.rhs) / std::max(1.0, e.rhs);
        worstEquality = std::max(worstEquality, gap);
        if (!(e.lhs <= e.rhs + 1e-8) || gap > 1e-8) ++equalityFails;
      }
    }
  }
  std::size_t discreteChecks = 0, discreteFails = 0, skipped = 0, shortfall = 0;
  double worstExcess = 0.0;
  for (double p : {2.0, 3.0}) {
    // Only graphs whose profile dominates some trumpet enter the suite.
    int accepted = 0;
    for (int attempt = 0; accepted < 100 && attempt < 2000; ++attempt) {
      auto g = testing::random_graph(rng, 3 + testing::pick(rng, 6));
      auto target = dominated_target(*g, iso_profile_bruteforce(*g));
      if (!target) {
        ++skipped;
        continue;
      }
      // Nonnegative values on a random set of at most half the measure.
      std::vector<std::size_t> order(g->size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<double> u(g->size(), 0.0);
      double used = 0.0;
      for (std::size_t i : order) {
        if (used + g->measure(i) > 0.5 * g->total_measure()) continue;
        used += g->measure(i);
        u[i] = uniform(rng, 0.1, 2.0);
      }
      const PolyaSzegoReport r = polya_szego_check(DiscreteFunction{g, u}, *target, p);
      ++accepted;
      ++discreteChecks;
      if (!(r.lhs <= r.rhs + 1e-8)) {
        ++discreteFails;
        worstExcess = std::max(worstExcess, r.lhs / r.rhs);
      }
    }
    shortfall += static_cast<std::size_t>(100 - accepted);
  }
  const double t = sw.seconds();
  Outcome o;
  o.pass = radialFails == 0 && equalityFails == 0 && discreteFails == 0 && shortfall == 0 && t < 30.0;
  o.detail = fmt("radial %zu/%zu hold, equality %zu/%zu (worst gap %.1e); discrete %zu/%zu hold (worst lhs/rhs %.3f, "
                 "%zu undominated graphs rejected); t=%.1fs",
                 radialChecks - radialFails, radialChecks, radialChecks - equalityFails, radialChecks, worstEquality,
                 discreteChecks - discreteFails, discreteChecks, worstExcess, skipped, t);
  return o;
}

Outcome coarea_oracle() {
  auto plane = std::make_shared<const RadialSpace>(cone_space(2, 1.0, 2.0, 400));
  const RadialFunction u(plane, {0.0, 1.0}, {1.0, 0.0});
  const CoareaEnergy e = coarea_gradient_norm(distribution(u), 2.0);
  return {!e.infinite && std::abs(e.value - pi) <= 1e-8, fmt("value=%.15f err=%.2e", e.value, std::abs(e.value - pi))};
}

Outcome cheeger_inequality() {
  Stopwatch sw;
  std::mt19937_64 rng(7);
  std::size_t checks = 0, fails = 0;
  double worstRatio = kInfinity;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testing::random_graph(rng, 2 + testing::pick(rng, 7));
    for (double p : {1.5, 2.0, 3.0}) {
      const CheegerInequalityReport r = cheeger_inequality_check(*g, p);
      ++checks;
      if (!(r.lambdaPEstimate >= r.bound - 1e-9)) ++fails;
      if (r.bound > 0.0) worstRatio = std::min(worstRatio, r.lambdaPEstimate / r.bound);
    }
  }
  const double t = sw.seconds();
  return {fails == 0 && t < 60.0,
          fmt("%zu/%zu hold, min lambda/bound %.3f; t=%.1fs", checks - fails, checks, worstRatio, t)};
}

Outcome threshold_bisection() {
  Stopwatch sw;
  Outcome o{true, ""};
  for (double beta : {1.0, 0.5}) {
    const ThresholdEstimate est = threshold_estimate(trumpet(2, beta), 2);
    const double ref = mt_threshold(2, beta);
    const double err = est.found ? std::abs(est.estimate / ref - 1.0) : kInfinity;
    o.pass = o.pass && est.found && err <= 0.1;
    o.detail += fmt("beta=%.2f estimate=%.4f reference=%.4f err=%.2f%%; ", beta, est.estimate, ref, 100 * err);
  }
  const double t = sw.seconds();
  o.pass = o.pass && t < 120.0;
  o.detail += fmt("t=%.1fs", t);
  return o;
}

Outcome blowup_witness() {
  auto t = trumpet(2, 0.5);
  ScanSettings s = default_scan_settings(*t);
  s.rule = VerdictRule::DecadeHeuristic;
  const double thr = mt_threshold(2, 0.5);
  const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
  const BlowupScan above = blowup_scan(t, {1.2 * thr}, grid, s);
  double minFactor = kInfinity;
  for (std::size_t i = 1; i < above.rows.size(); ++i) {
    minFactor = std::min(minFactor, std::exp(above.rows[i].logValue - above.rows[i - 1].logValue));
  }
  const BlowupScan below = blowup_scan(t, {0.8 * thr}, grid, s);
  const double change = below.verdicts.front().relativeChange;
  return {minFactor >= 10.0 && change < 0.01,
          fmt("1.2x: min growth %.2fx per decade (need >= 10); 0.8x: last-decade change %.1f%% (need < 1%%)", minFactor,
              100 * change)};
}

Outcome trumpet_scaling() {
  std::mt19937_64 rng(99);
  std::size_t checks = 0, fails = 0;
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (double beta : {0.25, 0.5}) {
      auto t = trumpet(n, beta);
      for (int trial = 0; trial < 50; ++trial) {
        const RadialFunction u = testing::random_radial(rng, t, uniform(rng, 0.3, 3.0));
        const TrumpetScalingReport r = trumpet_scaling_check(u, beta, uniform(rng, 0.5, 5.0), 1e-10);
        ++checks;
        worst = std::max({worst, r.energyError, r.integralError});
        if (!r.holds) ++fails;
      }
    }
  }
  return {fails == 0, fmt("%zu/%zu hold, worst relative error %.2e", checks - fails, checks, worst)};
}

MeasuredFunction random_atoms(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  MeasuredFunction u;
  const std::size_t n = lo + testing::pick(rng, hi - lo + 1);
  for (std::size_t i = 0; i < n; ++i) {
    u.values.push_back(uniform(rng, -3.0, 3.0));
    u.measures.push_back(uniform(rng, 0.1, 1.0));
  }
  return u;
}

Outcome compact_certificates() {
  std::mt19937_64 rng(5150);
  auto target = trumpet(2, 1.0);
  std::size_t splitFails = 0;
  double worstSplit = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const MeasuredFunction u = random_atoms(rng, 3, 12);
    const MedianSplit split = double_rearrangement(u, target);
    const double c = split.c;
    const SplitIdentityReport r =
        split_identity_check(split, [c](double x) { return std::pow(std::abs(x - c), 3.0) * (x > c ? 1.0 : -0.5); }, u);
    worstSplit = std::max(worstSplit, r.relativeError);
    if (!r.identityHolds || r.relativeError > 1e-10) ++splitFails;
  }
  std::size_t gapFails = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const MeasuredFunction u = random_atoms(rng, 2, 20);
    for (double p : {1.0, 2.0, 3.0}) {
      if (!median_average_gap_check(u, p).holds) ++gapFails;
    }
  }
  std::size_t envFails = 0;
  double worstEnv = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(testing::pick(rng, 4));
    const Step3Report r = step3_envelope(m, uniform(rng, 0.01, 0.99), std::exp(uniform(rng, -4.0, 4.0)));
    worstEnv = std::max(worstEnv, r.relativeError);
    if (r.relativeError > 1e-6) ++envFails;
  }
  // Zero-average atoms with a positive median and a deep well, scaled so the
  // energies of the two rearranged parts add up to 1.
  std::size_t admissible = 0, step2Fails = 0;
  for (int trial = 0; trial < 400 && admissible < 50; ++trial) {
    MeasuredFunction u = random_atoms(rng, 4, 12);
    double mean = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) mean += u.values[i] * u.measures[i];
    mean /= u.total_measure();
    for (double& v : u.values) v -= mean;
    MedianSplit split = double_rearrangement(u, target);
    if (split.c < 0.0) {
      for (double& v : u.values) v = -v;
      split = double_rearrangement(u, target);
    }
    Step2Report probe;
    try {
      probe = step2_certificate(split, 2, 1.0, kInfinity);
    } catch (const PreconditionError&) {
      continue;
    }
    const double scale = 1.0 / std::sqrt(probe.gradPlus + probe.gradMinus);
    for (double& v : u.values) v *= scale;
    const Step2Report r = step2_certificate(double_rearrangement(u, target), 2, 1.0, 1.0);
    ++admissible;
    if (!r.holds) ++step2Fails;
  }
  Outcome o;
  o.pass = splitFails == 0 && gapFails == 0 && envFails == 0 && step2Fails == 0 && admissible > 0;
  o.detail = fmt("split %d/50 (worst %.1e); median gap %zu/600; step3 %zu/100 (worst %.1e); step2 %zu/%zu admissible hold",
                 50 - static_cast<int>(splitFails), worstSplit, 600 - gapFails, 100 - envFails, worstEnv,
                 admissible - step2Fails, admissible);
  return o;
}

GrowthSamples exact_samples(const ModelSpace& m, double top, int count) {
  GrowthSamples g;
  std::vector<double> per;
  for (int i = 1; i <= count; ++i) {
    const double r = top * i / count;
    g.radii.push_back(r);
    g.ballVolumes.push_back(model_ball_volume(m, r));
    per.push_back(model_sphere_area(m, r));
  }
  g.perimeters = per;
  return g;
}

Outcome bishop_gromov() {
  std::size_t clean = 0, total = 0, detected = 0;
  std::mt19937_64 rng(31);
  for (int n : {2, 3}) {
    for (double k : {-1.0, 0.0, 1.0}) {
      const ModelSpace m = make_model_space(n, k);
      const double top = std::min(4.0, 0.95 * m.horizon());
      GrowthSamples g = exact_samples(m, top, 200);
      const BishopGromovReport rep = bishop_gromov_check(g, m);
      ++total;
      if (rep.worstViolation <= 0.0 && rep.monotoneVolumeRatio && rep.perimeterRatioMonotone &&
          rep.perimeterLeqVolumeRatio) {
        ++clean;
      }
      // Inflate one ball volume while keeping volumes increasing.
      const std::size_t i = 20 + testing::pick(rng, 150);
      g.ballVolumes[i] = std::min(g.ballVolumes[i] * 1.02, 0.5 * (g.ballVolumes[i] + g.ballVolumes[i + 1]));
      if (bishop_gromov_check(g, m).worstViolation > 0.0) ++detected;
    }
  }
  return {clean == total && detected == total,
          fmt("%zu/%zu clean model runs, %zu/%zu planted violations detected", clean, total, detected, total)};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<const char*, std::function<Outcome()>>> list{
      {"Euclidean ODE round trip", euclidean_round_trip},
      {"hyperbolic round trip", hyperbolic_round_trip},
      {"Polya-Szego suite", polya_szego_suite},
      {"coarea oracle", coarea_oracle},
      {"Cheeger inequality", cheeger_inequality},
      {"MT threshold bisection", threshold_bisection},
      {"blow-up witness", blowup_witness},
      {"trumpet scaling identity", trumpet_scaling},
      {"compact-case certificates", compact_certificates},
      {"Bishop-Gromov", bishop_gromov},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mtlab acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (std::size_t k = 1; k <= criteria().size(); ++k) {
    if (only != 0 && static_cast<int>(k) != only) continue;
    const auto& [name, fn] = criteria()[k - 1];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu %s: %s | %s\n", k, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
