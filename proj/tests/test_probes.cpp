#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mtlab/errors.hpp"
#include "mtlab/modelgeom.hpp"
#include "mtlab/probes.hpp"
#include "support.hpp"

using namespace mtlab;
using std::numbers::pi;

namespace {

std::shared_ptr<const RadialSpace> cone(int n, double theta) {
  return std::make_shared<const RadialSpace>(cone_space(n, theta, 2.0, 400));
}

std::shared_ptr<const RadialSpace> trumpet(int n, double beta, double rMax = 4.0) {
  return std::make_shared<const RadialSpace>(trumpet_space(n, beta, rMax, 400));
}

}  // namespace

TEST_SUITE("probes") {
  TEST_CASE("Moser probe constants") {
    const MoserProbe p{2, 1.0, 0.01, 1.0, 0.1};
    CHECK(p.t0() == doctest::Approx(2.0 * std::log(10.0)).epsilon(1e-15));
    // 1 / (n theta^{1/n} (1 + eta)^{1/n} s^{1/n} ln(R/r)^{1/n}) with s = 2 pi.
    const double C = 1.0 / (2.0 * std::sqrt(1.01 * 2.0 * pi * std::log(10.0)));
    CHECK(p.C() == doctest::Approx(C).epsilon(1e-15));
    CHECK(p.C() == doctest::Approx(0.1308011430).epsilon(1e-9));
    CHECK_THROWS_AS(validate(MoserProbe{2, 1.0, 0.01, 1.0, 1.5}), DomainError);
    CHECK_THROWS_AS(validate(MoserProbe{2, 1.0, 1.0, 1.0, 0.1}), DomainError);
  }

  TEST_CASE("Moser function shape") {
    const MoserProbe p{2, 1.0, 0.01, 1.0, 0.1};
    const RadialFunction u = moser_function(p, cone(2, 1.0));
    CHECK(u.value(0.05) == doctest::Approx(p.C() * p.t0()).epsilon(1e-15));
    CHECK(u.value(0.1) == doctest::Approx(p.C() * p.t0()).epsilon(1e-15));
    CHECK(u.value(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(u.value(1.5) == 0.0);
    // Knots sit on C n ln(R / rho).
    CHECK(u.value(0.3) == doctest::Approx(p.C() * 2.0 * std::log(1.0 / 0.3)).epsilon(1e-5));
    CHECK(u.is_nonincreasing());
    auto small = std::make_shared<const RadialSpace>(cone_space(2, 1.0, 0.5, 100));
    CHECK_THROWS_AS(moser_function(p, small), RangeError);
  }

  TEST_CASE("Euclidean Moser energy is 1 / (1 + eta)") {
    for (int n : {2, 3}) {
      for (double eta : {0.5, 0.1, 0.01, 0.001}) {
        const MoserProbe p{n, 1.0, eta, 1.0, 0.01};
        const MoserEnergyReport r = moser_energy_bound_check(p, cone(n, 1.0));
        CAPTURE(n);
        CAPTURE(eta);
        // Chords over log-spaced knots overshoot the exact energy by O(h^2),
        // h = ln 10 / 200.
        CHECK(r.energy == doctest::Approx(1.0 / (1.0 + eta)).epsilon(5e-5));
        CHECK(r.energy >= 1.0 / (1.0 + eta));
        CHECK(r.energy <= 1.0);
        CHECK(r.holds);
        CHECK(r.bound == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("Moser energy scales with the perimeter and not with r") {
    const MoserProbe p{2, 1.0, 0.01, 1.0, 0.05};
    const double full = moser_energy_bound_check(p, cone(2, 1.0)).energy;
    const double half = moser_energy_bound_check(p, cone(2, 0.5)).energy;
    CHECK(half == doctest::Approx(0.5 * full).epsilon(1e-12));
    double prev = 2.0;
    for (double eta : {0.001, 0.01, 0.1, 0.5}) {
      const double e = moser_energy_bound_check(MoserProbe{2, 1.0, eta, 1.0, 0.05}, cone(2, 1.0)).energy;
      CHECK(e > 0.0);
      CHECK(e < prev);
      prev = e;
    }
    // C carries ln(R / r), so the energy does not depend on r.
    for (double r : {0.5, 0.9, 0.999}) {
      CHECK(moser_energy_bound_check(MoserProbe{2, 1.0, 0.01, 1.0, r}, cone(2, 1.0)).energy ==
            doctest::Approx(1.0 / 1.01).epsilon(5e-5));
    }
  }

  TEST_CASE("Moser energy needs the perimeter comparison") {
    auto h = trumpet(2, 1.0);
    CHECK(perimeter_comparison(*h, 1.0, 0.01, 0.2).holds);
    CHECK_FALSE(perimeter_comparison(*h, 1.0, 0.01, 1.0).holds);
    CHECK_THROWS_AS(moser_energy_bound_check(MoserProbe{2, 1.0, 0.01, 1.0, 0.1}, h), PreconditionError);
    // sinh(R) / R = 1 + eta at the largest admissible radius.
    const double R = moser_max_radius(*h, 1.0, 0.01);
    CHECK(std::sinh(R) / R == doctest::Approx(1.01).epsilon(1e-6));
  }

  TEST_CASE("scan verdicts") {
    auto t = trumpet(2, 0.5);
    const ScanSettings s = default_scan_settings(*t);
    CHECK(s.theta == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(s.R == doctest::Approx(0.2446).epsilon(1e-3));
    const std::vector<double> grid = decade_grid(s.R, 1e-6);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == doctest::Approx(0.1 * s.R));
    const BlowupScan zero = blowup_scan(t, {0.0}, grid, s);
    CHECK(zero.verdicts.front().verdict == Verdict::Bounded);
    for (const ScanRow& row : zero.rows) CHECK(row.value == 0.0);
    const double thr = mt_threshold(2, 0.5);
    const BlowupScan far = blowup_scan(t, {3.0 * thr}, grid, s);
    CHECK(far.verdicts.front().verdict == Verdict::Divergent);
    CHECK(far.verdicts.front().decadeFactor >= 10.0);
    for (std::size_t i = 1; i < far.rows.size(); ++i) CHECK(far.rows[i].logValue > far.rows[i - 1].logValue);
    CHECK(std::string(verdict_name(Verdict::Inconclusive)) == "inconclusive");
    CHECK_THROWS_AS(blowup_scan(t, {1.0}, {1e-3, 1e-2}, s), DomainError);
  }

  TEST_CASE("monotone growth above the threshold over four decades") {
    auto t = trumpet(2, 0.5);
    ScanSettings s = default_scan_settings(*t);
    const BlowupScan scan = blowup_scan(t, {1.2 * mt_threshold(2, 0.5)}, decade_grid(s.R, 1e-5), s);
    for (std::size_t i = 1; i < scan.rows.size(); ++i) CHECK(scan.rows[i].value > scan.rows[i - 1].value);
  }

  TEST_CASE("bump sequence") {
    const double C = trumpet_doubling_constant(2);
    CHECK(C == doctest::Approx((std::cosh(2.0) - 1.0) / (std::cosh(1.0) - 1.0)).epsilon(1e-14));
    const auto family = trumpet_bump_family(2, {0.1, 1e-2, 1e-3, 1e-4});
    const BumpTable table = bump_sequence_check(family, C, 1.0);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.energiesOk);
    CHECK(table.increasing);
    for (const BumpRow& row : table.rows) {
      CHECK(row.energy == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(row.Tm == doctest::Approx(std::sqrt(1.0 / ((C - 1.0) * row.rm))).epsilon(1e-14));
      CHECK(row.value >= row.plateauBound * (1.0 - 1e-12));
    }
    // T_m^n = 1 / ((C - 1) r_m): r_m = 0.1, C = 2 gives T^2 = 10.
    const BumpTable loose = bump_sequence_check(trumpet_bump_family(2, {0.1}), C + 1.0, 1.0);
    CHECK(loose.rows.front().energy < 1.0);
    CHECK(std::pow(1.0 / ((2.0 - 1.0) * 0.1), 1.0) == doctest::Approx(10.0));
    CHECK_THROWS_AS(bump_sequence_check(family, 0.5 * (1.0 + C), 1.0), PreconditionError);
  }

  TEST_CASE("threshold estimates on trumpets") {
    for (int n : {2, 3}) {
      for (double beta : {1.0, 0.5, 0.25}) {
        const ThresholdEstimate est = threshold_estimate(trumpet(n, beta), n);
        CAPTURE(n);
        CAPTURE(beta);
        CAPTURE(est.note);
        REQUIRE(est.found);
        CHECK(est.reference == doctest::Approx(mt_threshold(n, beta)).epsilon(2e-3));
        CHECK(std::abs(est.estimate / mt_threshold(n, beta) - 1.0) <= 0.1);
        CHECK(est.lo <= est.estimate);
        CHECK(est.estimate <= est.hi);
      }
    }
  }

  TEST_CASE("threshold refuses spaces without a linear isoperimetric bound") {
    auto plane = std::make_shared<const RadialSpace>(cone_space(2, 1.0, 20.0, 400));
    CHECK_THROWS_AS(threshold_estimate(plane, 2), PreconditionError);
  }
}
