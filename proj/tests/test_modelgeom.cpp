#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mtlab/errors.hpp"
#include "mtlab/modelgeom.hpp"

using namespace mtlab;
using std::numbers::pi;

namespace {

double oracle_ball_volume(int n, double k, double r) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double S = 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
  return S * ts.integrate([&](double t) { return std::pow(sn(k, t), n - 1); }, 0.0, r);
}

GrowthSamples exact_samples(const ModelSpace& m, double rMax, int count) {
  GrowthSamples g;
  std::vector<double> per;
  for (int i = 1; i <= count; ++i) {
    const double r = rMax * i / count;
    g.radii.push_back(r);
    g.ballVolumes.push_back(model_ball_volume(m, r));
    per.push_back(model_sphere_area(m, r));
  }
  g.perimeters = per;
  return g;
}

}  // namespace

TEST_SUITE("modelgeom") {
  TEST_CASE("unit ball and sphere constants") {
    CHECK(unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
  }

  TEST_CASE("hyperbolic plane sphere area and ball volume") {
    const ModelSpace h = make_model_space(2, -1.0);
    // 2 pi sinh 1 and 2 pi (cosh 1 - 1).
    CHECK(model_sphere_area(h, 1.0) == doctest::Approx(7.384006873).epsilon(1e-9));
    CHECK(model_ball_volume(h, 1.0) == doctest::Approx(3.412276265).epsilon(1e-9));
  }

  TEST_CASE("ball volumes match an independent quadrature") {
    for (int n : {2, 3, 4}) {
      for (double k : {-1.0, -0.25, 0.0, 0.5, 1.0}) {
        const ModelSpace m = make_model_space(n, k);
        for (double r : {0.01, 0.3, 1.0, 2.0}) {
          if (r >= m.horizon()) continue;
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(r);
          CHECK(model_ball_volume(m, r) == doctest::Approx(oracle_ball_volume(n, k, r)).epsilon(1e-10));
        }
      }
    }
  }

  TEST_CASE("positive curvature horizon") {
    const ModelSpace s = make_model_space(3, 1.0);
    CHECK(s.horizon() == doctest::Approx(pi * std::sqrt(2.0)));
    CHECK(make_model_space(2, -1.0).horizon() == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(model_sphere_area(s, s.horizon()), DomainError);
    CHECK(model_sphere_area(s, 0.0) == 0.0);
  }

  TEST_CASE("Bishop-Gromov passes on exact model data") {
    for (int n : {2, 3}) {
      for (double k : {-1.0, 0.0, 1.0}) {
        const ModelSpace m = make_model_space(n, k);
        const double top = std::min(4.0, 0.95 * m.horizon());
        const BishopGromovReport rep = bishop_gromov_check(exact_samples(m, top, 200), m);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(rep.monotoneVolumeRatio);
        CHECK(rep.perimeterRatioMonotone);
        CHECK(rep.perimeterLeqVolumeRatio);
        CHECK(rep.worstViolation <= 0.0);
      }
    }
  }

  TEST_CASE("Bishop-Gromov flags a planted violation") {
    const ModelSpace m = make_model_space(2, -1.0);
    GrowthSamples g = exact_samples(m, 3.0, 100);
    g.ballVolumes[60] *= 1.02;
    const BishopGromovReport rep = bishop_gromov_check(g, m);
    CHECK_FALSE(rep.monotoneVolumeRatio);
    CHECK(rep.worstViolation > 0.0);
    CHECK((rep.worstIndex == 60 || rep.worstIndex == 61));
  }

  TEST_CASE("samples must be sorted and positive") {
    GrowthSamples g{{1.0, 0.5}, {1.0, 2.0}, std::nullopt};
    CHECK_THROWS_AS(validate(g), InputError);
    GrowthSamples h{{1.0, 2.0}, {1.0, -2.0}, std::nullopt};
    CHECK_THROWS_AS(validate(h), InputError);
  }

  TEST_CASE("asymptotic growth ratio of a cone") {
    GrowthSamples g;
    for (int i = 1; i <= 200; ++i) {
      const double r = 1e-4 * std::pow(1.05, i);
      g.radii.push_back(r);
      g.ballVolumes.push_back(0.5 * pi * r * r * (1.0 + r));
    }
    const WindowedEstimate est = asymptotic_growth_ratio(g, 2);
    CHECK(est.value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(est.windowSize == decile_window(200));
    CHECK(est.reliable);
  }

  TEST_CASE("decile window") {
    CHECK(decile_window(10) == 3);
    CHECK(decile_window(2) == 2);
    CHECK(decile_window(95) == 10);
  }
}
