#include "mtlab/quadrature.hpp"

#include <array>
#include <numbers>

namespace mtlab::quad {
namespace {

struct Table {
  std::array<std::array<double, kMaxOrder>, kMaxOrder + 1> nodes{};
  std::array<std::array<double, kMaxOrder>, kMaxOrder + 1> weights{};
  std::array<Rule, kMaxOrder + 1> rules{};

  Table() {
    for (int n = 1; n <= kMaxOrder; ++n) {
      for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = x;
          for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
          }
          dp = n * (x * p1 - p0) / (x * x - 1.0);
          const double dx = p1 / dp;
          x -= dx;
          if (std::abs(dx) < 1e-16) break;
        }
        {
          double p0 = 1.0, p1 = x;
          for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
          }
          dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        nodes[n][i] = x;
        weights[n][i] = 2.0 / ((1.0 - x * x) * dp * dp);
      }
      rules[n] = Rule{std::span<const double>(nodes[n].data(), n),
                      std::span<const double>(weights[n].data(), n)};
    }
  }
};

}  // namespace

const Rule& gauss_legendre(int order) {
  static const Table table;
  if (order < 1) order = 1;
  if (order > kMaxOrder) order = kMaxOrder;
  return table.rules[order];
}

}  // namespace mtlab::quad
