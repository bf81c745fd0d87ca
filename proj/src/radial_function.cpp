#include <algorithm>
#include <cmath>
#include <string>

#include "mtlab/errors.hpp"
#include "mtlab/quadrature.hpp"
#include "mtlab/radial_function.hpp"

namespace mtlab {

RadialFunction::RadialFunction(std::shared_ptr<const RadialSpace> space, std::vector<double> knots,
                               std::vector<double> values)
    : space_(std::move(space)), knots_(std::move(knots)), values_(std::move(values)) {
  if (!space_) fail_input("radial function: missing space");
  if (knots_.empty() || knots_.size() != values_.size()) {
    fail_input("radial function: knots and values must be nonempty and of equal length");
  }
  if (knots_[0] != 0.0) fail_input("radial function: first knot must be 0");
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    if (!std::isfinite(values_[k])) fail_input("radial function: values must be finite");
    if (!std::isfinite(knots_[k])) fail_input("radial function: knots must be finite");
    if (k > 0 && knots_[k] < knots_[k - 1]) fail_input("radial function: knots must be nondecreasing");
    if (k > 1 && knots_[k] == knots_[k - 2]) fail_input("radial function: a knot may repeat at most once");
  }
  if (knots_.back() > space_->max_radius()) {
    fail_range("radial function: support radius " + std::to_string(knots_.back()) + " beyond the grid (" +
               std::to_string(space_->max_radius()) + ")");
  }
}

RadialFunction RadialFunction::zero(std::shared_ptr<const RadialSpace> space) {
  return RadialFunction(std::move(space), {0.0}, {0.0});
}

double RadialFunction::support_radius() const { return knots_.back(); }

double RadialFunction::max_value() const {
  return std::max(0.0, *std::max_element(values_.begin(), values_.end()));
}

double RadialFunction::min_value() const {
  return std::min(0.0, *std::min_element(values_.begin(), values_.end()));
}

bool RadialFunction::is_nonincreasing() const {
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (values_[k] > values_[k - 1]) return false;
  }
  return values_.back() >= 0.0;
}

bool RadialFunction::has_jumps() const {
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (knots_[k] == knots_[k - 1] && values_[k] != values_[k - 1]) return true;
  }
  return values_.back() != 0.0 && knots_.back() > 0.0;
}

double RadialFunction::value(double r) const {
  if (r < 0.0 || r > knots_.back()) return 0.0;
  if (knots_.size() == 1) return r == 0.0 ? values_[0] : 0.0;
  auto it = std::lower_bound(knots_.begin() + 1, knots_.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
  const double a = knots_[k - 1], b = knots_[k];
  if (b == a) return values_[k - 1];
  return values_[k - 1] + (values_[k] - values_[k - 1]) * (r - a) / (b - a);
}

double RadialFunction::energy(double p) const {
  if (!(p > 0.0)) fail_domain("radial function energy: p must be positive");
  if (has_jumps()) return kInfinity;
  double sum = 0.0;
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    const double a = knots_[k - 1], b = knots_[k];
    if (b == a || values_[k] == values_[k - 1]) continue;
    const double slope = std::abs(values_[k] - values_[k - 1]) / (b - a);
    sum += std::pow(slope, p) * (space_->volume(b) - space_->volume(a));
  }
  return sum;
}

void RadialFunction::for_each_cell_piece(
    const std::function<void(double, double, double, double)>& visit) const {
  auto radii = space_->radii();
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    const double a = knots_[k - 1], b = knots_[k];
    if (!(b > a)) continue;
    const double ua = values_[k - 1], ub = values_[k];
    auto at = [&](double r) { return r == b ? ub : ua + (ub - ua) * (r - a) / (b - a); };
    double lo = a;
    double ulo = ua;
    auto it = std::upper_bound(radii.begin(), radii.end(), a);
    for (; it != radii.end() && *it < b; ++it) {
      const double u = at(*it);
      visit(lo, *it, ulo, u);
      lo = *it;
      ulo = u;
    }
    visit(lo, b, ulo, ub);
  }
}

double RadialFunction::integrate(const std::function<double(double)>& G) const {
  double sum = 0.0;
  const RadialSpace& s = *space_;
  for_each_cell_piece([&](double r0, double r1, double u0, double u1) {
    if (u0 == u1) {
      const double g = G(u0);
      if (g != 0.0) sum += g * (s.volume(r1) - s.volume(r0));
      return;
    }
    sum += quad::fixed(
        [&](double r) { return G(u0 + (u1 - u0) * (r - r0) / (r1 - r0)) * s.perimeter(r); }, r0, r1, 8);
  });
  return sum;
}

double RadialFunction::lp_norm_pow(double p) const {
  return integrate([p](double x) { return std::pow(std::abs(x), p); });
}

RadialFunction RadialFunction::on(std::shared_ptr<const RadialSpace> other) const {
  return RadialFunction(std::move(other), knots_, values_);
}

}  // namespace mtlab
