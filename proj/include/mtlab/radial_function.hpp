#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mtlab/radial.hpp"

namespace mtlab {

// Piecewise-linear radial function on a RadialSpace. Knots start at 0 and are
// nondecreasing; a repeated knot encodes a jump. The function vanishes beyond
// the last knot, so a nonzero last value is a jump down to 0 there.
class RadialFunction {
 public:
  RadialFunction(std::shared_ptr<const RadialSpace> space, std::vector<double> knots,
                 std::vector<double> values);

  static RadialFunction zero(std::shared_ptr<const RadialSpace> space);

  const RadialSpace& space() const { return *space_; }
  const std::shared_ptr<const RadialSpace>& space_ptr() const { return space_; }
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }

  double support_radius() const;
  double max_value() const;
  double min_value() const;
  bool is_nonincreasing() const;
  bool has_jumps() const;

  // Value on the first piece containing r (left limit at a jump knot).
  double value(double r) const;

  // Sum over pieces of |slope|^p * sigma(shell); +inf when the function jumps.
  double energy(double p) const;

  // int G(u) dsigma over the support. Constant pieces are integrated exactly,
  // the others by Gauss-Legendre on each overlap with a grid cell.
  double integrate(const std::function<double(double)>& G) const;

  double lp_norm_pow(double p) const;

  // Same knots and values on another space (must reach the support radius).
  RadialFunction on(std::shared_ptr<const RadialSpace> other) const;

  // Calls visit(r0, r1, u0, u1) for every piece with r1 > r0, split at grid
  // nodes of the space so that the volume density is smooth on each call.
  void for_each_cell_piece(const std::function<void(double, double, double, double)>& visit) const;

 private:
  std::shared_ptr<const RadialSpace> space_;
  std::vector<double> knots_;
  std::vector<double> values_;
};

}  // namespace mtlab
