#pragma once

#include <array>
#include <utility>
#include <vector>

#include "supgmg/mesh.hpp"

namespace supgmg {

/// Gauss-Legendre points and weights on [0,1], n = 1..5.
std::vector<std::pair<double, double>> gauss_rule_1d(int n);

/// Tensor Gauss rule on [0,1]^2: ((xi, eta), weight).
std::vector<std::pair<std::array<double, 2>, double>> gauss_rule_2d(int n);

/// Q1 shape data at one reference point of a cell: values, physical
/// gradients, Jacobian determinant and the mapped point.
struct Q1Point {
  std::array<double, 4> n{};
  std::array<double, 4> dx{};
  std::array<double, 4> dy{};
  double det = 0.0;
  Point x;
};

Q1Point q1_point(const std::array<Point, 4>& corners, double xi, double eta);

}  // namespace supgmg
