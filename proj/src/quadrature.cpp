#include "supgmg/quadrature.hpp"

#include <cmath>

#include "supgmg/error.hpp"

namespace supgmg {

std::vector<std::pair<double, double>> gauss_rule_1d(int n) {
  // Points and weights on [-1,1].
  std::vector<std::pair<double, double>> r;
  switch (n) {
    case 1:
      r = {{0.0, 2.0}};
      break;
    case 2: {
      const double p = 1.0 / std::sqrt(3.0);
      r = {{-p, 1.0}, {p, 1.0}};
      break;
    }
    case 3: {
      const double p = std::sqrt(0.6);
      r = {{-p, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {p, 5.0 / 9.0}};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      r = {{-b, wb}, {-a, wa}, {a, wa}, {b, wb}};
      break;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      r = {{-b, wb}, {-a, wa}, {0.0, 128.0 / 225.0}, {a, wa}, {b, wb}};
      break;
    }
    default:
      fail(ErrorCode::kInvalidArgument, "Gauss rule supports 1 to 5 points");
  }
  for (auto& [x, w] : r) {
    x = 0.5 * (x + 1.0);
    w *= 0.5;
  }
  return r;
}

std::vector<std::pair<std::array<double, 2>, double>> gauss_rule_2d(int n) {
  const auto g = gauss_rule_1d(n);
  std::vector<std::pair<std::array<double, 2>, double>> r;
  r.reserve(g.size() * g.size());
  for (const auto& [eta, we] : g) {
    for (const auto& [xi, wx] : g) r.push_back({{xi, eta}, wx * we});
  }
  return r;
}

Q1Point q1_point(const std::array<Point, 4>& c, double xi, double eta) {
  Q1Point q;
  q.n = {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
  const std::array<double, 4> dxi = {-(1 - eta), 1 - eta, eta, -eta};
  const std::array<double, 4> deta = {-(1 - xi), -xi, xi, 1 - xi};
  double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
  for (int a = 0; a < 4; ++a) {
    j11 += c[a].x * dxi[a];
    j12 += c[a].x * deta[a];
    j21 += c[a].y * dxi[a];
    j22 += c[a].y * deta[a];
    q.x.x += c[a].x * q.n[a];
    q.x.y += c[a].y * q.n[a];
  }
  q.det = j11 * j22 - j12 * j21;
  const double inv = 1.0 / q.det;
  for (int a = 0; a < 4; ++a) {
    q.dx[a] = inv * (j22 * dxi[a] - j21 * deta[a]);
    q.dy[a] = inv * (-j12 * dxi[a] + j11 * deta[a]);
  }
  return q;
}

}  // namespace supgmg
