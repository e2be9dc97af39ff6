#include "porosplit/quadrature.hpp"

#include <cmath>
#include <utility>

namespace porosplit {

const std::vector<TriangleQuadPoint>& triangle_rule() {
  static const std::vector<TriangleQuadPoint> rule = [] {
    const double a1 = 0.445948490915964886318, w1 = 0.223381589678011465944;
    const double a2 = 0.091576213509770743460, w2 = 0.109951743655321867389;
    std::vector<TriangleQuadPoint> r;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const double b = 1.0 - 2.0 * a;
      r.push_back({a, a, 0.5 * w});
      r.push_back({b, a, 0.5 * w});
      r.push_back({a, b, 0.5 * w});
    }
    return r;
  }();
  return rule;
}

std::vector<TriangleQuadPoint> composite_triangle_rule(int levels) {
  // Each sub-triangle is the image of the reference one under an affine map.
  struct Sub {
    double x0, y0, x1, y1, x2, y2;
  };
  std::vector<Sub> subs{{0, 0, 1, 0, 0, 1}};
  for (int l = 0; l < levels; ++l) {
    std::vector<Sub> next;
    for (const Sub& s : subs) {
      const double mx01 = 0.5 * (s.x0 + s.x1), my01 = 0.5 * (s.y0 + s.y1);
      const double mx12 = 0.5 * (s.x1 + s.x2), my12 = 0.5 * (s.y1 + s.y2);
      const double mx20 = 0.5 * (s.x2 + s.x0), my20 = 0.5 * (s.y2 + s.y0);
      next.push_back({s.x0, s.y0, mx01, my01, mx20, my20});
      next.push_back({mx01, my01, s.x1, s.y1, mx12, my12});
      next.push_back({mx20, my20, mx12, my12, s.x2, s.y2});
      next.push_back({mx12, my12, mx20, my20, mx01, my01});
    }
    subs = std::move(next);
  }
  std::vector<TriangleQuadPoint> out;
  for (const Sub& s : subs) {
    const double det = std::abs((s.x1 - s.x0) * (s.y2 - s.y0) - (s.x2 - s.x0) * (s.y1 - s.y0));
    for (const auto& q : triangle_rule()) {
      out.push_back({s.x0 + (s.x1 - s.x0) * q.xi + (s.x2 - s.x0) * q.eta,
                     s.y0 + (s.y1 - s.y0) * q.xi + (s.y2 - s.y0) * q.eta,
                     q.weight * det});
    }
  }
  return out;
}

const std::vector<EdgeQuadPoint>& edge_rule() {
  static const std::vector<EdgeQuadPoint> rule = [] {
    const double r = std::sqrt(0.6);
    return std::vector<EdgeQuadPoint>{{0.5 * (1.0 - r), 5.0 / 18.0},
                                      {0.5, 8.0 / 18.0},
                                      {0.5 * (1.0 + r), 5.0 / 18.0}};
  }();
  return rule;
}

}  // namespace porosplit
