#include "homenav/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace homenav {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (cross > 0.0) return 1;
  if (cross < 0.0) return -1;
  return 0;
}

bool point_on_segment(const Segment& s, const Vec2& p) {
  if (orientation(s.a, s.b, p) != 0) return false;
  return p.x >= std::min(s.a.x, s.b.x) && p.x <= std::max(s.a.x, s.b.x) &&
         p.y >= std::min(s.a.y, s.b.y) && p.y <= std::max(s.a.y, s.b.y);
}

bool segment_intersects(const Segment& s1, const Segment& s2) {
  const int o1 = orientation(s1.a, s1.b, s2.a);
  const int o2 = orientation(s1.a, s1.b, s2.b);
  const int o3 = orientation(s2.a, s2.b, s1.a);
  const int o4 = orientation(s2.a, s2.b, s1.b);

  if (o1 != o2 && o3 != o4) return true;

  // Collinear or touching cases.
  if (o1 == 0 && point_on_segment(s1, s2.a)) return true;
  if (o2 == 0 && point_on_segment(s1, s2.b)) return true;
  if (o3 == 0 && point_on_segment(s2, s1.a)) return true;
  if (o4 == 0 && point_on_segment(s2, s1.b)) return true;
  return false;
}

double normalize_bearing(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

}  // namespace homenav
