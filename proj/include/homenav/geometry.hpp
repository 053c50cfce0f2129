#pragma once

#include <cmath>

namespace homenav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Sign of the cross product (b-a) x (c-a): +1 counterclockwise, -1 clockwise,
// 0 collinear.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c);

// True iff p lies on the closed segment (includes endpoints).
bool point_on_segment(const Segment& s, const Vec2& p);

// Closed-segment intersection test; collinear overlap counts as intersection.
bool segment_intersects(const Segment& s1, const Segment& s2);

// Maps any angle into [0, 2*pi).
double normalize_bearing(double radians);

}  // namespace homenav
