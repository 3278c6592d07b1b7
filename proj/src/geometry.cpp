#include "diamcover/geometry.hpp"

#include <algorithm>

namespace diamcover {

namespace {

void require_2d(const Point& p) {
  if (p.dim() != 2) throw DimensionMismatch("expected 2-dimensional point");
}

Rat cross(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool lex_less(const Point& a, const Point& b) {
  if (a[0] != b[0]) return a[0] < b[0];
  return a[1] < b[1];
}

// p on the closed segment [a,b], all collinear assumed.
bool on_segment_collinear(const Point& p, const Point& a, const Point& b) {
  Rat lox = std::min(a[0], b[0]), hix = std::max(a[0], b[0]);
  Rat loy = std::min(a[1], b[1]), hiy = std::max(a[1], b[1]);
  return lox <= p[0] && p[0] <= hix && loy <= p[1] && p[1] <= hiy;
}

// Closed segment intersection test, exact, including collinear overlap.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  Rat d1 = cross(c, d, a);
  Rat d2 = cross(c, d, b);
  Rat d3 = cross(a, b, c);
  Rat d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment_collinear(a, c, d)) return true;
  if (d2 == 0 && on_segment_collinear(b, c, d)) return true;
  if (d3 == 0 && on_segment_collinear(c, a, b)) return true;
  if (d4 == 0 && on_segment_collinear(d, a, b)) return true;
  return false;
}

}  // namespace

Rat squared_distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("points of different dimension");
  Rat acc = 0;
  for (int i = 0; i < a.dim(); ++i) {
    Rat d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

Orientation orientation(const Point& a, const Point& b, const Point& c) {
  require_2d(a);
  require_2d(b);
  require_2d(c);
  Rat x = cross(a, b, c);
  if (x > 0) return Orientation::kLeft;
  if (x < 0) return Orientation::kRight;
  return Orientation::kCollinear;
}

Cmp cmp_dist(const Point& a, const Point& b, const Rat& t) {
  if (t < 0) throw std::invalid_argument("cmp_dist: negative threshold");
  Rat d2 = squared_distance(a, b);
  Rat t2 = t * t;
  if (d2 < t2) return Cmp::kLess;
  if (d2 > t2) return Cmp::kGreater;
  return Cmp::kEqual;
}

ConvexPolygon convex_hull(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty input");
  for (const Point& p : points) require_2d(p);
  std::sort(points.begin(), points.end(), lex_less);
  points.erase(std::unique(points.begin(), points.end()), points.end());

  size_t n = points.size();
  if (n <= 2) return ConvexPolygon{std::move(points)};

  // Monotone chain; strict turns only, so collinear points are elided.
  std::vector<Point> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  for (size_t i = n - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() == 2 && hull[0] == hull[1]) hull.pop_back();
  return ConvexPolygon{std::move(hull)};
}

bool point_in_polygon(const Point& p, const ConvexPolygon& poly) {
  require_2d(p);
  const auto& v = poly.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return p == v[0];
  if (v.size() == 2)
    return orientation(v[0], v[1], p) == Orientation::kCollinear &&
           on_segment_collinear(p, v[0], v[1]);
  for (size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    if (orientation(a, b, p) == Orientation::kRight) return false;
  }
  return true;
}

bool hulls_disjoint(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  const auto& u = p1.vertices;
  const auto& v = p2.vertices;
  if (u.empty() || v.empty()) return true;

  for (const Point& p : u)
    if (point_in_polygon(p, p2)) return false;
  for (const Point& p : v)
    if (point_in_polygon(p, p1)) return false;

  if (u.size() >= 2 && v.size() >= 2) {
    size_t ne1 = u.size() == 2 ? 1 : u.size();
    size_t ne2 = v.size() == 2 ? 1 : v.size();
    for (size_t i = 0; i < ne1; ++i)
      for (size_t j = 0; j < ne2; ++j)
        if (segments_intersect(u[i], u[(i + 1) % u.size()], v[j], v[(j + 1) % v.size()]))
          return false;
  }
  return true;
}

bool in_lens(const Point& p, const LensRegion& lens) {
  return squared_distance(p, lens.u) <= lens.r_squared &&
         squared_distance(p, lens.v) <= lens.r_squared;
}

bool in_halfplane(const Point& p, const HalfPlane& h) {
  if (h.a == h.b) throw std::invalid_argument("in_halfplane: degenerate boundary");
  if (h.side == Orientation::kCollinear)
    throw std::invalid_argument("in_halfplane: side must be left or right");
  Orientation o = orientation(h.a, h.b, p);
  if (o == Orientation::kCollinear) return h.closed;
  return o == h.side;
}

}  // namespace diamcover
