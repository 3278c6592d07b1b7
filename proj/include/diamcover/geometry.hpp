#pragma once

#include <stdexcept>
#include <vector>

#include "diamcover/rational.hpp"

namespace diamcover {

// Point in R^d with exact rational coordinates.
struct Point {
  std::vector<Rat> coords;

  Point() = default;
  explicit Point(std::vector<Rat> c) : coords(std::move(c)) {}
  Point(Rat x, Rat y) : coords{std::move(x), std::move(y)} {}

  int dim() const { return static_cast<int>(coords.size()); }
  const Rat& operator[](int i) const { return coords[static_cast<size_t>(i)]; }
  Rat& operator[](int i) { return coords[static_cast<size_t>(i)]; }

  bool operator==(const Point& o) const { return coords == o.coords; }
  bool operator!=(const Point& o) const { return !(*this == o); }
};

enum class Orientation { kLeft, kRight, kCollinear };
enum class Cmp { kLess, kEqual, kGreater };

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact squared Euclidean distance; throws DimensionMismatch.
Rat squared_distance(const Point& a, const Point& b);

// Sign of cross(b-a, c-a); 2-d only.
Orientation orientation(const Point& a, const Point& b, const Point& c);

// Compares ||b-a|| with threshold t >= 0 via squared quantities.
Cmp cmp_dist(const Point& a, const Point& b, const Rat& t);

// Convex polygon given by its hull vertices in counter-clockwise order.
// Degenerate hulls are a single point or a 2-point segment.
struct ConvexPolygon {
  std::vector<Point> vertices;

  bool is_point() const { return vertices.size() == 1; }
  bool is_segment() const { return vertices.size() == 2; }
};

// Minimal hull of a nonempty 2-d point set (monotone chain, exact
// orientation tests, collinear points elided). Throws on empty input.
ConvexPolygon convex_hull(std::vector<Point> points);

// True iff the closed convex regions share no point. Exact; handles
// point/segment degeneracies.
bool hulls_disjoint(const ConvexPolygon& p1, const ConvexPolygon& p2);

// Closed point p inside the closed convex region (2-d).
bool point_in_polygon(const Point& p, const ConvexPolygon& poly);

// Intersection of two closed disks of equal radius centered at u and v.
// Only the squared radius is representable exactly, so that is what we
// store. u == v with radius 0 is the singleton region {u}.
struct LensRegion {
  Point u, v;
  Rat r_squared;
};

bool in_lens(const Point& p, const LensRegion& lens);

// Half-plane bounded by the oriented line through a, b.
struct HalfPlane {
  Point a, b;
  Orientation side = Orientation::kLeft;  // kLeft or kRight
  bool closed = true;
};

// Membership by orientation sign; boundary points belong iff h.closed.
// Throws on a degenerate boundary (a == b).
bool in_halfplane(const Point& p, const HalfPlane& h);

}  // namespace diamcover
