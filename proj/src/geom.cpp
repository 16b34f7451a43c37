#include "relgen/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relgen/errors.hpp"

namespace relgen {

int vertex_count(const Shape& s) {
  int n = 0;
  for (const auto& p : s.parts) n += static_cast<int>(p.vertices.cols());
  return n;
}

Vec2 centroid(const Shape& s) {
  Vec2 sum = Vec2::Zero();
  int n = 0;
  for (const auto& p : s.parts) {
    sum += p.vertices.rowwise().sum();
    n += static_cast<int>(p.vertices.cols());
  }
  if (n == 0) return Vec2::Zero();
  return sum / n;
}

bool all_parts_closed(const Shape& s) {
  for (const auto& p : s.parts)
    if (!p.closed) return false;
  return true;
}

void validate(const Shape& s) {
  if (s.parts.empty()) throw DegenerateShape("shape has no parts");
  for (const auto& p : s.parts) {
    if (p.vertices.cols() < 2)
      throw DegenerateShape("part has fewer than two vertices");
    if (!p.vertices.allFinite())
      throw DegenerateShape("non-finite vertex coordinate");
  }
  if (s.stroke_width != 1 && s.stroke_width != 2)
    throw DegenerateShape("stroke width must be 1 or 2");
  if (s.filled && !all_parts_closed(s))
    throw DegenerateShape("fill requires closed parts");
}

Shape translate(const Shape& s, double dx, double dy) {
  Shape out = s;
  const Vec2 d(dx, dy);
  for (auto& p : out.parts) p.vertices.colwise() += d;
  return out;
}

Shape scaled(const Shape& s, double factor) {
  Shape out = s;
  for (auto& p : out.parts) p.vertices *= factor;
  return out;
}

Shape centered(const Shape& s) {
  const Vec2 c = centroid(s);
  return translate(s, -c.x(), -c.y());
}

Rect bounding_box(const Shape& s) {
  long minx = std::numeric_limits<long>::max(), miny = minx;
  long maxx = std::numeric_limits<long>::min(), maxy = maxx;
  bool any = false;
  for (const auto& p : s.parts) {
    for (Eigen::Index i = 0; i < p.vertices.cols(); ++i) {
      const long x = std::lround(p.vertices(0, i));
      const long y = std::lround(p.vertices(1, i));
      minx = std::min(minx, x);
      maxx = std::max(maxx, x);
      miny = std::min(miny, y);
      maxy = std::max(maxy, y);
      any = true;
    }
  }
  if (!any) return {};
  const int grow = s.stroke_width == 2 ? 1 : 0;
  return {static_cast<int>(minx), static_cast<int>(miny),
          static_cast<int>(maxx - minx + 1) + grow,
          static_cast<int>(maxy - miny + 1) + grow};
}

int max_extent(const Shape& s) {
  const Rect b = bounding_box(s);
  return std::max(b.width, b.height);
}

namespace {

bool columns_match(const VertexList& a, const VertexList& b, Eigen::Index shift,
                   const Vec2& offset, double tol) {
  const Eigen::Index n = a.cols();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index k = (j + shift) % n;
    if (std::abs(b(0, k) - offset.x() - a(0, j)) > tol) return false;
    if (std::abs(b(1, k) - offset.y() - a(1, j)) > tol) return false;
  }
  return true;
}

}  // namespace

bool congruent_up_to_translation(const Shape& a, const Shape& b, double tol) {
  if (a.parts.size() != b.parts.size()) return false;
  const Vec2 offset = centroid(b) - centroid(a);
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    const Part& pa = a.parts[i];
    const Part& pb = b.parts[i];
    if (pa.closed != pb.closed) return false;
    if (pa.vertices.cols() != pb.vertices.cols()) return false;
    if (!pa.closed) {
      if (!columns_match(pa.vertices, pb.vertices, 0, offset, tol))
        return false;
    } else {
      const Eigen::Index n = pa.vertices.cols();
      bool matched = false;
      for (Eigen::Index shift = 0; shift < n && !matched; ++shift)
        matched = columns_match(pa.vertices, pb.vertices, shift, offset, tol);
      if (!matched) return false;
    }
  }
  return true;
}

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) -
         (a.y() - o.y()) * (b.x() - o.x());
}

bool within_span(double lo, double hi, double v) {
  if (lo > hi) std::swap(lo, hi);
  return v >= lo && v <= hi;
}

bool on_segment(const Vec2& p, const Vec2& q, const Vec2& r) {
  return within_span(p.x(), r.x(), q.x()) && within_span(p.y(), r.y(), q.y());
}

}  // namespace

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& p3,
                        const Vec2& p4) {
  const double d1 = cross2(p3, p4, p1);
  const double d2 = cross2(p3, p4, p2);
  const double d3 = cross2(p1, p2, p3);
  const double d4 = cross2(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(p3, p1, p4)) return true;
  if (d2 == 0 && on_segment(p3, p2, p4)) return true;
  if (d3 == 0 && on_segment(p1, p3, p2)) return true;
  if (d4 == 0 && on_segment(p1, p4, p2)) return true;
  return false;
}

bool self_intersects(const VertexList& v, bool closed, int stride) {
  std::vector<Eigen::Index> idx;
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; i += stride) idx.push_back(i);
  if (!closed && idx.back() != n - 1) idx.push_back(n - 1);
  const std::size_t m = idx.size();
  if (m < 3) return false;
  const std::size_t edges = closed ? m : m - 1;
  for (std::size_t i = 0; i + 1 < edges; ++i) {
    for (std::size_t j = i + 2; j < edges; ++j) {
      if (closed && i == 0 && j == edges - 1) continue;  // ring-adjacent
      const Vec2 a1 = v.col(idx[i]);
      const Vec2 a2 = v.col(idx[(i + 1) % m]);
      const Vec2 b1 = v.col(idx[j]);
      const Vec2 b2 = v.col(idx[(j + 1) % m]);
      if (segments_intersect(a1, a2, b1, b2)) return true;
    }
  }
  return false;
}

}  // namespace relgen
