#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace relgen {

using Vec2 = Eigen::Vector2d;
using Vec2i = Eigen::Vector2i;
// One column per vertex.
using VertexList = Eigen::Matrix2Xd;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};

// Integer pixel rectangle covering columns [x0, x0+width-1] and rows
// [y0, y0+height-1]. width == 0 or height == 0 denotes an empty rect.
struct Rect {
  int x0 = 0, y0 = 0, width = 0, height = 0;

  int x1() const { return x0 + width - 1; }
  int y1() const { return y0 + height - 1; }
  bool empty() const { return width <= 0 || height <= 0; }

  bool contains(int x, int y) const {
    return x >= x0 && x <= x1() && y >= y0 && y <= y1();
  }
  bool contains(const Rect& o) const {
    return !o.empty() && o.x0 >= x0 && o.y0 >= y0 && o.x1() <= x1() &&
           o.y1() <= y1();
  }
  // The rect shrunk by one pixel on every side; placement targets this.
  Rect interior() const { return {x0 + 1, y0 + 1, width - 2, height - 2}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// A contour piece: an open polyline, or a closed ring when `closed` is set
// (the segment from the last vertex back to the first is drawn implicitly).
struct Part {
  VertexList vertices;
  bool closed = true;
};

// A drawable object. Most variants use a single part; scrambled fragments,
// arrows and the connected-* variants need several. Generated shapes keep
// their centroid at the local origin; placement supplies the offset.
struct Shape {
  std::vector<Part> parts;
  int stroke_width = 1;  // 1 or 2; 2 widens the mask toward +x/+y
  bool filled = false;   // closed parts only
  Rgb color = kBlack;
};

int vertex_count(const Shape& s);
Vec2 centroid(const Shape& s);
bool all_parts_closed(const Shape& s);

// Throws DegenerateShape when structural invariants are broken (no parts,
// parts with fewer than two vertices, non-finite coordinates, stroke width
// outside {1, 2}, fill on an open shape).
void validate(const Shape& s);

Shape translate(const Shape& s, double dx, double dy);
// Uniform scale about the origin.
Shape scaled(const Shape& s, double factor);
// Shape translated so its centroid sits at the origin.
Shape centered(const Shape& s);

// Integer extent of the rasterised shape: vertices are rounded to the pixel
// grid, and a stroke width of 2 grows the box one pixel toward +x/+y. Exact
// for line drawing and polygon fill as implemented by the raster module.
Rect bounding_box(const Shape& s);
// Larger side of bounding_box.
int max_extent(const Shape& s);

// True when b equals a translated copy of a: same part structure, and after
// centroid alignment every vertex matches within tol per coordinate. Closed
// parts may start at any vertex (cyclic rotation); order reversal and
// reflection never match. Styling is not compared.
bool congruent_up_to_translation(const Shape& a, const Shape& b,
                                 double tol = 1e-6);

// True when segments (p1,p2) and (p3,p4) properly cross or overlap.
bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& p3,
                        const Vec2& p4);

// True when any two non-adjacent edges of the polyline intersect. `closed`
// adds the wrap-around edge. `stride` tests a subsampled copy (every
// stride-th vertex), trading exactness for speed on dense polylines.
bool self_intersects(const VertexList& v, bool closed, int stride = 1);

}  // namespace relgen
