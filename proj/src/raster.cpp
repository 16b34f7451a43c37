#include "relgen/raster.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "relgen/errors.hpp"

namespace relgen {

namespace {

struct Grid {
  int x0 = 0, y0 = 0, w = 0, h = 0;
  std::vector<std::uint8_t> cells;

  void set(int x, int y) { cells[static_cast<std::size_t>(y - y0) * w + (x - x0)] = 1; }
  bool get(int x, int y) const {
    return cells[static_cast<std::size_t>(y - y0) * w + (x - x0)] != 0;
  }
};

void draw_line(Grid& g, int x0, int y0, int x1, int y1) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    g.set(x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

using IntRing = std::vector<Vec2i>;

// Even-odd scanline fill over the closed rings. Half-open edge spans make
// vertices on a scanline count once per monotone chain, so crossing counts
// stay even.
void fill_rings(Grid& g, const std::vector<IntRing>& rings, int ymin, int ymax) {
  std::vector<double> xs;
  for (int y = ymin; y <= ymax; ++y) {
    xs.clear();
    for (const auto& ring : rings) {
      const std::size_t n = ring.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2i a = ring[i];
        const Vec2i b = ring[(i + 1) % n];
        if (a.y() == b.y()) continue;
        const int ylo = std::min(a.y(), b.y());
        const int yhi = std::max(a.y(), b.y());
        if (y < ylo || y >= yhi) continue;
        const double t = static_cast<double>(y - a.y()) / (b.y() - a.y());
        xs.push_back(a.x() + t * (b.x() - a.x()));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      const int xa = static_cast<int>(std::ceil(xs[i]));
      const int xb = static_cast<int>(std::floor(xs[i + 1]));
      for (int x = xa; x <= xb; ++x) g.set(x, y);
    }
  }
}

PixelMask collect(const Grid& g) {
  PixelMask m;
  int minx = g.x0 + g.w, miny = g.y0 + g.h;
  int maxx = g.x0 - 1, maxy = g.y0 - 1;
  for (int y = g.y0; y < g.y0 + g.h; ++y) {
    for (int x = g.x0; x < g.x0 + g.w; ++x) {
      if (!g.get(x, y)) continue;
      m.pixels.emplace_back(x, y);
      minx = std::min(minx, x);
      maxx = std::max(maxx, x);
      miny = std::min(miny, y);
      maxy = std::max(maxy, y);
    }
  }
  if (!m.pixels.empty())
    m.box = {minx, miny, maxx - minx + 1, maxy - miny + 1};
  return m;
}

}  // namespace

PixelMask rasterize_shape(const Shape& s) {
  validate(s);

  std::vector<IntRing> rings;
  rings.reserve(s.parts.size());
  int minx = 0, miny = 0, maxx = 0, maxy = 0;
  bool first = true;
  for (const auto& p : s.parts) {
    IntRing ring;
    ring.reserve(static_cast<std::size_t>(p.vertices.cols()));
    for (Eigen::Index i = 0; i < p.vertices.cols(); ++i) {
      const int x = static_cast<int>(std::lround(p.vertices(0, i)));
      const int y = static_cast<int>(std::lround(p.vertices(1, i)));
      ring.emplace_back(x, y);
      if (first) {
        minx = maxx = x;
        miny = maxy = y;
        first = false;
      } else {
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
      }
    }
    rings.push_back(std::move(ring));
  }

  Grid g;
  g.x0 = minx;
  g.y0 = miny;
  // One spare row/column of head-room for the stroke dilation.
  g.w = maxx - minx + 2;
  g.h = maxy - miny + 2;
  g.cells.assign(static_cast<std::size_t>(g.w) * g.h, 0);

  std::vector<IntRing> closed_rings;
  for (std::size_t pi = 0; pi < s.parts.size(); ++pi) {
    const IntRing& ring = rings[pi];
    const std::size_t n = ring.size();
    const std::size_t edges = s.parts[pi].closed ? n : n - 1;
    for (std::size_t i = 0; i < edges; ++i) {
      const Vec2i a = ring[i];
      const Vec2i b = ring[(i + 1) % n];
      draw_line(g, a.x(), a.y(), b.x(), b.y());
    }
    if (s.filled && s.parts[pi].closed) closed_rings.push_back(ring);
  }
  if (!closed_rings.empty()) fill_rings(g, closed_rings, miny, maxy);

  if (s.stroke_width == 2) {
    Grid d = g;
    d.cells.assign(d.cells.size(), 0);
    for (int y = g.y0; y < g.y0 + g.h - 1; ++y)
      for (int x = g.x0; x < g.x0 + g.w - 1; ++x)
        if (g.get(x, y)) {
          d.set(x, y);
          d.set(x + 1, y);
          d.set(x, y + 1);
          d.set(x + 1, y + 1);
        }
    return collect(d);
  }
  return collect(g);
}

PixelMask dilate_2x2(const PixelMask& m) {
  if (m.empty()) return {};
  Grid g;
  g.x0 = m.box.x0;
  g.y0 = m.box.y0;
  g.w = m.box.width + 1;
  g.h = m.box.height + 1;
  g.cells.assign(static_cast<std::size_t>(g.w) * g.h, 0);
  for (const auto& p : m.pixels) {
    g.set(p.x(), p.y());
    g.set(p.x() + 1, p.y());
    g.set(p.x(), p.y() + 1);
    g.set(p.x() + 1, p.y() + 1);
  }
  return collect(g);
}

Image rasterize(const Scene& scene) {
  Image img = Image::filled(scene.canvas, scene.canvas, scene.background);
  for (const auto& obj : scene.objects) {
    for (const auto& p : obj.mask.pixels) {
      const int x = p.x() + obj.offset.x();
      const int y = p.y() + obj.offset.y();
      if (!img.in_bounds(x, y))
        throw InconsistentScene("object pixel outside canvas");
      img.set(x, y, obj.shape.color);
    }
  }
  return img;
}

}  // namespace relgen
