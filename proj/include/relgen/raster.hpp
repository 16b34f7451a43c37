#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "relgen/geom.hpp"

namespace relgen {

using PlaneU8 =
    Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense RGB raster, one byte plane per channel, indexed (row, col) inside the
// planes and (x, y) through the accessors.
struct Image {
  PlaneU8 r, g, b;

  int width() const { return static_cast<int>(r.cols()); }
  int height() const { return static_cast<int>(r.rows()); }

  static Image filled(int w, int h, Rgb c) {
    Image img;
    img.r = PlaneU8::Constant(h, w, c.r);
    img.g = PlaneU8::Constant(h, w, c.g);
    img.b = PlaneU8::Constant(h, w, c.b);
    return img;
  }

  Rgb at(int x, int y) const { return {r(y, x), g(y, x), b(y, x)}; }

  void set(int x, int y, Rgb c) {
    r(y, x) = c.r;
    g(y, x) = c.g;
    b(y, x) = c.b;
  }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width() && y >= 0 && y < height();
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.r.rows() == b.r.rows() && a.r.cols() == b.r.cols() &&
           (a.r == b.r).all() && (a.g == b.g).all() && (a.b == b.b).all();
  }
};

// The set pixels of one rasterised shape in its local coordinates. Pixels are
// unique and sorted by (y, x); box is their tight bound.
struct PixelMask {
  Rect box;
  std::vector<Vec2i> pixels;

  bool empty() const { return pixels.empty(); }
};

// Rounds vertices to the pixel grid, draws every part edge with Bresenham
// lines, scanline-fills filled shapes, and widens 2 px strokes by dilating
// the 1 px mask one step toward +x and +y.
PixelMask rasterize_shape(const Shape& s);

// The +x/+y dilation used for 2 px strokes, exposed for verification.
PixelMask dilate_2x2(const PixelMask& m);

// A shape placed on the canvas at an integer offset (mask cached at
// placement time; scene pixels are mask pixels + offset).
struct SceneObject {
  Shape shape;
  Vec2i offset = Vec2i::Zero();
  PixelMask mask;
};

struct Scene {
  int canvas = 128;
  Rgb background = kWhite;
  std::vector<SceneObject> objects;
};

// Paints the scene: background everywhere, then each object's mask in its
// shape colour. No anti-aliasing, later objects would overwrite earlier ones
// (placement keeps them disjoint).
Image rasterize(const Scene& scene);

}  // namespace relgen
