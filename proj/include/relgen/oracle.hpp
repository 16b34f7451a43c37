#pragma once

#include <vector>

#include "relgen/raster.hpp"
#include "relgen/tasks.hpp"

namespace relgen {

// Pixel set of one segmented object. Pixels are sorted by (y, x); colors is
// parallel to pixels. box is the tight bound.
struct ObjectMask {
  Rect box;
  std::vector<Vec2i> pixels;
  std::vector<Rgb> colors;

  std::size_t size() const { return pixels.size(); }
};

// Connected components of non-background pixels. Pixels within Chebyshev
// distance glue_radius of a component join it, which keeps wide strokes and
// corner-connected figures whole; placed objects sit at least 3 px apart, so
// the default radius of 2 can never bridge two of them. Components are
// returned in reading order of their bounding boxes.
std::vector<ObjectMask> connected_components(const Image& img,
                                             Rgb background = kWhite,
                                             int glue_radius = 2);

// True when the masks are translates of one another: equal pixel sets after
// aligning bounding-box origins, with matching colours pixel for pixel.
bool masks_same(const ObjectMask& a, const ObjectMask& b);

// Groups raw components into the task's objects: single-object regions take
// the union of their components (a scrambled object is its fragments), and
// two-object groups are split by searching for a bipartition into two
// translation-identical halves, falling back to distance clustering when the
// group holds a "different" pair. Output order: MTS [base, left, right];
// SD [reading order]; SOSD [top pair, bottom pair]; RMTS [base, left, right
// pairs]. Throws SegmentationAmbiguous when the expected object count cannot
// be resolved.
std::vector<ObjectMask> segment_objects(const Image& img, TaskKind kind);

// Recovers the ground-truth label for an image of the given task from pixels
// alone. Throws SegmentationAmbiguous when objects cannot be resolved and
// InconsistentScene when the scene violates the task contract (e.g. both MTS
// candidates match the base).
int solve(const Image& img, TaskKind kind);

}  // namespace relgen
