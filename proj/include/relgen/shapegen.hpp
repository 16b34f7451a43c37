#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "relgen/geom.hpp"
#include "relgen/rng.hpp"

namespace relgen {

// Perceptual variants, in canonical display order.
enum class VariantId {
  Original,
  Irregular,
  Regular,
  Open,
  Wider,
  Scrambled,
  RandomColor,
  Filled,
  Lines,
  Arrows,
  Rectangles,
  StraightLines,
  ConnectedSquares,
  ConnectedCircles,
};

inline constexpr std::array<VariantId, 14> kAllVariants = {
    VariantId::Original,      VariantId::Irregular,
    VariantId::Regular,       VariantId::Open,
    VariantId::Wider,         VariantId::Scrambled,
    VariantId::RandomColor,   VariantId::Filled,
    VariantId::Lines,         VariantId::Arrows,
    VariantId::Rectangles,    VariantId::StraightLines,
    VariantId::ConnectedSquares, VariantId::ConnectedCircles,
};

// Identifier used in paths, manifests and CLI flags (e.g. "random_color").
std::string_view variant_name(VariantId v);
// Human-readable form used in figures (e.g. "Random Color").
std::string_view variant_title(VariantId v);
std::optional<VariantId> parse_variant(std::string_view name);

// Knobs for shape generation. The two factories below provide the task
// defaults; fields are exposed so tests can probe edge cases.
struct GenParams {
  std::pair<int, int> vertex_range{3, 8};  // polygon control points
  double noise_amplitude = 3.5;  // vertex jitter, px at the 10 px build radius
  std::pair<int, int> size_range{16, 48};  // admissible pixel extent
  std::vector<int> tilt_set{0, 45, 90, 135};  // straight-line tilts, degrees
  int scramble_sections = 4;
  std::pair<int, int> scramble_base_range{16, 36};  // pre-scramble extent
  int scramble_extent_cap = 48;  // post-scramble extent bound
  std::pair<int, int> arrow_shaft_range{18, 40};
  std::pair<int, int> arrow_head_range{6, 12};
};

// Objects placed one per region (MTS, SD).
GenParams single_object_params();
// Pair members placed two per region (SOSD, RMTS); smaller so two objects
// and their separation margin fit a 64x64 band.
GenParams pair_member_params();

// Bound on every rejection-sampling loop in this module; exceeding it raises
// GenerationExhausted.
inline constexpr int kMaxAttempts = 1000;

Shape gen_shape(VariantId v, const GenParams& p, SeededRng& rng);

// Two shapes standing in the "same" relation: exact copies.
std::pair<Shape, Shape> gen_same_pair(VariantId v, const GenParams& p,
                                      SeededRng& rng);

// Two shapes standing in the "different" relation. Attribute-controlled
// variants vary their free attribute (scramble, rectangle side, line length,
// connection corner, circle order); the rest resample independently until
// non-congruent with pixel IoU < 0.9.
std::pair<Shape, Shape> gen_different_pair(VariantId v, const GenParams& p,
                                           SeededRng& rng);

// Cuts a single closed ring into `sections` contiguous arcs (cut vertices
// shared by both neighbours) and displaces each arc by a random offset with
// magnitude in [4, 12] px. The result is recentred. Throws DegenerateShape
// when the input is not one closed ring with at least `sections` vertices.
Shape scramble(const Shape& s, int sections, SeededRng& rng);

// Deterministic core of scramble, exposed for verification: fragment i gets
// offsets[i] added, no recentring draw. offsets.size() must equal sections.
Shape scramble_with_offsets(const Shape& s, int sections, int start,
                            const std::vector<Vec2>& offsets);

// Uniform colour rejected while all three channels exceed 200, so the draw
// is always visible on the white background.
Rgb random_visible_color(SeededRng& rng);

// Pixel-level comparisons after aligning mask bounding-box origins.
double mask_iou(const Shape& a, const Shape& b);
bool masks_equal(const Shape& a, const Shape& b);

}  // namespace relgen
