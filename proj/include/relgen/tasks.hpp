#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "relgen/raster.hpp"
#include "relgen/shapegen.hpp"

namespace relgen {

// MTS:  one base object (top centre) and two candidates (bottom left/right);
//       label 0 = the bottom-left candidate matches the base, 1 = right.
// SD:   one object pair anywhere on the canvas; label 0 = same, 1 = different.
// SOSD: one pair in the top-centre band, one in the bottom-centre band;
//       label 1 = both pairs hold the same relation, 0 = the relations differ.
// RMTS: a base pair (top centre) and two candidate pairs (bottom left/right);
//       label 0 = the left pair shares the base relation, 1 = the right.
enum class TaskKind { MTS, SD, SOSD, RMTS };

inline constexpr std::array<TaskKind, 4> kAllTasks = {
    TaskKind::MTS, TaskKind::SD, TaskKind::SOSD, TaskKind::RMTS};

std::string_view task_name(TaskKind k);
std::optional<TaskKind> parse_task(std::string_view name);

inline constexpr int kCanvas = 128;
inline constexpr Rect kCanvasRect{0, 0, 128, 128};
inline constexpr Rect kTopCenter{32, 0, 64, 64};
inline constexpr Rect kBottomLeft{0, 64, 64, 64};
inline constexpr Rect kBottomRight{64, 64, 64, 64};
inline constexpr Rect kBottomCenter{32, 64, 64, 64};

// Placement region of every object, in composition order.
std::vector<Rect> task_regions(TaskKind k);

// Ground-truth relation annotations recorded alongside the label.
struct TaskMeta {
  std::optional<int> match_side;                         // MTS, RMTS
  std::optional<bool> pair_same;                         // SD
  std::optional<bool> top_same, bottom_same;             // SOSD
  std::optional<bool> base_same, left_same, right_same;  // RMTS
};

struct TaskInstance {
  TaskKind kind = TaskKind::SD;
  VariantId variant = VariantId::Original;
  int label = 0;
  Scene scene;
  TaskMeta meta;
};

// Samples a uniform admissible position for shapes[i] inside regions[i]:
// masks stay strictly inside the region interior (no canvas-border or
// region-edge contact) and every pair of objects keeps a Chebyshev gap of at
// least 3 px, so distinct objects can never fuse during segmentation.
// Throws PlacementExhausted when a shape cannot fit or no disjoint position
// is found within the attempt bound.
Scene place_objects(const std::vector<Shape>& shapes,
                    const std::vector<Rect>& regions, SeededRng& rng);

TaskInstance compose_mts(VariantId v, int label, SeededRng& rng);
TaskInstance compose_sd(VariantId v, int label, SeededRng& rng);
TaskInstance compose_sosd(VariantId v, int label, SeededRng& rng);
TaskInstance compose_rmts(VariantId v, int label, SeededRng& rng);
TaskInstance compose(TaskKind k, VariantId v, int label, SeededRng& rng);

}  // namespace relgen
