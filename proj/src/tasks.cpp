#include "relgen/tasks.hpp"

#include <algorithm>

#include "relgen/errors.hpp"

namespace relgen {

namespace {

// Minimum Chebyshev distance between pixels of distinct objects. Must exceed
// the oracle's component-gluing radius (2 px) or separate objects could merge.
constexpr int kObjectGap = 3;

void require_binary_label(int label) {
  if (label != 0 && label != 1) throw UsageError("label must be 0 or 1");
}

Rgb shared_image_color(std::vector<Shape>& shapes, VariantId v, SeededRng& rng) {
  if (v != VariantId::RandomColor) return kBlack;
  const Rgb c = random_visible_color(rng);
  for (auto& s : shapes) s.color = c;
  return c;
}

}  // namespace

std::string_view task_name(TaskKind k) {
  switch (k) {
    case TaskKind::MTS: return "mts";
    case TaskKind::SD: return "sd";
    case TaskKind::SOSD: return "sosd";
    case TaskKind::RMTS: return "rmts";
  }
  return "";
}

std::optional<TaskKind> parse_task(std::string_view name) {
  for (TaskKind k : kAllTasks)
    if (task_name(k) == name) return k;
  return std::nullopt;
}

std::vector<Rect> task_regions(TaskKind k) {
  switch (k) {
    case TaskKind::MTS:
      return {kTopCenter, kBottomLeft, kBottomRight};
    case TaskKind::SD:
      return {kCanvasRect, kCanvasRect};
    case TaskKind::SOSD:
      return {kTopCenter, kTopCenter, kBottomCenter, kBottomCenter};
    case TaskKind::RMTS:
      return {kTopCenter, kTopCenter, kBottomLeft,
              kBottomLeft, kBottomRight, kBottomRight};
  }
  return {};
}

Scene place_objects(const std::vector<Shape>& shapes,
                    const std::vector<Rect>& regions, SeededRng& rng) {
  if (shapes.size() != regions.size())
    throw UsageError("place_objects: one region per shape required");

  struct Prepared {
    PixelMask mask;
    int ox_lo, ox_hi, oy_lo, oy_hi;  // admissible offsets within the region
  };
  std::vector<Prepared> prepared;
  prepared.reserve(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    Prepared p{rasterize_shape(shapes[i]), 0, 0, 0, 0};
    if (p.mask.empty()) throw DegenerateShape("shape rasterises to no pixels");
    const Rect inner = regions[i].interior();
    p.ox_lo = inner.x0 - p.mask.box.x0;
    p.ox_hi = inner.x1() - p.mask.box.x1();
    p.oy_lo = inner.y0 - p.mask.box.y0;
    p.oy_hi = inner.y1() - p.mask.box.y1();
    if (p.ox_lo > p.ox_hi || p.oy_lo > p.oy_hi)
      throw PlacementExhausted("shape larger than its placement region");
    prepared.push_back(std::move(p));
  }

  // Occupancy is pre-dilated: placing marks every cell within Chebyshev
  // distance kObjectGap-1 of an object pixel, so a single lookup per
  // candidate pixel enforces the full separation margin.
  std::vector<std::uint8_t> occupied(
      static_cast<std::size_t>(kCanvas) * kCanvas, 0);
  const auto occ_at = [&](int x, int y) -> std::uint8_t& {
    return occupied[static_cast<std::size_t>(y) * kCanvas + x];
  };

  // An early object can land where no legal spot remains for a later one
  // (two near-maximal objects in one small region), so on any failure the
  // whole configuration is resampled rather than giving up.
  constexpr int kTriesPerObject = 64;
  for (int round = 0; round < kMaxAttempts; ++round) {
    Scene scene;
    std::fill(occupied.begin(), occupied.end(), 0);
    bool complete = true;

    for (std::size_t i = 0; i < shapes.size() && complete; ++i) {
      const Prepared& p = prepared[i];
      bool placed = false;
      for (int attempt = 0; attempt < kTriesPerObject && !placed; ++attempt) {
        const int ox = static_cast<int>(rng.uniform_int(p.ox_lo, p.ox_hi));
        const int oy = static_cast<int>(rng.uniform_int(p.oy_lo, p.oy_hi));
        bool clash = false;
        for (const auto& px : p.mask.pixels) {
          if (occ_at(px.x() + ox, px.y() + oy)) {
            clash = true;
            break;
          }
        }
        if (clash) continue;
        placed = true;
        for (const auto& px : p.mask.pixels) {
          const int cx = px.x() + ox;
          const int cy = px.y() + oy;
          const int r = kObjectGap - 1;
          for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
              const int x = cx + dx, y = cy + dy;
              if (x >= 0 && x < kCanvas && y >= 0 && y < kCanvas)
                occ_at(x, y) = 1;
            }
          }
        }
        scene.objects.push_back({shapes[i], Vec2i(ox, oy), p.mask});
      }
      complete = placed;
    }
    if (complete) return scene;
  }
  throw PlacementExhausted("no disjoint configuration found for " +
                           std::to_string(shapes.size()) + " objects");
}

TaskInstance compose_mts(VariantId v, int label, SeededRng& rng) {
  require_binary_label(label);
  const GenParams params = single_object_params();
  auto [base, diff] = gen_different_pair(v, params, rng);
  Shape match = base;

  std::vector<Shape> shapes;
  shapes.push_back(std::move(base));
  if (label == 0) {
    shapes.push_back(std::move(match));
    shapes.push_back(std::move(diff));
  } else {
    shapes.push_back(std::move(diff));
    shapes.push_back(std::move(match));
  }
  shared_image_color(shapes, v, rng);

  TaskInstance inst;
  inst.kind = TaskKind::MTS;
  inst.variant = v;
  inst.label = label;
  inst.scene = place_objects(shapes, task_regions(TaskKind::MTS), rng);
  inst.meta.match_side = label;
  return inst;
}

TaskInstance compose_sd(VariantId v, int label, SeededRng& rng) {
  require_binary_label(label);
  const GenParams params = single_object_params();
  auto pair = label == 0 ? gen_same_pair(v, params, rng)
                         : gen_different_pair(v, params, rng);
  std::vector<Shape> shapes{std::move(pair.first), std::move(pair.second)};
  shared_image_color(shapes, v, rng);

  TaskInstance inst;
  inst.kind = TaskKind::SD;
  inst.variant = v;
  inst.label = label;
  inst.scene = place_objects(shapes, task_regions(TaskKind::SD), rng);
  inst.meta.pair_same = (label == 0);
  return inst;
}

TaskInstance compose_sosd(VariantId v, int label, SeededRng& rng) {
  require_binary_label(label);
  const GenParams params = pair_member_params();
  bool top_same, bottom_same;
  if (label == 1) {
    top_same = bottom_same = rng.coin();
  } else {
    top_same = rng.coin();
    bottom_same = !top_same;
  }
  auto top = top_same ? gen_same_pair(v, params, rng)
                      : gen_different_pair(v, params, rng);
  auto bottom = bottom_same ? gen_same_pair(v, params, rng)
                            : gen_different_pair(v, params, rng);
  std::vector<Shape> shapes{std::move(top.first), std::move(top.second),
                            std::move(bottom.first), std::move(bottom.second)};
  shared_image_color(shapes, v, rng);

  TaskInstance inst;
  inst.kind = TaskKind::SOSD;
  inst.variant = v;
  inst.label = label;
  inst.scene = place_objects(shapes, task_regions(TaskKind::SOSD), rng);
  inst.meta.top_same = top_same;
  inst.meta.bottom_same = bottom_same;
  return inst;
}

TaskInstance compose_rmts(VariantId v, int label, SeededRng& rng) {
  require_binary_label(label);
  const GenParams params = pair_member_params();
  const bool base_same = rng.coin();
  const bool left_same = label == 0 ? base_same : !base_same;
  const bool right_same = !left_same;

  const auto make_pair = [&](bool same) {
    return same ? gen_same_pair(v, params, rng)
                : gen_different_pair(v, params, rng);
  };
  auto base = make_pair(base_same);
  auto left = make_pair(left_same);
  auto right = make_pair(right_same);
  std::vector<Shape> shapes{std::move(base.first),  std::move(base.second),
                            std::move(left.first),  std::move(left.second),
                            std::move(right.first), std::move(right.second)};
  shared_image_color(shapes, v, rng);

  TaskInstance inst;
  inst.kind = TaskKind::RMTS;
  inst.variant = v;
  inst.label = label;
  inst.scene = place_objects(shapes, task_regions(TaskKind::RMTS), rng);
  inst.meta.match_side = label;
  inst.meta.base_same = base_same;
  inst.meta.left_same = left_same;
  inst.meta.right_same = right_same;
  return inst;
}

TaskInstance compose(TaskKind k, VariantId v, int label, SeededRng& rng) {
  switch (k) {
    case TaskKind::MTS: return compose_mts(v, label, rng);
    case TaskKind::SD: return compose_sd(v, label, rng);
    case TaskKind::SOSD: return compose_sosd(v, label, rng);
    case TaskKind::RMTS: return compose_rmts(v, label, rng);
  }
  throw UsageError("unknown task");
}

}  // namespace relgen
