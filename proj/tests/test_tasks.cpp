#include <algorithm>
#include <climits>
#include <cmath>

#include "doctest.h"
#include "relgen/errors.hpp"
#include "relgen/tasks.hpp"

using namespace relgen;

namespace {

// Smallest Chebyshev distance between pixels of two placed objects. When the
// bounding boxes alone already guarantee a gap of 3 or more, that lower bound
// is returned without the pixel scan (the tests only compare against 3).
int min_gap(const SceneObject& a, const SceneObject& b) {
  const auto axis_gap = [](int alo, int ahi, int blo, int bhi) {
    if (bhi < alo) return alo - bhi;
    if (ahi < blo) return blo - ahi;
    return 0;
  };
  const int box_dx =
      axis_gap(a.mask.box.x0 + a.offset.x(), a.mask.box.x1() + a.offset.x(),
               b.mask.box.x0 + b.offset.x(), b.mask.box.x1() + b.offset.x());
  const int box_dy =
      axis_gap(a.mask.box.y0 + a.offset.y(), a.mask.box.y1() + a.offset.y(),
               b.mask.box.y0 + b.offset.y(), b.mask.box.y1() + b.offset.y());
  if (std::max(box_dx, box_dy) >= 3) return std::max(box_dx, box_dy);

  int best = INT_MAX;
  for (const auto& pa : a.mask.pixels) {
    const int ax = pa.x() + a.offset.x();
    const int ay = pa.y() + a.offset.y();
    for (const auto& pb : b.mask.pixels) {
      const int d = std::max(std::abs(ax - (pb.x() + b.offset.x())),
                             std::abs(ay - (pb.y() + b.offset.y())));
      best = std::min(best, d);
      if (best == 0) return 0;
    }
  }
  return best;
}

bool object_inside(const SceneObject& o, const Rect& region) {
  const Rect inner = region.interior();
  return o.mask.box.x0 + o.offset.x() >= inner.x0 &&
         o.mask.box.x1() + o.offset.x() <= inner.x1() &&
         o.mask.box.y0 + o.offset.y() >= inner.y0 &&
         o.mask.box.y1() + o.offset.y() <= inner.y1();
}

void check_scene_geometry(const TaskInstance& inst) {
  const std::vector<Rect> regions = task_regions(inst.kind);
  REQUIRE(inst.scene.objects.size() == regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i)
    CHECK(object_inside(inst.scene.objects[i], regions[i]));
  for (std::size_t i = 0; i < inst.scene.objects.size(); ++i)
    for (std::size_t j = i + 1; j < inst.scene.objects.size(); ++j)
      CHECK(min_gap(inst.scene.objects[i], inst.scene.objects[j]) >= 3);
}

bool pair_matches(const Scene& s, std::size_t i, std::size_t j) {
  return masks_equal(s.objects[i].shape, s.objects[j].shape);
}

}  // namespace

TEST_SUITE("tasks") {

TEST_CASE("task names round-trip") {
  for (TaskKind k : kAllTasks) CHECK(parse_task(task_name(k)) == k);
  CHECK(task_name(TaskKind::SOSD) == "sosd");
  CHECK_FALSE(parse_task("matching").has_value());
}

TEST_CASE("task regions tile the expected areas") {
  CHECK(task_regions(TaskKind::MTS) ==
        std::vector<Rect>{kTopCenter, kBottomLeft, kBottomRight});
  CHECK(task_regions(TaskKind::SD) ==
        std::vector<Rect>{kCanvasRect, kCanvasRect});
  CHECK(task_regions(TaskKind::SOSD) ==
        std::vector<Rect>{kTopCenter, kTopCenter, kBottomCenter,
                          kBottomCenter});
  CHECK(task_regions(TaskKind::RMTS) ==
        std::vector<Rect>{kTopCenter, kTopCenter, kBottomLeft, kBottomLeft,
                          kBottomRight, kBottomRight});
  for (TaskKind k : kAllTasks)
    for (const Rect& r : task_regions(k)) CHECK(kCanvasRect.contains(r));
}

TEST_CASE("place_objects keeps masks strictly inside region interiors") {
  SeededRng rng(2024);
  const GenParams params = single_object_params();
  for (int i = 0; i < 60; ++i) {
    const Shape s = gen_shape(VariantId::Irregular, params, rng);
    const Scene scene = place_objects({s}, {kTopCenter}, rng);
    REQUIRE(scene.objects.size() == 1);
    CHECK(object_inside(scene.objects[0], kTopCenter));
    // Strictness: interior excludes the region edge itself.
    const auto& o = scene.objects[0];
    CHECK(o.mask.box.x0 + o.offset.x() >= kTopCenter.x0 + 1);
    CHECK(o.mask.box.y0 + o.offset.y() >= kTopCenter.y0 + 1);
    CHECK(o.mask.box.x1() + o.offset.x() <= kTopCenter.x1() - 1);
    CHECK(o.mask.box.y1() + o.offset.y() <= kTopCenter.y1() - 1);
  }
}

TEST_CASE("place_objects separates neighbours by at least 3 px") {
  SeededRng rng(77);
  const GenParams params = pair_member_params();
  for (int i = 0; i < 40; ++i) {
    const auto [a, b] = gen_same_pair(VariantId::Irregular, params, rng);
    const Scene scene = place_objects({a, b}, {kBottomLeft, kBottomLeft}, rng);
    REQUIRE(scene.objects.size() == 2);
    CHECK(min_gap(scene.objects[0], scene.objects[1]) >= 3);
  }
}

TEST_CASE("place_objects handles a snug fit") {
  // A 62 px square has exactly one admissible offset in a 64 px region.
  Shape big;
  {
    VertexList v(2, 4);
    v.col(0) = Vec2(0, 0);
    v.col(1) = Vec2(61, 0);
    v.col(2) = Vec2(61, 61);
    v.col(3) = Vec2(0, 61);
    big.parts.push_back({std::move(v), true});
  }
  SeededRng rng(5);
  const Scene scene = place_objects({big}, {kTopCenter}, rng);
  const auto& o = scene.objects[0];
  CHECK(o.mask.box.x0 + o.offset.x() == kTopCenter.x0 + 1);
  CHECK(o.mask.box.y0 + o.offset.y() == kTopCenter.y0 + 1);
}

TEST_CASE("place_objects failure modes") {
  SeededRng rng(9);
  Shape rect63;
  {
    VertexList v(2, 4);
    v.col(0) = Vec2(0, 0);
    v.col(1) = Vec2(62, 0);
    v.col(2) = Vec2(62, 62);
    v.col(3) = Vec2(0, 62);
    rect63.parts.push_back({std::move(v), true});
  }
  CHECK_THROWS_AS(place_objects({rect63}, {kTopCenter}, rng),
                  PlacementExhausted);

  // Two 40 px squares plus the 3 px margin cannot share a 64 px region.
  Shape rect40;
  {
    VertexList v(2, 4);
    v.col(0) = Vec2(0, 0);
    v.col(1) = Vec2(39, 0);
    v.col(2) = Vec2(39, 39);
    v.col(3) = Vec2(0, 39);
    rect40.parts.push_back({std::move(v), true});
  }
  CHECK_THROWS_AS(
      place_objects({rect40, rect40}, {kBottomLeft, kBottomLeft}, rng),
      PlacementExhausted);

  CHECK_THROWS_AS(place_objects({rect40}, {kBottomLeft, kBottomRight}, rng),
                  UsageError);
}

TEST_CASE("composed scenes respect placement geometry") {
  SeededRng master(31);
  for (TaskKind k : kAllTasks) {
    for (VariantId v : kAllVariants) {
      for (int label : {0, 1}) {
        SeededRng rng = master.split(task_name(k), 0);
        rng = rng.split(variant_name(v), label);
        const TaskInstance inst = compose(k, v, label, rng);
        CHECK(inst.kind == k);
        CHECK(inst.variant == v);
        CHECK(inst.label == label);
        check_scene_geometry(inst);
      }
    }
  }
}

TEST_CASE("labels outside {0,1} are rejected") {
  SeededRng rng(1);
  for (TaskKind k : kAllTasks) {
    CHECK_THROWS_AS(compose(k, VariantId::Original, 2, rng), UsageError);
    CHECK_THROWS_AS(compose(k, VariantId::Original, -1, rng), UsageError);
  }
}

TEST_CASE("mts puts the matching candidate on the labelled side") {
  SeededRng master(404);
  for (VariantId v : kAllVariants) {
    for (int label : {0, 1}) {
      for (int i = 0; i < 4; ++i) {
        SeededRng rng = master.split(variant_name(v), label * 10 + i);
        const TaskInstance inst = compose_mts(v, label, rng);
        REQUIRE(inst.scene.objects.size() == 3);
        CHECK(inst.meta.match_side == label);
        CHECK_FALSE(inst.meta.pair_same.has_value());
        // Object 0 is the base; 1 sits bottom-left, 2 bottom-right.
        const std::size_t match = label == 0 ? 1 : 2;
        const std::size_t other = label == 0 ? 2 : 1;
        CHECK(pair_matches(inst.scene, 0, match));
        CHECK_FALSE(pair_matches(inst.scene, 0, other));
      }
    }
  }
}

TEST_CASE("sd pairs agree with their label") {
  SeededRng master(405);
  for (VariantId v : kAllVariants) {
    for (int label : {0, 1}) {
      for (int i = 0; i < 4; ++i) {
        SeededRng rng = master.split(variant_name(v), label * 10 + i);
        const TaskInstance inst = compose_sd(v, label, rng);
        REQUIRE(inst.scene.objects.size() == 2);
        CHECK(inst.meta.pair_same == (label == 0));
        CHECK(pair_matches(inst.scene, 0, 1) == (label == 0));
      }
    }
  }
}

TEST_CASE("sosd relations multiply out to the label") {
  SeededRng master(406);
  for (VariantId v : kAllVariants) {
    for (int label : {0, 1}) {
      for (int i = 0; i < 4; ++i) {
        SeededRng rng = master.split(variant_name(v), label * 10 + i);
        const TaskInstance inst = compose_sosd(v, label, rng);
        REQUIRE(inst.scene.objects.size() == 4);
        REQUIRE(inst.meta.top_same.has_value());
        REQUIRE(inst.meta.bottom_same.has_value());
        CHECK((*inst.meta.top_same == *inst.meta.bottom_same) == (label == 1));
        CHECK(pair_matches(inst.scene, 0, 1) == *inst.meta.top_same);
        CHECK(pair_matches(inst.scene, 2, 3) == *inst.meta.bottom_same);
      }
    }
  }
}

TEST_CASE("rmts candidate relations bracket the base relation") {
  SeededRng master(407);
  for (VariantId v : kAllVariants) {
    for (int label : {0, 1}) {
      for (int i = 0; i < 4; ++i) {
        SeededRng rng = master.split(variant_name(v), label * 10 + i);
        const TaskInstance inst = compose_rmts(v, label, rng);
        REQUIRE(inst.scene.objects.size() == 6);
        REQUIRE(inst.meta.base_same.has_value());
        REQUIRE(inst.meta.left_same.has_value());
        REQUIRE(inst.meta.right_same.has_value());
        CHECK(inst.meta.match_side == label);
        CHECK(*inst.meta.left_same != *inst.meta.right_same);
        const bool match_left = *inst.meta.left_same == *inst.meta.base_same;
        CHECK(match_left == (label == 0));
        CHECK(pair_matches(inst.scene, 0, 1) == *inst.meta.base_same);
        CHECK(pair_matches(inst.scene, 2, 3) == *inst.meta.left_same);
        CHECK(pair_matches(inst.scene, 4, 5) == *inst.meta.right_same);
      }
    }
  }
}

TEST_CASE("composition is deterministic in the seed") {
  for (TaskKind k : kAllTasks) {
    SeededRng r1(5150), r2(5150);
    const TaskInstance a = compose(k, VariantId::Irregular, 1, r1);
    const TaskInstance b = compose(k, VariantId::Irregular, 1, r2);
    REQUIRE(a.scene.objects.size() == b.scene.objects.size());
    for (std::size_t i = 0; i < a.scene.objects.size(); ++i) {
      CHECK(a.scene.objects[i].offset == b.scene.objects[i].offset);
      CHECK(a.scene.objects[i].mask.box == b.scene.objects[i].mask.box);
    }
    CHECK(rasterize(a.scene) == rasterize(b.scene));

    SeededRng r3(5151);
    const TaskInstance c = compose(k, VariantId::Irregular, 1, r3);
    CHECK_FALSE(rasterize(a.scene) == rasterize(c.scene));
  }
}

TEST_CASE("random_color scenes share one visible colour") {
  SeededRng master(408);
  for (TaskKind k : kAllTasks) {
    for (int i = 0; i < 5; ++i) {
      SeededRng rng = master.split(task_name(k), i);
      const TaskInstance inst = compose(k, VariantId::RandomColor, i % 2, rng);
      const Rgb c = inst.scene.objects[0].shape.color;
      CHECK_FALSE(c == kWhite);
      CHECK((c.r <= 200 || c.g <= 200 || c.b <= 200));
      for (const auto& o : inst.scene.objects) CHECK(o.shape.color == c);

      // The rendered image uses exactly that colour for the foreground.
      const Image img = rasterize(inst.scene);
      bool found = false;
      for (int y = 0; y < img.height() && !found; ++y)
        for (int x = 0; x < img.width() && !found; ++x)
          if (!(img.at(x, y) == kWhite)) {
            CHECK(img.at(x, y) == c);
            found = true;
          }
      CHECK(found);
    }
  }
}

TEST_CASE("other variants render in black on white") {
  SeededRng rng(409);
  const TaskInstance inst = compose_sd(VariantId::Filled, 0, rng);
  const Image img = rasterize(inst.scene);
  int black = 0, other = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Rgb c = img.at(x, y);
      if (c == kBlack)
        ++black;
      else if (!(c == kWhite))
        ++other;
    }
  CHECK(black > 0);
  CHECK(other == 0);
}

}  // TEST_SUITE
