#include <cmath>
#include <set>

#include "doctest.h"
#include "relgen/errors.hpp"
#include "relgen/raster.hpp"
#include "relgen/shapegen.hpp"

using namespace relgen;

namespace {

// Per-variant expectation for the resampling-based "different" rule.
bool uses_resample_rule(VariantId v) {
  switch (v) {
    case VariantId::Scrambled:
    case VariantId::Rectangles:
    case VariantId::StraightLines:
    case VariantId::ConnectedSquares:
    case VariantId::ConnectedCircles:
      return false;
    default:
      return true;
  }
}

int line_tilt(const Shape& s) {
  const Vec2 d = s.parts[0].vertices.col(1) - s.parts[0].vertices.col(0);
  const double deg = std::atan2(d.y(), d.x()) * 180.0 / 3.14159265358979323846;
  const int t = static_cast<int>(std::lround(deg));
  return (t % 180 + 180) % 180;
}

Vec2 part_centroid(const Part& p) { return p.vertices.rowwise().mean(); }

}  // namespace

TEST_SUITE("shapegen") {

TEST_CASE("variant names round-trip and keep canonical order") {
  CHECK(kAllVariants.size() == 14);
  std::set<std::string_view> names;
  for (VariantId v : kAllVariants) {
    const auto name = variant_name(v);
    CHECK(parse_variant(name) == v);
    CHECK_FALSE(variant_title(v).empty());
    names.insert(name);
  }
  CHECK(names.size() == 14);
  CHECK(variant_name(VariantId::Original) == "original");
  CHECK(variant_name(VariantId::RandomColor) == "random_color");
  CHECK(variant_name(kAllVariants.back()) == "connected_circles");
  CHECK_FALSE(parse_variant("no_such_variant").has_value());
}

TEST_CASE("generated shapes are valid with extents in range") {
  for (const GenParams& params :
       {single_object_params(), pair_member_params()}) {
    for (VariantId v : kAllVariants) {
      SeededRng master(4085);
      for (int i = 0; i < 40; ++i) {
        SeededRng rng = master.split(variant_name(v), i);
        const Shape s = gen_shape(v, params, rng);
        CHECK_NOTHROW(validate(s));
        const int extent = max_extent(s);
        CHECK(extent >= params.size_range.first);
        CHECK(extent <= params.size_range.second);

        // Same seed, same shape.
        SeededRng replay = master.split(variant_name(v), i);
        const Shape again = gen_shape(v, params, replay);
        CHECK(congruent_up_to_translation(s, again, 0.0));
        CHECK(masks_equal(s, again));
      }
    }
  }
}

TEST_CASE("per-variant structure") {
  const GenParams params = single_object_params();
  SeededRng master(512);
  for (int i = 0; i < 25; ++i) {
    const auto gen = [&](VariantId v) {
      SeededRng rng = master.split(variant_name(v), i);
      return gen_shape(v, params, rng);
    };

    const Shape original = gen(VariantId::Original);
    CHECK(original.parts.size() == 1);
    CHECK(original.parts[0].closed);
    CHECK(original.parts[0].vertices.cols() > 20);  // spline-sampled

    const Shape irregular = gen(VariantId::Irregular);
    CHECK(irregular.parts.size() == 1);
    CHECK(irregular.parts[0].closed);
    CHECK(vertex_count(irregular) >= 3);
    CHECK(vertex_count(irregular) <= 8);
    CHECK(irregular.stroke_width == 1);
    CHECK_FALSE(irregular.filled);
    CHECK(irregular.color == kBlack);

    // Regular polygons keep every vertex at one radius.
    const Shape regular = gen(VariantId::Regular);
    const Vec2 c = centroid(regular);
    const double r0 = (regular.parts[0].vertices.col(0) - c).norm();
    for (Eigen::Index k = 1; k < regular.parts[0].vertices.cols(); ++k)
      CHECK((regular.parts[0].vertices.col(k) - c).norm() ==
            doctest::Approx(r0).epsilon(1e-9));

    CHECK_FALSE(gen(VariantId::Open).parts[0].closed);
    CHECK(gen(VariantId::Wider).stroke_width == 2);
    CHECK(gen(VariantId::Filled).filled);

    const Shape colored = gen(VariantId::RandomColor);
    CHECK_FALSE(colored.color == kWhite);
    CHECK((colored.color.r <= 200 || colored.color.g <= 200 ||
           colored.color.b <= 200));

    // The scrambled base is an intact ring; scrambling happens pair-side.
    const Shape scrambled = gen(VariantId::Scrambled);
    CHECK(scrambled.parts.size() == 1);
    CHECK(scrambled.parts[0].closed);
    CHECK(max_extent(scrambled) >= params.scramble_base_range.first);
    CHECK(max_extent(scrambled) <= params.scramble_base_range.second);

    const Shape lines = gen(VariantId::Lines);
    CHECK(lines.parts.size() == 1);
    CHECK_FALSE(lines.parts[0].closed);
    CHECK(lines.parts[0].vertices.cols() == 6);

    const Shape arrows = gen(VariantId::Arrows);
    CHECK(arrows.parts.size() >= 2);
    CHECK(arrows.parts.size() <= 3);
    CHECK_FALSE(arrows.parts[0].closed);  // shaft
    for (std::size_t k = 1; k < arrows.parts.size(); ++k) {
      CHECK(arrows.parts[k].closed);  // heads
      CHECK(arrows.parts[k].vertices.cols() == 3);
    }

    const Shape rect = gen(VariantId::Rectangles);
    CHECK(rect.parts.size() == 1);
    CHECK(rect.parts[0].vertices.cols() == 4);
    const Rect rect_box = bounding_box(rect);
    CHECK(rect_box.width >= params.size_range.first);
    CHECK(rect_box.width <= params.size_range.second);
    CHECK(rect_box.height >= params.size_range.first);
    CHECK(rect_box.height <= params.size_range.second);

    const Shape line = gen(VariantId::StraightLines);
    CHECK(line.parts.size() == 1);
    CHECK_FALSE(line.parts[0].closed);
    CHECK(line.parts[0].vertices.cols() == 2);
    CHECK(std::set<int>{0, 45, 90, 135}.count(line_tilt(line)) == 1);

    const Shape squares = gen(VariantId::ConnectedSquares);
    REQUIRE(squares.parts.size() == 2);
    CHECK(squares.parts[0].closed);
    CHECK(squares.parts[1].closed);
    // The two squares share exactly one corner vertex.
    int shared = 0;
    for (Eigen::Index a = 0; a < 4; ++a)
      for (Eigen::Index b = 0; b < 4; ++b)
        if ((squares.parts[0].vertices.col(a) -
             squares.parts[1].vertices.col(b))
                .norm() < 1e-9)
          ++shared;
    CHECK(shared == 1);

    const Shape circles = gen(VariantId::ConnectedCircles);
    REQUIRE(circles.parts.size() == 2);
    CHECK(circles.parts[0].vertices.cols() >= 10);
    CHECK(circles.parts[1].vertices.cols() >= 10);
    // Tangency: the rings meet in exactly one shared vertex.
    int touching = 0;
    for (Eigen::Index a = 0; a < circles.parts[0].vertices.cols(); ++a)
      for (Eigen::Index b = 0; b < circles.parts[1].vertices.cols(); ++b)
        if ((circles.parts[0].vertices.col(a) -
             circles.parts[1].vertices.col(b))
                .norm() < 1e-9)
          ++touching;
    CHECK(touching == 1);
    // First part is the bigger circle.
    CHECK((circles.parts[0].vertices.col(0) - part_centroid(circles.parts[0]))
              .norm() >
          (circles.parts[1].vertices.col(0) - part_centroid(circles.parts[1]))
              .norm());
  }
}

TEST_CASE("same pairs are exact copies") {
  const GenParams params = pair_member_params();
  SeededRng master(99);
  for (VariantId v : kAllVariants) {
    for (int i = 0; i < 15; ++i) {
      SeededRng rng = master.split(variant_name(v), i);
      const auto [a, b] = gen_same_pair(v, params, rng);
      CHECK(congruent_up_to_translation(a, b, 0.0));
      CHECK(masks_equal(a, b));
      CHECK(a.color == b.color);
      CHECK(a.stroke_width == b.stroke_width);
      CHECK(a.filled == b.filled);
    }
  }
}

TEST_CASE("different pairs break congruence and follow variant rules") {
  for (const GenParams& params :
       {single_object_params(), pair_member_params()}) {
    SeededRng master(1234);
    for (VariantId v : kAllVariants) {
      for (int i = 0; i < 15; ++i) {
        SeededRng rng = master.split(variant_name(v), i);
        const auto [a, b] = gen_different_pair(v, params, rng);
        CHECK_FALSE(congruent_up_to_translation(a, b));
        CHECK_FALSE(masks_equal(a, b));
        if (uses_resample_rule(v)) CHECK(mask_iou(a, b) < 0.9);

        switch (v) {
          case VariantId::RandomColor:
            CHECK(a.color == b.color);
            CHECK_FALSE(a.color == kWhite);
            break;
          case VariantId::Scrambled:
            // Intact ring vs its displaced fragments.
            CHECK(a.parts.size() == 1);
            CHECK(b.parts.size() ==
                  static_cast<std::size_t>(params.scramble_sections));
            for (const auto& part : b.parts) CHECK_FALSE(part.closed);
            CHECK(max_extent(b) <= params.scramble_extent_cap);
            break;
          case VariantId::Rectangles: {
            const Rect ba = bounding_box(a), bb = bounding_box(b);
            const bool width_varies = ba.width != bb.width;
            const bool height_varies = ba.height != bb.height;
            CHECK(width_varies != height_varies);  // exactly one dimension
            if (width_varies) CHECK(std::abs(ba.width - bb.width) >= 2);
            if (height_varies) CHECK(std::abs(ba.height - bb.height) >= 2);
            break;
          }
          case VariantId::StraightLines:
            CHECK(line_tilt(a) == line_tilt(b));
            CHECK(std::abs(max_extent(a) - max_extent(b)) >= 2);
            break;
          case VariantId::ConnectedSquares: {
            // Same squares, mirrored along the shared corner's diagonal.
            CHECK(bounding_box(a) == bounding_box(b));
            const double da = part_centroid(a.parts[1]).y() -
                              part_centroid(a.parts[0]).y();
            const double db = part_centroid(b.parts[1]).y() -
                              part_centroid(b.parts[0]).y();
            CHECK(da * db < 0.0);
            break;
          }
          case VariantId::ConnectedCircles: {
            // Shared radii; the small circle switches sides.
            CHECK(a.parts[0].vertices.cols() == b.parts[0].vertices.cols());
            CHECK(a.parts[1].vertices.cols() == b.parts[1].vertices.cols());
            const double da = part_centroid(a.parts[1]).y() -
                              part_centroid(a.parts[0]).y();
            const double db = part_centroid(b.parts[1]).y() -
                              part_centroid(b.parts[0]).y();
            CHECK(da * db < 0.0);
            break;
          }
          default:
            break;
        }
      }
    }
  }
}

TEST_CASE("scramble cuts a ring into displaced shared-endpoint arcs") {
  GenParams params = single_object_params();
  SeededRng rng(31337);
  const Shape base = gen_shape(VariantId::Scrambled, params, rng);
  const int n = vertex_count(base);

  SUBCASE("zero displacement reproduces the original outline") {
    const Shape cut = scramble_with_offsets(
        base, 4, 2, std::vector<Vec2>(4, Vec2::Zero()));
    CHECK(cut.parts.size() == 4);
    CHECK(masks_equal(base, cut));
  }

  SUBCASE("fragments move rigidly by their offsets") {
    std::vector<Vec2> offsets(4, Vec2::Zero());
    offsets[2] = Vec2(40, -15);
    const Shape cut = scramble_with_offsets(base, 4, 0, offsets);
    const int b0 = (2 * n) / 4;
    const double d = (cut.parts[2].vertices.col(0) -
                      (base.parts[0].vertices.col(b0) + Vec2(40, -15)))
                         .norm();
    CHECK(d == doctest::Approx(0.0));
  }

  SUBCASE("random scramble stays near the displacement budget") {
    for (int i = 0; i < 30; ++i) {
      const Shape s = scramble(base, 4, rng);
      CHECK(s.parts.size() == 4);
      CHECK_FALSE(masks_equal(base, s));
      // Extent grows by at most the 12 px max offset on both sides, plus
      // one pixel of rounding slack per side.
      CHECK(max_extent(s) <= max_extent(base) + 26);
    }
  }

  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(scramble(base, 1, rng), DegenerateShape);
    CHECK_THROWS_AS(scramble(base, n + 1, rng), DegenerateShape);

    Shape open = base;
    open.parts[0].closed = false;
    CHECK_THROWS_AS(scramble(open, 4, rng), DegenerateShape);

    Shape two = base;
    two.parts.push_back(base.parts[0]);
    CHECK_THROWS_AS(scramble(two, 4, rng), DegenerateShape);

    CHECK_THROWS_AS(
        scramble_with_offsets(base, 4, 0, std::vector<Vec2>(3, Vec2::Zero())),
        DegenerateShape);
  }
}

TEST_CASE("random_visible_color avoids near-white draws") {
  SeededRng rng(8);
  for (int i = 0; i < 300; ++i) {
    const Rgb c = random_visible_color(rng);
    CHECK((c.r <= 200 || c.g <= 200 || c.b <= 200));
  }
}

TEST_CASE("mask comparisons align bounding boxes") {
  SeededRng rng(17);
  const GenParams params = single_object_params();
  const Shape s = gen_shape(VariantId::Irregular, params, rng);
  const Shape moved = translate(s, 31, -8);
  CHECK(masks_equal(s, moved));
  CHECK(mask_iou(s, moved) == doctest::Approx(1.0));

  const Shape grown = scaled(s, 1.5);
  CHECK_FALSE(masks_equal(s, grown));
  CHECK(mask_iou(s, grown) < 1.0);
}

}  // TEST_SUITE
