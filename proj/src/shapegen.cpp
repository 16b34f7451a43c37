#include "relgen/shapegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relgen/errors.hpp"
#include "relgen/raster.hpp"

namespace relgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Shapes are built around this nominal radius, then scaled to their target
// pixel extent.
constexpr double kBuildRadius = 10.0;
// Control-point count for the spline-based original contours.
constexpr int kOriginalPointsLo = 8;
constexpr int kOriginalPointsHi = 24;
constexpr int kSplineSamplesPerSegment = 8;

struct VariantEntry {
  VariantId id;
  std::string_view name;
  std::string_view title;
};

constexpr std::array<VariantEntry, 14> kVariantTable = {{
    {VariantId::Original, "original", "Original"},
    {VariantId::Irregular, "irregular", "Irregular"},
    {VariantId::Regular, "regular", "Regular"},
    {VariantId::Open, "open", "Open"},
    {VariantId::Wider, "wider", "Wider"},
    {VariantId::Scrambled, "scrambled", "Scrambled"},
    {VariantId::RandomColor, "random_color", "Random Color"},
    {VariantId::Filled, "filled", "Filled"},
    {VariantId::Lines, "lines", "Lines"},
    {VariantId::Arrows, "arrows", "Arrows"},
    {VariantId::Rectangles, "rectangles", "Rectangles"},
    {VariantId::StraightLines, "straight_lines", "Straight Lines"},
    {VariantId::ConnectedSquares, "connected_squares", "Connected Squares"},
    {VariantId::ConnectedCircles, "connected_circles", "Connected Circles"},
}};

const VariantEntry& entry(VariantId v) {
  return kVariantTable[static_cast<std::size_t>(v)];
}

// Scale so the rounded pixel extent lands on target_px (the 2 px stroke
// dilation claims one of those pixels), then move the centroid to the origin.
Shape fit_to_extent(Shape s, int target_px) {
  double minx = std::numeric_limits<double>::max(), miny = minx;
  double maxx = std::numeric_limits<double>::lowest(), maxy = maxx;
  for (const auto& part : s.parts) {
    minx = std::min(minx, part.vertices.row(0).minCoeff());
    maxx = std::max(maxx, part.vertices.row(0).maxCoeff());
    miny = std::min(miny, part.vertices.row(1).minCoeff());
    maxy = std::max(maxy, part.vertices.row(1).maxCoeff());
  }
  const double span = std::max(maxx - minx, maxy - miny);
  if (!(span > 0)) throw DegenerateShape("zero-extent shape");
  const double target =
      static_cast<double>(target_px - 1) - (s.stroke_width == 2 ? 1 : 0);
  return centered(scaled(std::move(s), target / span));
}

// Integer-built variants keep their exact pixel metrics by translating with
// a rounded centroid instead of the real one.
Shape center_integer(Shape s) {
  const Vec2 c = centroid(s);
  return translate(s, -static_cast<double>(std::lround(c.x())),
                   -static_cast<double>(std::lround(c.y())));
}

int sample_target_extent(const GenParams& p, SeededRng& rng) {
  // One pixel of slack on both ends absorbs rounding wobble in fit_to_extent.
  return static_cast<int>(
      rng.uniform_int(p.size_range.first + 1, p.size_range.second - 1));
}

VertexList ring_at_angles(int n, double phase, double radius) {
  VertexList v(2, n);
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * kPi * i / n;
    v(0, i) = radius * std::cos(a);
    v(1, i) = radius * std::sin(a);
  }
  return v;
}

// Regular n-gon at a random rotation, optionally jittered per coordinate.
Shape polygon_shape(const GenParams& p, double noise, bool closed, int stroke,
                    bool filled, SeededRng& rng) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const int n = static_cast<int>(
        rng.uniform_int(p.vertex_range.first, p.vertex_range.second));
    VertexList ring = ring_at_angles(n, rng.uniform_real(0, 2 * kPi), kBuildRadius);
    if (noise > 0) {
      for (int i = 0; i < n; ++i) {
        ring(0, i) += rng.uniform_real(-noise, noise);
        ring(1, i) += rng.uniform_real(-noise, noise);
      }
      if (self_intersects(ring, closed)) continue;
    }
    Shape s;
    s.parts.push_back({std::move(ring), closed});
    s.stroke_width = stroke;
    s.filled = filled;
    s = fit_to_extent(std::move(s), sample_target_extent(p, rng));
    const int e = max_extent(s);
    if (e < p.size_range.first || e > p.size_range.second) continue;
    return s;
  }
  throw GenerationExhausted("polygon generation exceeded attempt bound");
}

VertexList catmull_rom_closed(const VertexList& ctrl, int samples) {
  const int n = static_cast<int>(ctrl.cols());
  VertexList out(2, static_cast<Eigen::Index>(n) * samples);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2 p0 = ctrl.col((i + n - 1) % n);
    const Vec2 p1 = ctrl.col(i);
    const Vec2 p2 = ctrl.col((i + 1) % n);
    const Vec2 p3 = ctrl.col((i + 2) % n);
    for (int j = 0; j < samples; ++j) {
      const double u = static_cast<double>(j) / samples;
      out.col(k++) = 0.5 * ((2.0 * p1) + (-p0 + p2) * u +
                            (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (u * u) +
                            (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (u * u * u));
    }
  }
  return out;
}

// Blob contour: spline through points at sorted random angles with radial
// jitter. Rejects self-intersecting draws (exactly on the control ring,
// strided on the dense curve — residual misses are cosmetic only).
Shape original_shape(const GenParams& p, SeededRng& rng) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const int n = static_cast<int>(
        rng.uniform_int(kOriginalPointsLo, kOriginalPointsHi));
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& a : angles) a = rng.uniform_real(0, 2 * kPi);
    std::sort(angles.begin(), angles.end());
    VertexList ctrl(2, n);
    for (int i = 0; i < n; ++i) {
      const double r = rng.uniform_real(0.4, 1.0) * kBuildRadius;
      ctrl(0, i) = r * std::cos(angles[static_cast<std::size_t>(i)]);
      ctrl(1, i) = r * std::sin(angles[static_cast<std::size_t>(i)]);
    }
    if (self_intersects(ctrl, true)) continue;
    VertexList dense = catmull_rom_closed(ctrl, kSplineSamplesPerSegment);
    if (self_intersects(dense, true, 2)) continue;
    Shape s;
    s.parts.push_back({std::move(dense), true});
    s = fit_to_extent(std::move(s), sample_target_extent(p, rng));
    const int e = max_extent(s);
    if (e < p.size_range.first || e > p.size_range.second) continue;
    return s;
  }
  throw GenerationExhausted("contour generation exceeded attempt bound");
}

// Square wave of two open squares sharing one vertical side.
Shape lines_shape(const GenParams& p, SeededRng& rng) {
  const int s_lo = std::max(10, (p.size_range.first + 1) / 2);
  const int s_hi = std::min(24, (p.size_range.second - 1) / 2);
  if (s_lo > s_hi)
    throw GenerationExhausted("size range leaves no admissible square side");
  const int s = static_cast<int>(rng.uniform_int(s_lo, s_hi));
  const bool transposed = rng.coin();
  VertexList v(2, 6);
  const double sd = s;
  v.col(0) = Vec2(0, sd);
  v.col(1) = Vec2(0, 0);
  v.col(2) = Vec2(sd, 0);
  v.col(3) = Vec2(sd, sd);
  v.col(4) = Vec2(2 * sd, sd);
  v.col(5) = Vec2(2 * sd, 0);
  if (transposed) v = v.colwise().reverse().eval();  // swap x and y rows
  Shape out;
  out.parts.push_back({std::move(v), false});
  return center_integer(std::move(out));
}

Shape arrows_shape(const GenParams& p, SeededRng& rng) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double len = rng.uniform_real(p.arrow_shaft_range.first,
                                        p.arrow_shaft_range.second);
    const double head = rng.uniform_real(p.arrow_head_range.first,
                                         p.arrow_head_range.second);
    const int heads = rng.coin() ? 2 : 1;
    const double theta = rng.uniform_real(0, 2 * kPi);
    const double c = std::cos(theta), sn = std::sin(theta);
    const auto rot = [&](double x, double y) { return Vec2(c * x - sn * y, sn * x + c * y); };

    Shape s;
    VertexList shaft(2, 2);
    shaft.col(0) = rot(0, 0);
    shaft.col(1) = rot(len, 0);
    s.parts.push_back({std::move(shaft), false});
    VertexList tip_head(2, 3);
    tip_head.col(0) = rot(len, 0);
    tip_head.col(1) = rot(len - head, head / 2);
    tip_head.col(2) = rot(len - head, -head / 2);
    s.parts.push_back({std::move(tip_head), true});
    if (heads == 2) {
      VertexList tail_head(2, 3);
      tail_head.col(0) = rot(0, 0);
      tail_head.col(1) = rot(head, -head / 2);
      tail_head.col(2) = rot(head, head / 2);
      s.parts.push_back({std::move(tail_head), true});
    }
    s = centered(std::move(s));
    const int e = max_extent(s);
    if (e < p.size_range.first || e > p.size_range.second) continue;
    return s;
  }
  throw GenerationExhausted("arrow generation exceeded attempt bound");
}

Shape rectangle_shape(int w, int h) {
  VertexList v(2, 4);
  v.col(0) = Vec2(0, 0);
  v.col(1) = Vec2(w - 1, 0);
  v.col(2) = Vec2(w - 1, h - 1);
  v.col(3) = Vec2(0, h - 1);
  Shape out;
  out.parts.push_back({std::move(v), true});
  return center_integer(std::move(out));
}

Shape straight_line_shape(int tilt, int extent) {
  const double e = extent - 1;
  VertexList v(2, 2);
  switch (tilt) {
    case 0:
      v.col(0) = Vec2(0, 0);
      v.col(1) = Vec2(e, 0);
      break;
    case 45:
      v.col(0) = Vec2(0, 0);
      v.col(1) = Vec2(e, e);
      break;
    case 90:
      v.col(0) = Vec2(0, 0);
      v.col(1) = Vec2(0, e);
      break;
    case 135:
      v.col(0) = Vec2(0, e);
      v.col(1) = Vec2(e, 0);
      break;
    default:
      throw DegenerateShape("unsupported tilt (use 0, 45, 90 or 135)");
  }
  Shape out;
  out.parts.push_back({std::move(v), false});
  return center_integer(std::move(out));
}

// Two squares joined at one shared corner; diag +1 hangs the second square
// toward +y, -1 toward -y.
Shape connected_squares_shape(int side, int diag) {
  const double s = side;
  VertexList a(2, 4), b(2, 4);
  a.col(0) = Vec2(0, 0);
  a.col(1) = Vec2(s, 0);
  a.col(2) = Vec2(s, s);
  a.col(3) = Vec2(0, s);
  const double y0 = diag > 0 ? s : 0;
  const double y1 = diag > 0 ? 2 * s : -s;
  b.col(0) = Vec2(s, y0);
  b.col(1) = Vec2(2 * s, y0);
  b.col(2) = Vec2(2 * s, y1);
  b.col(3) = Vec2(s, y1);
  Shape out;
  out.parts.push_back({std::move(a), true});
  out.parts.push_back({std::move(b), true});
  return center_integer(std::move(out));
}

int circle_segments(double radius) {
  return std::max(10L, std::lround(2.0 * kPi * radius / 2.2));
}

VertexList circle_ring(const Vec2& center, double radius, double start_angle) {
  const int m = circle_segments(radius);
  VertexList v(2, m);
  for (int i = 0; i < m; ++i) {
    const double a = start_angle + 2.0 * kPi * i / m;
    v(0, i) = center.x() + radius * std::cos(a);
    v(1, i) = center.y() + radius * std::sin(a);
  }
  return v;
}

// Externally tangent circle pair stacked vertically; both rings carry a
// vertex exactly at the tangency point so the rasters stay connected. The
// larger circle is always the first part.
Shape connected_circles_shape(double r_big, double r_small, bool small_above) {
  const double dir = small_above ? -1.0 : 1.0;  // canvas y grows downward
  const Vec2 big_center(0, 0);
  const Vec2 small_center(0, dir * (r_big + r_small));
  const double big_start = dir > 0 ? kPi / 2 : -kPi / 2;
  Shape out;
  out.parts.push_back({circle_ring(big_center, r_big, big_start), true});
  out.parts.push_back({circle_ring(small_center, r_small, -big_start), true});
  return centered(std::move(out));
}

struct CirclePairSpec {
  double r_big = 0, r_small = 0;
};

CirclePairSpec sample_circle_pair(const GenParams& p, SeededRng& rng) {
  const int t = sample_target_extent(p, rng);
  const double ratio = rng.uniform_real(0.45, 0.8);
  CirclePairSpec spec;
  spec.r_big = (t - 1) / (2.0 * (1.0 + ratio));
  spec.r_small = ratio * spec.r_big;
  return spec;
}

Shape scrambled_base(const GenParams& p, SeededRng& rng) {
  GenParams q = p;
  q.vertex_range = {std::max(p.vertex_range.first, p.scramble_sections),
                    std::max(p.vertex_range.second, p.scramble_sections)};
  q.size_range = p.scramble_base_range;
  return polygon_shape(q, p.noise_amplitude, true, 1, false, rng);
}

std::vector<Vec2i> origin_aligned_pixels(const Shape& s) {
  PixelMask m = rasterize_shape(s);
  std::vector<Vec2i> out;
  out.reserve(m.pixels.size());
  for (const auto& px : m.pixels)
    out.emplace_back(px.x() - m.box.x0, px.y() - m.box.y0);
  return out;
}

bool pixel_less(const Vec2i& a, const Vec2i& b) {
  return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
}

bool pixel_eq(const Vec2i& a, const Vec2i& b) {
  return a.x() == b.x() && a.y() == b.y();
}

}  // namespace

std::string_view variant_name(VariantId v) { return entry(v).name; }
std::string_view variant_title(VariantId v) { return entry(v).title; }

std::optional<VariantId> parse_variant(std::string_view name) {
  for (const auto& e : kVariantTable)
    if (e.name == name) return e.id;
  return std::nullopt;
}

GenParams single_object_params() { return {}; }

GenParams pair_member_params() {
  GenParams p;
  p.size_range = {12, 26};
  p.scramble_base_range = {12, 22};
  p.scramble_extent_cap = 34;
  p.arrow_shaft_range = {12, 24};
  p.arrow_head_range = {5, 9};
  return p;
}

Rgb random_visible_color(SeededRng& rng) {
  for (;;) {
    const auto r = static_cast<std::uint8_t>(rng.uniform_u64(256));
    const auto g = static_cast<std::uint8_t>(rng.uniform_u64(256));
    const auto b = static_cast<std::uint8_t>(rng.uniform_u64(256));
    if (r > 200 && g > 200 && b > 200) continue;  // too close to the background
    return {r, g, b};
  }
}

Shape gen_shape(VariantId v, const GenParams& p, SeededRng& rng) {
  switch (v) {
    case VariantId::Original:
      return original_shape(p, rng);
    case VariantId::Irregular:
      return polygon_shape(p, p.noise_amplitude, true, 1, false, rng);
    case VariantId::Regular:
      return polygon_shape(p, 0.0, true, 1, false, rng);
    case VariantId::Open:
      return polygon_shape(p, p.noise_amplitude, false, 1, false, rng);
    case VariantId::Wider:
      return polygon_shape(p, p.noise_amplitude, true, 2, false, rng);
    case VariantId::Scrambled:
      return scrambled_base(p, rng);
    case VariantId::RandomColor: {
      Shape s = polygon_shape(p, p.noise_amplitude, true, 1, false, rng);
      s.color = random_visible_color(rng);
      return s;
    }
    case VariantId::Filled:
      return polygon_shape(p, p.noise_amplitude, true, 1, true, rng);
    case VariantId::Lines:
      return lines_shape(p, rng);
    case VariantId::Arrows:
      return arrows_shape(p, rng);
    case VariantId::Rectangles: {
      const int w = static_cast<int>(
          rng.uniform_int(p.size_range.first, p.size_range.second));
      const int h = static_cast<int>(
          rng.uniform_int(p.size_range.first, p.size_range.second));
      return rectangle_shape(w, h);
    }
    case VariantId::StraightLines: {
      const int tilt = rng.pick(p.tilt_set);
      const int t = static_cast<int>(
          rng.uniform_int(p.size_range.first, p.size_range.second));
      return straight_line_shape(tilt, t);
    }
    case VariantId::ConnectedSquares: {
      const int side = static_cast<int>(rng.uniform_int(
          (p.size_range.first + 1) / 2, (p.size_range.second - 1) / 2));
      return connected_squares_shape(side, rng.coin() ? 1 : -1);
    }
    case VariantId::ConnectedCircles: {
      const CirclePairSpec spec = sample_circle_pair(p, rng);
      return connected_circles_shape(spec.r_big, spec.r_small, rng.coin());
    }
  }
  throw DegenerateShape("unknown variant");
}

std::pair<Shape, Shape> gen_same_pair(VariantId v, const GenParams& p,
                                      SeededRng& rng) {
  Shape a = gen_shape(v, p, rng);
  Shape b = a;
  return {std::move(a), std::move(b)};
}

std::pair<Shape, Shape> gen_different_pair(VariantId v, const GenParams& p,
                                           SeededRng& rng) {
  switch (v) {
    case VariantId::Scrambled: {
      Shape a = gen_shape(v, p, rng);
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Shape b = scramble(a, p.scramble_sections, rng);
        if (max_extent(b) <= p.scramble_extent_cap && !masks_equal(a, b))
          return {std::move(a), std::move(b)};
      }
      throw GenerationExhausted("scramble exceeded attempt bound");
    }
    case VariantId::Rectangles: {
      const int lo = p.size_range.first, hi = p.size_range.second;
      const int w = static_cast<int>(rng.uniform_int(lo, hi));
      const int h = static_cast<int>(rng.uniform_int(lo, hi));
      const bool vary_width = rng.coin();
      const int fixed = vary_width ? w : h;
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const int other = static_cast<int>(rng.uniform_int(lo, hi));
        if (std::abs(other - fixed) < 2) continue;  // must survive rounding
        Shape a = rectangle_shape(w, h);
        Shape b = vary_width ? rectangle_shape(other, h)
                             : rectangle_shape(w, other);
        return {std::move(a), std::move(b)};
      }
      throw GenerationExhausted("rectangle pair exceeded attempt bound");
    }
    case VariantId::StraightLines: {
      const int tilt = rng.pick(p.tilt_set);
      const int lo = p.size_range.first, hi = p.size_range.second;
      const int t1 = static_cast<int>(rng.uniform_int(lo, hi));
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const int t2 = static_cast<int>(rng.uniform_int(lo, hi));
        if (std::abs(t2 - t1) < 2) continue;
        return {straight_line_shape(tilt, t1), straight_line_shape(tilt, t2)};
      }
      throw GenerationExhausted("line pair exceeded attempt bound");
    }
    case VariantId::ConnectedSquares: {
      const int side = static_cast<int>(rng.uniform_int(
          (p.size_range.first + 1) / 2, (p.size_range.second - 1) / 2));
      const int diag = rng.coin() ? 1 : -1;
      return {connected_squares_shape(side, diag),
              connected_squares_shape(side, -diag)};
    }
    case VariantId::ConnectedCircles: {
      const CirclePairSpec spec = sample_circle_pair(p, rng);
      const bool above = rng.coin();
      return {connected_circles_shape(spec.r_big, spec.r_small, above),
              connected_circles_shape(spec.r_big, spec.r_small, !above)};
    }
    default: {
      Shape a = gen_shape(v, p, rng);
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Shape b = gen_shape(v, p, rng);
        if (v == VariantId::RandomColor) b.color = a.color;
        if (congruent_up_to_translation(a, b)) continue;
        if (mask_iou(a, b) >= 0.9) continue;  // visually near-identical
        return {std::move(a), std::move(b)};
      }
      throw GenerationExhausted("different pair exceeded attempt bound");
    }
  }
}

Shape scramble_with_offsets(const Shape& s, int sections, int start,
                            const std::vector<Vec2>& offsets) {
  if (s.parts.size() != 1 || !s.parts[0].closed)
    throw DegenerateShape("scramble expects a single closed ring");
  const VertexList& ring = s.parts[0].vertices;
  const int n = static_cast<int>(ring.cols());
  if (sections < 2) throw DegenerateShape("scramble needs at least 2 sections");
  if (n < sections)
    throw DegenerateShape("scramble: fewer vertices than sections");
  if (static_cast<int>(offsets.size()) != sections)
    throw DegenerateShape("scramble: one offset per section required");

  Shape out;
  out.stroke_width = s.stroke_width;
  out.color = s.color;
  out.filled = false;  // fragments are open
  for (int i = 0; i < sections; ++i) {
    const int b0 = start + (i * n) / sections;
    const int b1 = start + ((i + 1) * n) / sections;  // shared with next arc
    const int count = b1 - b0 + 1;
    VertexList arc(2, count);
    for (int j = 0; j < count; ++j)
      arc.col(j) = ring.col((b0 + j) % n) + offsets[static_cast<std::size_t>(i)];
    out.parts.push_back({std::move(arc), false});
  }
  return out;
}

Shape scramble(const Shape& s, int sections, SeededRng& rng) {
  if (s.parts.size() != 1 || !s.parts[0].closed)
    throw DegenerateShape("scramble expects a single closed ring");
  const int n = static_cast<int>(s.parts[0].vertices.cols());
  if (sections < 2) throw DegenerateShape("scramble needs at least 2 sections");
  if (n < sections)
    throw DegenerateShape("scramble: fewer vertices than sections");
  const int start = static_cast<int>(rng.uniform_u64(static_cast<std::uint64_t>(n)));
  std::vector<Vec2> offsets;
  offsets.reserve(static_cast<std::size_t>(sections));
  for (int i = 0; i < sections; ++i) {
    const double mag = rng.uniform_real(4.0, 12.0);
    const double ang = rng.uniform_real(0, 2 * kPi);
    offsets.emplace_back(mag * std::cos(ang), mag * std::sin(ang));
  }
  return centered(scramble_with_offsets(s, sections, start, offsets));
}

double mask_iou(const Shape& a, const Shape& b) {
  const std::vector<Vec2i> pa = origin_aligned_pixels(a);
  const std::vector<Vec2i> pb = origin_aligned_pixels(b);
  std::size_t i = 0, j = 0, inter = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pixel_eq(pa[i], pb[j])) {
      ++inter;
      ++i;
      ++j;
    } else if (pixel_less(pa[i], pb[j])) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = pa.size() + pb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

bool masks_equal(const Shape& a, const Shape& b) {
  const std::vector<Vec2i> pa = origin_aligned_pixels(a);
  const std::vector<Vec2i> pb = origin_aligned_pixels(b);
  if (pa.size() != pb.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!pixel_eq(pa[i], pb[i])) return false;
  return true;
}

}  // namespace relgen
