#include "relgen/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "relgen/errors.hpp"

namespace relgen {

namespace {

struct PixelEntry {
  Vec2i p;
  Rgb c;
};

bool entry_less(const PixelEntry& a, const PixelEntry& b) {
  return a.p.y() != b.p.y() ? a.p.y() < b.p.y() : a.p.x() < b.p.x();
}

ObjectMask from_entries(std::vector<PixelEntry> entries) {
  std::sort(entries.begin(), entries.end(), entry_less);
  ObjectMask m;
  m.pixels.reserve(entries.size());
  m.colors.reserve(entries.size());
  int minx = std::numeric_limits<int>::max(), miny = minx;
  int maxx = std::numeric_limits<int>::min(), maxy = maxx;
  for (const auto& e : entries) {
    m.pixels.push_back(e.p);
    m.colors.push_back(e.c);
    minx = std::min(minx, e.p.x());
    maxx = std::max(maxx, e.p.x());
    miny = std::min(miny, e.p.y());
    maxy = std::max(maxy, e.p.y());
  }
  if (!entries.empty()) m.box = {minx, miny, maxx - minx + 1, maxy - miny + 1};
  return m;
}

ObjectMask union_of(const std::vector<ObjectMask>& comps,
                    const std::vector<int>& members) {
  std::vector<PixelEntry> entries;
  for (int ci : members) {
    const ObjectMask& c = comps[static_cast<std::size_t>(ci)];
    for (std::size_t i = 0; i < c.pixels.size(); ++i)
      entries.push_back({c.pixels[i], c.colors[i]});
  }
  return from_entries(std::move(entries));
}

double center_x(const Rect& b) { return b.x0 + (b.width - 1) / 2.0; }
double center_y(const Rect& b) { return b.y0 + (b.height - 1) / 2.0; }

// Distinct layout regions and how many objects each is expected to hold.
struct Grouping {
  std::vector<Rect> regions;
  std::vector<int> expected;
};

Grouping task_grouping(TaskKind k) {
  switch (k) {
    case TaskKind::MTS: return {{kTopCenter, kBottomLeft, kBottomRight}, {1, 1, 1}};
    case TaskKind::SD: return {{kCanvasRect}, {2}};
    case TaskKind::SOSD: return {{kTopCenter, kBottomCenter}, {2, 2}};
    case TaskKind::RMTS: return {{kTopCenter, kBottomLeft, kBottomRight}, {2, 2, 2}};
  }
  return {};
}

// Components are attached to the region holding their bounding-box centre,
// which tolerates small global shifts of the scene.
std::vector<std::vector<int>> assign_components(
    const std::vector<ObjectMask>& comps, const Grouping& grouping) {
  std::vector<std::vector<int>> groups(grouping.regions.size());
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const double cx = center_x(comps[ci].box);
    const double cy = center_y(comps[ci].box);
    int found = -1;
    for (std::size_t ri = 0; ri < grouping.regions.size(); ++ri) {
      const Rect& r = grouping.regions[ri];
      if (cx >= r.x0 && cx <= r.x1() && cy >= r.y0 && cy <= r.y1()) {
        found = static_cast<int>(ri);
        break;
      }
    }
    if (found < 0)
      throw SegmentationAmbiguous("component outside the task layout");
    groups[static_cast<std::size_t>(found)].push_back(static_cast<int>(ci));
  }
  return groups;
}

// Splits a two-object group into translation-identical halves if possible.
// The first component is pinned to side A, so each bipartition is visited
// once; halves must hold the same pixel count before the expensive compare.
std::optional<std::pair<ObjectMask, ObjectMask>> equal_bipartition(
    const std::vector<ObjectMask>& comps, const std::vector<int>& group) {
  const int m = static_cast<int>(group.size());
  if (m > 12) throw SegmentationAmbiguous("too many components in one region");
  std::size_t total = 0;
  for (int ci : group) total += comps[static_cast<std::size_t>(ci)].size();
  const std::uint32_t variants = 1u << (m - 1);
  for (std::uint32_t sub = 0; sub + 1 < variants; ++sub) {
    std::vector<int> a{group[0]}, b;
    std::size_t a_pixels = comps[static_cast<std::size_t>(group[0])].size();
    for (int i = 1; i < m; ++i) {
      if (sub & (1u << (i - 1))) {
        a.push_back(group[static_cast<std::size_t>(i)]);
        a_pixels += comps[static_cast<std::size_t>(group[i])].size();
      } else {
        b.push_back(group[static_cast<std::size_t>(i)]);
      }
    }
    if (a_pixels * 2 != total) continue;
    ObjectMask ua = union_of(comps, a);
    ObjectMask ub = union_of(comps, b);
    if (masks_same(ua, ub)) return std::make_pair(std::move(ua), std::move(ub));
  }
  return std::nullopt;
}

bool pair_relation_same(const std::vector<ObjectMask>& comps,
                        const std::vector<int>& group) {
  if (group.size() < 2)
    throw SegmentationAmbiguous("pair region holds fewer than two components");
  if (group.size() == 2)
    return masks_same(comps[static_cast<std::size_t>(group[0])],
                      comps[static_cast<std::size_t>(group[1])]);
  return equal_bipartition(comps, group).has_value();
}

int min_chebyshev_gap(const ObjectMask& a, const ObjectMask& b) {
  int best = std::numeric_limits<int>::max();
  for (const auto& pa : a.pixels)
    for (const auto& pb : b.pixels)
      best = std::min(best, std::max(std::abs(pa.x() - pb.x()),
                                     std::abs(pa.y() - pb.y())));
  return best;
}

// Fallback split for a fragmented "different" pair: single-linkage merging
// down to two clusters, nearest pair first (lowest indices on ties).
std::pair<ObjectMask, ObjectMask> distance_split(
    const std::vector<ObjectMask>& comps, const std::vector<int>& group) {
  std::vector<std::vector<int>> clusters;
  for (int ci : group) clusters.push_back({ci});
  std::vector<ObjectMask> cluster_masks;
  for (int ci : group) cluster_masks.push_back(comps[static_cast<std::size_t>(ci)]);

  while (clusters.size() > 2) {
    std::size_t bi = 0, bj = 1;
    int best = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const int d = min_chebyshev_gap(cluster_masks[i], cluster_masks[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(),
                        clusters[bj].end());
    cluster_masks[bi] = union_of(comps, clusters[bi]);
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    cluster_masks.erase(cluster_masks.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  ObjectMask first = std::move(cluster_masks[0]);
  ObjectMask second = std::move(cluster_masks[1]);
  const bool keep = first.box.y0 != second.box.y0
                        ? first.box.y0 < second.box.y0
                        : first.box.x0 <= second.box.x0;
  if (!keep) std::swap(first, second);
  return {std::move(first), std::move(second)};
}

}  // namespace

std::vector<ObjectMask> connected_components(const Image& img, Rgb background,
                                             int glue_radius) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
  const auto seen = [&](int x, int y) -> std::uint8_t& {
    return visited[static_cast<std::size_t>(y) * w + x];
  };
  const auto foreground = [&](int x, int y) {
    return !(img.at(x, y) == background);
  };

  std::vector<ObjectMask> comps;
  std::vector<Vec2i> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!foreground(x, y) || seen(x, y)) continue;
      std::vector<PixelEntry> entries;
      stack.clear();
      stack.emplace_back(x, y);
      seen(x, y) = 1;
      while (!stack.empty()) {
        const Vec2i p = stack.back();
        stack.pop_back();
        entries.push_back({p, img.at(p.x(), p.y())});
        for (int dy = -glue_radius; dy <= glue_radius; ++dy) {
          for (int dx = -glue_radius; dx <= glue_radius; ++dx) {
            const int nx = p.x() + dx, ny = p.y() + dy;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            if (seen(nx, ny) || !foreground(nx, ny)) continue;
            seen(nx, ny) = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
      comps.push_back(from_entries(std::move(entries)));
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const ObjectMask& a, const ObjectMask& b) {
              if (a.box.y0 != b.box.y0) return a.box.y0 < b.box.y0;
              if (a.box.x0 != b.box.x0) return a.box.x0 < b.box.x0;
              return a.size() < b.size();
            });
  return comps;
}

bool masks_same(const ObjectMask& a, const ObjectMask& b) {
  if (a.size() != b.size()) return false;
  if (a.box.width != b.box.width || a.box.height != b.box.height) return false;
  const int dx = b.box.x0 - a.box.x0;
  const int dy = b.box.y0 - a.box.y0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    if (a.pixels[i].x() + dx != b.pixels[i].x()) return false;
    if (a.pixels[i].y() + dy != b.pixels[i].y()) return false;
    if (!(a.colors[i] == b.colors[i])) return false;
  }
  return true;
}

std::vector<ObjectMask> segment_objects(const Image& img, TaskKind kind) {
  const std::vector<ObjectMask> comps = connected_components(img);
  if (comps.empty()) throw SegmentationAmbiguous("blank image");
  const Grouping grouping = task_grouping(kind);
  const auto groups = assign_components(comps, grouping);

  std::vector<ObjectMask> out;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& group = groups[gi];
    if (grouping.expected[gi] == 1) {
      if (group.empty())
        throw SegmentationAmbiguous("empty subarea in task layout");
      out.push_back(union_of(comps, group));
      continue;
    }
    if (group.size() < 2)
      throw SegmentationAmbiguous("pair region holds fewer than two components");
    if (group.size() == 2) {
      out.push_back(comps[static_cast<std::size_t>(group[0])]);
      out.push_back(comps[static_cast<std::size_t>(group[1])]);
      continue;
    }
    if (auto split = equal_bipartition(comps, group)) {
      out.push_back(std::move(split->first));
      out.push_back(std::move(split->second));
    } else {
      auto split_pair = distance_split(comps, group);
      out.push_back(std::move(split_pair.first));
      out.push_back(std::move(split_pair.second));
    }
  }
  return out;
}

int solve(const Image& img, TaskKind kind) {
  const std::vector<ObjectMask> comps = connected_components(img);
  if (comps.empty()) throw SegmentationAmbiguous("blank image");
  const Grouping grouping = task_grouping(kind);
  const auto groups = assign_components(comps, grouping);

  switch (kind) {
    case TaskKind::MTS: {
      for (const auto& g : groups)
        if (g.empty())
          throw SegmentationAmbiguous("empty subarea in task layout");
      const ObjectMask base = union_of(comps, groups[0]);
      const ObjectMask left = union_of(comps, groups[1]);
      const ObjectMask right = union_of(comps, groups[2]);
      const bool l = masks_same(base, left);
      const bool r = masks_same(base, right);
      if (l == r)
        throw InconsistentScene(l ? "both candidates match the base"
                                  : "no candidate matches the base");
      return l ? 0 : 1;
    }
    case TaskKind::SD:
      return pair_relation_same(comps, groups[0]) ? 0 : 1;
    case TaskKind::SOSD: {
      const bool top = pair_relation_same(comps, groups[0]);
      const bool bottom = pair_relation_same(comps, groups[1]);
      return top == bottom ? 1 : 0;
    }
    case TaskKind::RMTS: {
      const bool base = pair_relation_same(comps, groups[0]);
      const bool left = pair_relation_same(comps, groups[1]);
      const bool right = pair_relation_same(comps, groups[2]);
      const bool l = left == base;
      const bool r = right == base;
      if (l == r)
        throw InconsistentScene(l ? "both candidate pairs match the base relation"
                                  : "no candidate pair matches the base relation");
      return l ? 0 : 1;
    }
  }
  throw UsageError("unknown task");
}

}  // namespace relgen
