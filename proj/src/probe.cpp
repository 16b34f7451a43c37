#include "relgen/probe.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "relgen/errors.hpp"
#include "relgen/shapegen.hpp"
#include "relgen/tasks.hpp"

namespace relgen {

namespace {

constexpr int kNoiseBits = kCanvas * kCanvas;
constexpr int kNoiseWords = kNoiseBits / 64;

// One object per image, box centered or placed at random on the canvas.
Image render_member(const Shape& shape, ProbeMode mode, SeededRng& rng) {
  if (mode == ProbeMode::Translated) {
    const Scene scene = place_objects({shape}, {kCanvasRect}, rng);
    return rasterize(scene);
  }
  const PixelMask mask = rasterize_shape(shape);
  Scene scene;
  scene.objects.push_back(
      {shape,
       Vec2i((kCanvas - mask.box.width) / 2 - mask.box.x0,
             (kCanvas - mask.box.height) / 2 - mask.box.y0),
       mask});
  return rasterize(scene);
}

std::vector<int> balanced_labels(std::int64_t n, SeededRng rng) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = n / 2; i < n; ++i)
    labels[static_cast<std::size_t>(i)] = 1;
  rng.shuffle(labels);
  return labels;
}

struct NoiseImage {
  std::array<std::uint64_t, kNoiseWords> words;

  bool bit(int pos) const {
    return (words[static_cast<std::size_t>(pos >> 6)] >>
            (static_cast<unsigned>(pos) & 63u)) & 1u;
  }
  void flip(int pos) {
    words[static_cast<std::size_t>(pos >> 6)] ^=
        std::uint64_t{1} << (static_cast<unsigned>(pos) & 63u);
  }
  std::int64_t count() const {
    std::int64_t n = 0;
    for (std::uint64_t w : words) n += std::popcount(w);
    return n;
  }
};

NoiseImage random_noise(SeededRng& rng) {
  NoiseImage img;
  for (auto& w : img.words) w = rng.next_u64();
  return img;
}

// k distinct positions by rejection; k stays far below the 16384 slots.
std::vector<int> distinct_positions(int k, SeededRng& rng) {
  std::vector<bool> taken(kNoiseBits, false);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  while (static_cast<int>(out.size()) < k) {
    const int pos = static_cast<int>(rng.uniform_u64(kNoiseBits));
    if (taken[static_cast<std::size_t>(pos)]) continue;
    taken[static_cast<std::size_t>(pos)] = true;
    out.push_back(pos);
  }
  return out;
}

Image noise_to_image(const NoiseImage& n) {
  Image img = Image::filled(kCanvas, kCanvas, kWhite);
  for (int pos = 0; pos < kNoiseBits; ++pos)
    if (n.bit(pos)) img.set(pos % kCanvas, pos / kCanvas, kBlack);
  return img;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string_view probe_mode_name(ProbeMode m) {
  return m == ProbeMode::Centered ? "centered" : "translated";
}

std::vector<PairedSample> gen_paired_sd(ProbeMode mode, std::int64_t count,
                                        SeededRng rng) {
  if (count <= 0 || count % 2 != 0)
    throw UsageError("probe pair count must be positive and even");
  const std::vector<int> labels = balanced_labels(count, rng.split("labels"));
  const GenParams params = single_object_params();

  std::vector<PairedSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    SeededRng pr = rng.split("pair", static_cast<std::uint64_t>(i));
    const int label = labels[static_cast<std::size_t>(i)];
    const auto [first, second] =
        label == 0 ? gen_same_pair(VariantId::Original, params, pr)
                   : gen_different_pair(VariantId::Original, params, pr);
    PairedSample sample;
    sample.a = render_member(first, mode, pr);
    sample.b = render_member(second, mode, pr);
    sample.label = label;
    out.push_back(std::move(sample));
  }
  return out;
}

double cosine_similarity(const Image& a, const Image& b, Rgb background) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DegenerateInput("cosine similarity needs equal image sizes");
  const auto foreground = [&](const Image& img) {
    return (img.r != background.r) || (img.g != background.g) ||
           (img.b != background.b);
  };
  const auto fa = foreground(a).eval();
  const auto fb = foreground(b).eval();
  const std::int64_t na = fa.count();
  const std::int64_t nb = fb.count();
  if (na == 0 || nb == 0)
    throw DegenerateInput("cosine similarity of an empty image");
  const std::int64_t inter = (fa && fb).count();
  return static_cast<double>(inter) /
         std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

int cosine_discriminator(const Image& a, const Image& b, double threshold) {
  return cosine_similarity(a, b) >= threshold ? 0 : 1;
}

ProbeResult run_probe(ProbeMode mode, std::int64_t count, SeededRng rng,
                      double threshold) {
  const auto samples = gen_paired_sd(mode, count, rng);
  ProbeResult result;
  result.n = static_cast<std::int64_t>(samples.size());
  for (const auto& s : samples)
    if (cosine_discriminator(s.a, s.b, threshold) == s.label) ++result.correct;
  result.accuracy =
      static_cast<double>(result.correct) / static_cast<double>(result.n);
  return result;
}

std::vector<PairedSample> gen_flip_pairs(int flips, int count, SeededRng rng) {
  if (flips < 0 || flips > kNoiseBits)
    throw UsageError("flip count out of range");
  if (count <= 0) throw UsageError("pair count must be positive");
  std::vector<PairedSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SeededRng pr = rng.split("pair", static_cast<std::uint64_t>(i));
    const NoiseImage a = random_noise(pr);
    NoiseImage b = a;
    for (int pos : distinct_positions(flips, pr)) b.flip(pos);
    PairedSample sample;
    sample.a = noise_to_image(a);
    sample.b = noise_to_image(b);
    sample.label = flips == 0 ? 0 : 1;
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<FlipPoint> similarity_curve(SeededRng rng, int max_flips,
                                        int pairs) {
  if (max_flips < 0 || max_flips > kNoiseBits)
    throw UsageError("flip count out of range");
  if (pairs < 2) throw UsageError("need at least 2 pairs per condition");

  // Per pair: the base image, one random flip sequence, and running
  // intersection / set-bit counts updated one flip at a time.
  struct Trace {
    NoiseImage base;
    std::vector<int> order;
    std::int64_t a_count = 0;
    std::int64_t inter = 0;
    std::int64_t b_count = 0;
    std::size_t applied = 0;
  };
  std::vector<Trace> traces(static_cast<std::size_t>(pairs));
  for (int i = 0; i < pairs; ++i) {
    SeededRng pr = rng.split("pair", static_cast<std::uint64_t>(i));
    Trace& t = traces[static_cast<std::size_t>(i)];
    t.base = random_noise(pr);
    t.order = distinct_positions(max_flips, pr);
    t.a_count = t.base.count();
    t.inter = t.a_count;
    t.b_count = t.a_count;
  }

  std::vector<FlipPoint> points;
  points.reserve(static_cast<std::size_t>(max_flips) + 1);
  std::vector<double> sims(static_cast<std::size_t>(pairs));
  for (int k = 0; k <= max_flips; ++k) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      Trace& t = traces[i];
      while (t.applied < static_cast<std::size_t>(k)) {
        const int pos = t.order[t.applied++];
        if (t.base.bit(pos)) {
          --t.inter;  // a set bit of the base leaves b
          --t.b_count;
        } else {
          ++t.b_count;
        }
      }
      sims[i] = t.b_count == 0
                    ? 0.0
                    : static_cast<double>(t.inter) /
                          std::sqrt(static_cast<double>(t.a_count) *
                                    static_cast<double>(t.b_count));
    }
    double mean = 0.0;
    for (double s : sims) mean += s;
    mean /= static_cast<double>(pairs);
    double ss = 0.0;
    for (double s : sims) ss += (s - mean) * (s - mean);
    points.push_back(
        {k, mean, std::sqrt(ss / static_cast<double>(pairs - 1))});
  }
  return points;
}

void save_curve_csv(const std::vector<FlipPoint>& points,
                    const std::filesystem::path& csv_path) {
  std::ofstream f(csv_path, std::ios::binary);
  if (!f) throw IoFailure("cannot write " + csv_path.string());
  f << "flips,mean_similarity,std_similarity\n";
  for (const auto& p : points)
    f << p.flips << ',' << fmt_double(p.mean_similarity) << ','
      << fmt_double(p.std_similarity) << '\n';
  if (!f) throw IoFailure("curve write failed: " + csv_path.string());
}

std::string plot_curve_svg(const std::vector<FlipPoint>& points) {
  if (points.empty()) throw UsageError("nothing to plot");
  const double left = 56.0, top = 24.0, plot_w = 520.0, plot_h = 240.0;
  const double bottom = top + plot_h;
  const double width = left + plot_w + 20.0;
  const double height = bottom + 52.0;
  const int max_flips = points.back().flips;

  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  const auto px = [&](int flips) {
    return left + (max_flips == 0
                       ? 0.0
                       : plot_w * static_cast<double>(flips) /
                             static_cast<double>(max_flips));
  };
  const auto py = [&](double sim) {
    return bottom - std::clamp(sim, 0.0, 1.0) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = 0.25 * tick;
    svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py(v)) << "\" x2=\""
        << fmt(left + plot_w) << "\" y2=\"" << fmt(py(v))
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fmt(left - 8.0) << "\" y=\"" << fmt(py(v) + 4.0)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }

  // +-1 std band, then the mean polyline on top.
  std::ostringstream band;
  for (const auto& p : points)
    band << fmt(px(p.flips)) << ","
         << fmt(py(p.mean_similarity + p.std_similarity)) << " ";
  for (auto it = points.rbegin(); it != points.rend(); ++it)
    band << fmt(px(it->flips)) << ","
         << fmt(py(it->mean_similarity - it->std_similarity)) << " ";
  svg << "<polygon points=\"" << band.str()
      << "\" fill=\"#4c72b0\" fill-opacity=\"0.2\"/>\n";

  std::ostringstream line;
  for (const auto& p : points)
    line << fmt(px(p.flips)) << "," << fmt(py(p.mean_similarity)) << " ";
  svg << "<polyline points=\"" << line.str()
      << "\" fill=\"none\" stroke=\"#4c72b0\" stroke-width=\"1.5\"/>\n";

  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom) << "\" x2=\""
      << fmt(left + plot_w) << "\" y2=\"" << fmt(bottom)
      << "\" stroke=\"#000\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const int flips = max_flips * tick / 4;
    svg << "<text x=\"" << fmt(px(flips)) << "\" y=\"" << fmt(bottom + 16.0)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << flips
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(left + plot_w / 2.0) << "\" y=\""
      << fmt(bottom + 36.0)
      << "\" font-size=\"12\" text-anchor=\"middle\">flipped pixels</text>\n";
  svg << "<text x=\"14\" y=\"" << fmt(top + plot_h / 2.0)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt(top + plot_h / 2.0) << ")\">cosine similarity</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace relgen
