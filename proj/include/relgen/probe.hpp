#pragma once

// A diagnostic for the pixel-overlap shortcut: same/different decided by
// cosine similarity between two single-object images. With both objects
// centered the similarity of a same pair is exactly 1 and the shortcut looks
// like a solved task; with random placement it collapses to chance. The flip
// sweep charts how fast the similarity decays as binary images drift apart.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "relgen/raster.hpp"
#include "relgen/rng.hpp"

namespace relgen {

enum class ProbeMode { Centered, Translated };

std::string_view probe_mode_name(ProbeMode m);

// A same/different trial presented as two separate images, one object each.
struct PairedSample {
  Image a, b;
  int label = 0;  // 0 = same, 1 = different
};

// `count` (even) single-object pairs with balanced labels, deterministic in
// the rng seed. Centered mode puts each object's bounding box at the canvas
// centre, so the two images of a same pair are byte-identical; translated
// mode places each object uniformly at random.
std::vector<PairedSample> gen_paired_sd(ProbeMode mode, std::int64_t count,
                                        SeededRng rng);

// Cosine similarity between the images' non-background indicator vectors.
// Throws DegenerateInput on a size mismatch or an all-background image.
double cosine_similarity(const Image& a, const Image& b,
                         Rgb background = kWhite);

inline constexpr double kProbeThreshold = 0.999;

// The shortcut under test: call a pair "same" iff its similarity clears the
// threshold.
int cosine_discriminator(const Image& a, const Image& b,
                         double threshold = kProbeThreshold);

struct ProbeResult {
  std::int64_t n = 0;
  std::int64_t correct = 0;
  double accuracy = 0.0;
};

ProbeResult run_probe(ProbeMode mode, std::int64_t count, SeededRng rng,
                      double threshold = kProbeThreshold);

// `count` pairs of uniform binary-noise images where b is a with `flips`
// distinct pixels inverted; label is 0 for flips == 0, else 1.
std::vector<PairedSample> gen_flip_pairs(int flips, int count, SeededRng rng);

struct FlipPoint {
  int flips = 0;
  double mean_similarity = 0.0;
  double std_similarity = 0.0;  // sample std across pairs
};

// Mean similarity per flip count 0..max_flips over `pairs` noise pairs. The
// flip sets are nested per pair (condition k inverts the first k positions
// of one random sequence), which keeps every per-pair trace — and therefore
// the mean curve — non-increasing by construction.
std::vector<FlipPoint> similarity_curve(SeededRng rng, int max_flips = 1000,
                                        int pairs = 100);

void save_curve_csv(const std::vector<FlipPoint>& points,
                    const std::filesystem::path& csv_path);

std::string plot_curve_svg(const std::vector<FlipPoint>& points);

}  // namespace relgen
