#pragma once

// Grading of model predictions against a dataset manifest, aggregation
// across training seeds, and the two report renderers (grouped-bar SVG and
// attribution heatmap PNG).

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relgen/datasets.hpp"
#include "relgen/raster.hpp"

namespace relgen {

// One row of a predictions CSV: a model identified by name and training
// seed, and its hard 0/1 call on one image.
struct PredictionRecord {
  std::string model;
  std::uint64_t seed = 0;
  std::string image_id;
  int predicted = 0;
};

// Reads a CSV with header "model,seed,image_id,predicted_label".
std::vector<PredictionRecord> load_predictions(
    const std::filesystem::path& csv_path);

// Accuracy of one (model, training seed) on one variant.
struct GradeCell {
  std::string model;
  std::uint64_t seed = 0;
  std::string variant;
  double accuracy = 0.0;
  std::int64_t n = 0;
};

// Scores predictions against the manifest rows of `split`. Every image in
// the split must be predicted exactly once per (model, seed); a missing or
// repeated image id raises MissingPrediction / DuplicatePrediction naming
// the offender. Cells come back sorted by model, seed, then variant.
std::vector<GradeCell> grade(const Manifest& manifest,
                             const std::vector<PredictionRecord>& predictions,
                             std::string_view split);

struct Summary {
  double mean = 0.0;
  double sem = 0.0;  // sample std (n-1 denominator) / sqrt(n)
};

// Mean and standard error across seeds. Throws InsufficientSeeds for n < 2;
// a single seed has no spread to report.
Summary summarize(const std::vector<double>& values);

// One line of the aggregate report: a model's mean accuracy on a variant
// across its training seeds. `sem` is absent when only one seed was graded.
struct ReportRow {
  std::string model;
  std::string task;
  std::string variant;
  std::int64_t n_seeds = 0;
  double mean = 0.0;
  std::optional<double> sem;
  bool high_accuracy = false;  // mean >= 0.9
};

std::vector<ReportRow> make_report(const std::vector<GradeCell>& cells,
                                   std::string_view task);

void save_report(const std::vector<ReportRow>& rows,
                 const std::filesystem::path& csv_path);
std::vector<ReportRow> load_report(const std::filesystem::path& csv_path);

struct PlotOptions {
  // Variants drawn with a diagonal-hatch overlay (the ones the models were
  // trained on, as opposed to held out).
  std::vector<std::string> hatched_variants;
  std::string title;
};

// Grouped bar chart: one group per variant (canonical order), one bar per
// model, SEM whiskers where available, dashed chance line at 0.5.
std::string plot_results_svg(const std::vector<ReportRow>& rows,
                             const PlotOptions& options = {});

// Colormap sample for t in [0, 1] (clamped), dark violet to yellow.
Rgb viridis_color(double t);

// Renders per-pixel attribution magnitudes as a heatmap, one image pixel
// per matrix cell. Magnitudes are floored at 1e-4, mapped through log10 and
// normalised linearly between the floor and the matrix maximum, so small
// values stay distinguishable over the usual many-decade spread. An
// all-(near-)zero matrix comes out as a uniform floor-colored image.
Image render_attribution(const Eigen::ArrayXXd& values);

// Rows of comma-separated numbers -> matrix (rows x cols).
Eigen::ArrayXXd load_matrix_csv(const std::filesystem::path& csv_path);

}  // namespace relgen
