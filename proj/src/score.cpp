#include "relgen/score.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "relgen/errors.hpp"
#include "relgen/shapegen.hpp"

namespace relgen {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<std::vector<std::string>> load_csv(
    const std::filesystem::path& path, std::string_view expected_header) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line))
    throw CorruptDataset("empty file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw CorruptDataset("unexpected header in " + path.string() +
                         " (want \"" + std::string(expected_header) + "\")");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw CorruptDataset(what + " is not a non-negative integer: " + s);
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw CorruptDataset(what + " out of range: " + s);
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CorruptDataset(what + " is not a number: " + s);
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Position of a variant name in the canonical ordering; names come from
// loaded manifests so they are already validated.
std::size_t variant_rank(std::string_view name) {
  for (std::size_t i = 0; i < kAllVariants.size(); ++i)
    if (variant_name(kAllVariants[i]) == name) return i;
  return kAllVariants.size();
}

constexpr std::string_view kPredictionsHeader = "model,seed,image_id,predicted_label";
constexpr std::string_view kReportHeader =
    "model,task,variant,n_seeds,mean,sem,high_accuracy";

// Seaborn-like categorical palette for the per-model bars.
constexpr const char* kBarColors[] = {"#4c72b0", "#dd8452", "#55a868",
                                      "#c44e52", "#8172b3", "#937860",
                                      "#da8bc3", "#8c8c8c"};

struct ViridisAnchor {
  double t;
  int r, g, b;
};

// Eleven evenly spaced samples of the usual perceptually-uniform
// violet-to-yellow map; intermediate values interpolate linearly.
constexpr ViridisAnchor kViridis[] = {
    {0.0, 68, 1, 84},    {0.1, 72, 36, 117},   {0.2, 65, 68, 135},
    {0.3, 53, 95, 141},  {0.4, 42, 120, 142},  {0.5, 33, 145, 140},
    {0.6, 34, 168, 132}, {0.7, 68, 191, 112},  {0.8, 122, 209, 81},
    {0.9, 189, 223, 38}, {1.0, 253, 231, 37},
};

constexpr double kAttributionFloor = 1e-4;

}  // namespace

std::vector<PredictionRecord> load_predictions(
    const std::filesystem::path& csv_path) {
  const auto rows = load_csv(csv_path, kPredictionsHeader);
  std::vector<PredictionRecord> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 4)
      throw CorruptDataset("predictions row " + std::to_string(i + 2) +
                           ": expected 4 fields");
    PredictionRecord r;
    r.model = f[0];
    r.seed = parse_u64(f[1], "prediction seed");
    r.image_id = f[2];
    if (f[3] == "0") r.predicted = 0;
    else if (f[3] == "1") r.predicted = 1;
    else
      throw CorruptDataset("predictions row " + std::to_string(i + 2) +
                           ": predicted_label must be 0 or 1");
    if (r.model.empty() || r.image_id.empty())
      throw CorruptDataset("predictions row " + std::to_string(i + 2) +
                           ": empty model or image_id");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GradeCell> grade(const Manifest& manifest,
                             const std::vector<PredictionRecord>& predictions,
                             std::string_view split) {
  struct Target {
    int label;
    std::string variant;
  };
  std::unordered_map<std::string, Target> targets;
  // Variant -> ids in manifest order, so cells count every image exactly once.
  std::map<std::string, std::vector<const ManifestRecord*>> by_variant;
  for (const auto& r : manifest.records) {
    if (r.split != split) continue;
    targets.emplace(r.image_id, Target{r.label, r.variant});
    by_variant[r.variant].push_back(&r);
  }
  if (targets.empty())
    throw UsageError("manifest has no rows in split \"" + std::string(split) +
                     "\"");

  using RunKey = std::pair<std::string, std::uint64_t>;
  std::map<RunKey, std::unordered_map<std::string, int>> runs;
  for (const auto& p : predictions) {
    if (!targets.count(p.image_id)) continue;  // other splits are fine to skip
    auto& calls = runs[{p.model, p.seed}];
    if (!calls.emplace(p.image_id, p.predicted).second)
      throw DuplicatePrediction("duplicate prediction for " + p.image_id +
                                " from model " + p.model + " seed " +
                                std::to_string(p.seed));
  }
  if (runs.empty()) throw MissingPrediction("no predictions cover the split");

  std::vector<std::string> variant_order;
  for (const auto& [name, rows] : by_variant) variant_order.push_back(name);
  std::sort(variant_order.begin(), variant_order.end(),
            [](const std::string& a, const std::string& b) {
              return variant_rank(a) < variant_rank(b);
            });

  std::vector<GradeCell> cells;
  for (const auto& [key, calls] : runs) {
    for (const auto& vname : variant_order) {
      GradeCell cell;
      cell.model = key.first;
      cell.seed = key.second;
      cell.variant = vname;
      std::int64_t correct = 0;
      for (const ManifestRecord* r : by_variant.at(vname)) {
        const auto it = calls.find(r->image_id);
        if (it == calls.end())
          throw MissingPrediction("no prediction for " + r->image_id +
                                  " from model " + key.first + " seed " +
                                  std::to_string(key.second));
        if (it->second == r->label) ++correct;
        ++cell.n;
      }
      cell.accuracy = static_cast<double>(correct) / static_cast<double>(cell.n);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

Summary summarize(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2)
    throw InsufficientSeeds("need at least 2 seeds to summarize, got " +
                            std::to_string(n));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

std::vector<ReportRow> make_report(const std::vector<GradeCell>& cells,
                                   std::string_view task) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& c : cells) groups[{c.model, c.variant}].push_back(c.accuracy);

  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& [key, accs] : groups) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return variant_rank(a.second) < variant_rank(b.second);
  });

  std::vector<ReportRow> rows;
  for (const auto& key : keys) {
    const auto& accs = groups.at(key);
    ReportRow row;
    row.model = key.first;
    row.task = std::string(task);
    row.variant = key.second;
    row.n_seeds = static_cast<std::int64_t>(accs.size());
    if (accs.size() >= 2) {
      const Summary s = summarize(accs);
      row.mean = s.mean;
      row.sem = s.sem;
    } else {
      row.mean = accs[0];
    }
    row.high_accuracy = row.mean >= 0.9;
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_report(const std::vector<ReportRow>& rows,
                 const std::filesystem::path& csv_path) {
  std::ofstream f(csv_path, std::ios::binary);
  if (!f) throw IoFailure("cannot write " + csv_path.string());
  f << kReportHeader << '\n';
  for (const auto& r : rows) {
    f << r.model << ',' << r.task << ',' << r.variant << ',' << r.n_seeds
      << ',' << fmt_double(r.mean) << ','
      << (r.sem ? fmt_double(*r.sem) : std::string()) << ','
      << (r.high_accuracy ? '1' : '0') << '\n';
  }
  if (!f) throw IoFailure("report write failed: " + csv_path.string());
}

std::vector<ReportRow> load_report(const std::filesystem::path& csv_path) {
  const auto raw = load_csv(csv_path, kReportHeader);
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& f = raw[i];
    if (f.size() != 7)
      throw CorruptDataset("report row " + std::to_string(i + 2) +
                           ": expected 7 fields");
    ReportRow r;
    r.model = f[0];
    r.task = f[1];
    r.variant = f[2];
    r.n_seeds = static_cast<std::int64_t>(parse_u64(f[3], "n_seeds"));
    r.mean = parse_double(f[4], "mean");
    if (!f[5].empty()) r.sem = parse_double(f[5], "sem");
    if (f[6] == "1") r.high_accuracy = true;
    else if (f[6] == "0") r.high_accuracy = false;
    else
      throw CorruptDataset("report row " + std::to_string(i + 2) +
                           ": high_accuracy must be 0 or 1");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string plot_results_svg(const std::vector<ReportRow>& rows,
                             const PlotOptions& options) {
  if (rows.empty()) throw UsageError("nothing to plot");

  std::vector<std::string> models, variants;
  for (const auto& r : rows) {
    if (std::find(models.begin(), models.end(), r.model) == models.end())
      models.push_back(r.model);
    if (std::find(variants.begin(), variants.end(), r.variant) ==
        variants.end())
      variants.push_back(r.variant);
  }
  std::sort(models.begin(), models.end());
  std::sort(variants.begin(), variants.end(),
            [](const std::string& a, const std::string& b) {
              return variant_rank(a) < variant_rank(b);
            });

  const auto find_row = [&](const std::string& model,
                            const std::string& variant) -> const ReportRow* {
    for (const auto& r : rows)
      if (r.model == model && r.variant == variant) return &r;
    return nullptr;
  };
  const auto is_hatched = [&](const std::string& variant) {
    return std::find(options.hatched_variants.begin(),
                     options.hatched_variants.end(),
                     variant) != options.hatched_variants.end();
  };

  const double bar_w = 16.0, bar_gap = 2.0, group_pad = 14.0;
  const double group_w =
      static_cast<double>(models.size()) * bar_w +
      static_cast<double>(models.size() - 1) * bar_gap + group_pad;
  const double left = 56.0, top = 46.0, plot_h = 240.0;
  const double plot_w = group_w * static_cast<double>(variants.size());
  const double bottom = top + plot_h;
  const double width = left + plot_w + 20.0;
  const double height = bottom + 120.0;

  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  const auto xml_escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '&') out += "&amp;";
      else if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else out += c;
    }
    return out;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\" font-family=\"sans-serif\">\n";
  svg << "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" "
         "width=\"6\" height=\"6\"><path d=\"M0,6 L6,0\" stroke=\"#333\" "
         "stroke-width=\"1\"/></pattern></defs>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const std::string title =
      options.title.empty() ? rows.front().task : options.title;
  svg << "<text x=\"" << fmt(left) << "\" y=\"22\" font-size=\"15\" "
         "font-weight=\"bold\">"
      << xml_escape(title) << "</text>\n";

  // Legend along the title line.
  double lx = left + 160.0;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const char* color = kBarColors[mi % (sizeof(kBarColors) / sizeof(*kBarColors))];
    svg << "<rect x=\"" << fmt(lx) << "\" y=\"12\" width=\"12\" height=\"12\" "
           "fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << fmt(lx + 16.0) << "\" y=\"22\" font-size=\"11\">"
        << xml_escape(models[mi]) << "</text>\n";
    lx += 26.0 + 7.0 * static_cast<double>(models[mi].size());
  }

  // Axis, gridlines, tick labels.
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = 0.25 * tick;
    const double y = bottom - v * plot_h;
    svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(left + plot_w) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fmt(left - 8.0) << "\" y=\"" << fmt(y + 4.0)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << fmt(top + plot_h / 2.0)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt(top + plot_h / 2.0) << ")\">accuracy</text>\n";

  // Bars, whiskers, hatch overlays.
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const double gx = left + group_w * static_cast<double>(vi) + group_pad / 2.0;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const ReportRow* row = find_row(models[mi], variants[vi]);
      if (!row) continue;
      const double x = gx + static_cast<double>(mi) * (bar_w + bar_gap);
      const double h = std::clamp(row->mean, 0.0, 1.0) * plot_h;
      const double y = bottom - h;
      const char* color =
          kBarColors[mi % (sizeof(kBarColors) / sizeof(*kBarColors))];
      svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
          << fmt(bar_w) << "\" height=\"" << fmt(h) << "\" fill=\"" << color
          << "\"><title>" << xml_escape(models[mi]) << " "
          << xml_escape(variants[vi]) << " " << fmt(row->mean)
          << "</title></rect>\n";
      if (is_hatched(variants[vi]))
        svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
            << fmt(bar_w) << "\" height=\"" << fmt(h)
            << "\" fill=\"url(#hatch)\"/>\n";
      if (row->sem) {
        const double cx = x + bar_w / 2.0;
        const double y0 = bottom - std::clamp(row->mean + *row->sem, 0.0, 1.0) * plot_h;
        const double y1 = bottom - std::clamp(row->mean - *row->sem, 0.0, 1.0) * plot_h;
        svg << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(y0) << "\" x2=\""
            << fmt(cx) << "\" y2=\"" << fmt(y1)
            << "\" stroke=\"#222\" stroke-width=\"1.2\"/>\n";
        for (double yy : {y0, y1})
          svg << "<line x1=\"" << fmt(cx - 3.0) << "\" y1=\"" << fmt(yy)
              << "\" x2=\"" << fmt(cx + 3.0) << "\" y2=\"" << fmt(yy)
              << "\" stroke=\"#222\" stroke-width=\"1.2\"/>\n";
      }
    }
    const double label_x = gx + (group_w - group_pad) / 2.0;
    const double label_y = bottom + 14.0;
    svg << "<text x=\"" << fmt(label_x) << "\" y=\"" << fmt(label_y)
        << "\" font-size=\"11\" text-anchor=\"end\" transform=\"rotate(-40 "
        << fmt(label_x) << " " << fmt(label_y) << ")\">"
        << xml_escape(variants[vi]) << "</text>\n";
  }

  // Chance level for binary labels.
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom - 0.5 * plot_h)
      << "\" x2=\"" << fmt(left + plot_w) << "\" y2=\""
      << fmt(bottom - 0.5 * plot_h)
      << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom) << "\" x2=\""
      << fmt(left + plot_w) << "\" y2=\"" << fmt(bottom)
      << "\" stroke=\"#000\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

Rgb viridis_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  constexpr std::size_t n = sizeof(kViridis) / sizeof(*kViridis);
  std::size_t hi = 1;
  while (hi + 1 < n && kViridis[hi].t < t) ++hi;
  const ViridisAnchor& a = kViridis[hi - 1];
  const ViridisAnchor& b = kViridis[hi];
  const double u = (t - a.t) / (b.t - a.t);
  const auto lerp = [u](int x, int y) {
    return static_cast<std::uint8_t>(
        std::lround(static_cast<double>(x) + u * static_cast<double>(y - x)));
  };
  return {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
}

Image render_attribution(const Eigen::ArrayXXd& values) {
  if (values.rows() == 0 || values.cols() == 0)
    throw DegenerateInput("attribution matrix is empty");

  const Eigen::ArrayXXd mags =
      values.abs().max(Eigen::ArrayXXd::Constant(values.rows(), values.cols(),
                                                 kAttributionFloor));
  const Eigen::ArrayXXd logs = mags.log10();
  const double lmin = std::log10(kAttributionFloor);
  const double lmax = logs.maxCoeff();
  const double denom = lmax - lmin;

  Image img = Image::filled(static_cast<int>(values.cols()),
                            static_cast<int>(values.rows()), kWhite);
  for (Eigen::Index y = 0; y < values.rows(); ++y)
    for (Eigen::Index x = 0; x < values.cols(); ++x) {
      const double t = denom > 0.0 ? (logs(y, x) - lmin) / denom : 0.0;
      img.set(static_cast<int>(x), static_cast<int>(y), viridis_color(t));
    }
  return img;
}

Eigen::ArrayXXd load_matrix_csv(const std::filesystem::path& csv_path) {
  std::ifstream f(csv_path);
  if (!f) throw IoFailure("cannot open " + csv_path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& field : split_csv_line(line))
      row.push_back(parse_double(field, "matrix value at line " +
                                            std::to_string(lineno)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw CorruptDataset("ragged matrix row at line " +
                           std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DegenerateInput("matrix file has no rows");

  Eigen::ArrayXXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t y = 0; y < rows.size(); ++y)
    for (std::size_t x = 0; x < rows[y].size(); ++x)
      out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) =
          rows[y][x];
  return out;
}

}  // namespace relgen
