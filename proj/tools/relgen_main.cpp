// Command-line front end: dataset generation, verification, grading,
// plotting and the shortcut probe. Library errors map onto the exit codes
// documented in the help footer; progress events go to stderr as
// `event=... key=value` lines so wrappers can parse them.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relgen/datasets.hpp"
#include "relgen/errors.hpp"
#include "relgen/hash.hpp"
#include "relgen/png_io.hpp"
#include "relgen/probe.hpp"
#include "relgen/score.hpp"

namespace {

using namespace relgen;

TaskKind require_task(const std::string& name) {
  const auto task = parse_task(name);
  if (!task) throw UsageError("unknown task: " + name);
  return *task;
}

VariantId require_variant(const std::string& name) {
  const auto variant = parse_variant(name);
  if (!variant) throw UsageError("unknown variant: " + name);
  return *variant;
}

std::vector<VariantId> parse_variant_list(const std::string& csv) {
  std::vector<VariantId> out;
  std::string cur;
  const auto flush = [&] {
    if (!cur.empty()) out.push_back(require_variant(cur));
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return out;
}

void progress_to_stderr(std::int64_t done, std::int64_t total) {
  std::fprintf(stderr, "event=progress done=%lld total=%lld\n",
               static_cast<long long>(done), static_cast<long long>(total));
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot write " + path.string());
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoFailure("write failed: " + path.string());
}

constexpr const char* kExitCodeFooter =
    "Exit codes:\n"
    "  0 ok                     6 corrupt dataset\n"
    "  1 usage error            7 segmentation ambiguous\n"
    "  2 i/o failure            8 inconsistent scene\n"
    "  3 generation exhausted   9 bad prediction\n"
    "  4 placement exhausted   10 insufficient seeds\n"
    "  5 degenerate shape\n";

struct GenArgs {
  std::string task, variant, out;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> split_sizes;
  int desk_scale = 1;
  int jobs = 1;
};

int run_gen(const GenArgs& args) {
  DatasetSpec spec = make_dataset_spec(require_task(args.task),
                                       require_variant(args.variant),
                                       args.seed, args.out);
  if (!args.split_sizes.empty()) {
    if (args.split_sizes.size() != 3)
      throw UsageError("--split-sizes wants exactly three values");
    spec.split_sizes = {args.split_sizes[0], args.split_sizes[1],
                        args.split_sizes[2]};
  }
  spec.desk_scale = args.desk_scale;
  spec.jobs = args.jobs;
  spec.progress = progress_to_stderr;

  std::fprintf(stderr, "event=start cmd=gen task=%s variant=%s seed=%s\n",
               args.task.c_str(), args.variant.c_str(),
               hex64(args.seed).c_str());
  const Manifest manifest = build_dataset(spec);
  std::printf("records=%lld fingerprint=%s out=%s\n",
              static_cast<long long>(manifest.records.size()),
              hex64(manifest.fingerprint()).c_str(), args.out.c_str());
  return 0;
}

struct RichArgs {
  std::string task, out, train_csv, heldout_csv;
  std::uint64_t seed = 0;
  int desk_scale = 1;
  int jobs = 1;
};

int run_rich(const RichArgs& args) {
  RichRegimeSpec spec;
  spec.task = require_task(args.task);
  spec.master_seed = args.seed;
  spec.root = args.out;
  if (!args.train_csv.empty()) spec.train_variants = parse_variant_list(args.train_csv);
  if (!args.heldout_csv.empty())
    spec.heldout_variants = parse_variant_list(args.heldout_csv);
  spec.desk_scale = args.desk_scale;
  spec.jobs = args.jobs;
  spec.progress = progress_to_stderr;

  std::fprintf(stderr, "event=start cmd=rich task=%s seed=%s\n",
               args.task.c_str(), hex64(args.seed).c_str());
  const RichManifests m = build_rich_regime(spec);
  std::printf("train=%lld val=%lld test=%lld\n",
              static_cast<long long>(m.train.records.size()),
              static_cast<long long>(m.val.records.size()),
              static_cast<long long>(m.test.records.size()));
  std::printf("train_fingerprint=%s val_fingerprint=%s test_fingerprint=%s\n",
              hex64(m.train.fingerprint()).c_str(),
              hex64(m.val.fingerprint()).c_str(),
              hex64(m.test.fingerprint()).c_str());
  return 0;
}

int run_verify(const std::string& manifest, int jobs) {
  const VerificationReport report = verify_dataset(manifest, jobs);
  std::printf(
      "records=%lld missing=%lld checksum_failures=%lld label_mismatches=%lld "
      "balance=%s ids_unique=%s seeds_distinct=%s fingerprint=%s\n",
      static_cast<long long>(report.records),
      static_cast<long long>(report.missing_files),
      static_cast<long long>(report.checksum_failures),
      static_cast<long long>(report.label_mismatches),
      report.balance_ok ? "ok" : "BAD", report.ids_unique ? "ok" : "BAD",
      report.seeds_distinct ? "ok" : "BAD",
      hex64(report.fingerprint).c_str());
  if (!report.ok()) {
    std::fprintf(stderr, "first offender: %s\n",
                 report.first_offender.c_str());
    return static_cast<int>(ExitCode::corrupt_dataset);
  }
  return 0;
}

int run_oracle_check(const std::string& manifest, std::int64_t limit,
                     int jobs) {
  const OracleCheck check = oracle_check(manifest, limit, jobs);
  std::printf("checked=%lld mismatches=%lld agreement=%.4f\n",
              static_cast<long long>(check.checked),
              static_cast<long long>(check.mismatches), check.agreement());
  if (check.mismatches > 0) {
    std::fprintf(stderr, "first mismatch: %s\n", check.first_mismatch.c_str());
    return static_cast<int>(ExitCode::corrupt_dataset);
  }
  return 0;
}

struct GradeArgs {
  std::string manifest, predictions, split = "test", report;
};

int run_grade(const GradeArgs& args) {
  const Manifest manifest = Manifest::load(args.manifest);
  const auto predictions = load_predictions(args.predictions);
  const auto cells = grade(manifest, predictions, args.split);

  std::string task;
  for (const auto& r : manifest.records)
    if (r.split == args.split) {
      task = r.task;
      break;
    }
  const auto rows = make_report(cells, task);
  for (const auto& row : rows) {
    std::string sem_text = "n/a";
    if (row.sem) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", *row.sem);
      sem_text = buf;
    }
    std::printf("model=%s variant=%s n_seeds=%lld mean=%.4f sem=%s%s\n",
                row.model.c_str(), row.variant.c_str(),
                static_cast<long long>(row.n_seeds), row.mean,
                sem_text.c_str(), row.high_accuracy ? " high_accuracy" : "");
  }
  if (!args.report.empty()) save_report(rows, args.report);
  return 0;
}

struct PlotArgs {
  std::string report, attribution, out, hatch, title;
};

int run_plot(const PlotArgs& args) {
  if (args.report.empty() == args.attribution.empty())
    throw UsageError("plot wants exactly one of --report / --attribution");
  if (!args.report.empty()) {
    const auto rows = load_report(args.report);
    PlotOptions options;
    options.title = args.title;
    std::string cur;
    for (char c : args.hatch + ",") {
      if (c == ',') {
        if (!cur.empty()) {
          require_variant(cur);  // validate the name early
          options.hatched_variants.push_back(cur);
        }
        cur.clear();
      } else {
        cur += c;
      }
    }
    write_text(args.out, plot_results_svg(rows, options));
  } else {
    const Image img = render_attribution(load_matrix_csv(args.attribution));
    write_bytes(args.out, encode_png(img));
  }
  std::printf("out=%s\n", args.out.c_str());
  return 0;
}

struct ProbeArgs {
  std::uint64_t seed = 0;
  std::string mode = "centered";
  std::int64_t n = 2000;
  double threshold = kProbeThreshold;
  std::string curve_csv, curve_svg;
  int max_flips = 1000;
  int pairs = 100;
};

int run_probe_cmd(const ProbeArgs& args) {
  ProbeMode mode;
  if (args.mode == "centered") mode = ProbeMode::Centered;
  else if (args.mode == "translated") mode = ProbeMode::Translated;
  else throw UsageError("unknown probe mode: " + args.mode);

  const ProbeResult result =
      run_probe(mode, args.n, SeededRng(args.seed), args.threshold);
  std::printf("mode=%s n=%lld correct=%lld accuracy=%.4f\n",
              std::string(probe_mode_name(mode)).c_str(),
              static_cast<long long>(result.n),
              static_cast<long long>(result.correct), result.accuracy);

  if (!args.curve_csv.empty() || !args.curve_svg.empty()) {
    const auto points = similarity_curve(SeededRng(args.seed).split("curve"),
                                         args.max_flips, args.pairs);
    if (!args.curve_csv.empty()) save_curve_csv(points, args.curve_csv);
    if (!args.curve_svg.empty())
      write_text(args.curve_svg, plot_curve_svg(points));
    std::printf("curve_rows=%lld\n", static_cast<long long>(points.size()));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic same/different benchmark toolkit"};
  app.require_subcommand(1);
  app.footer(kExitCodeFooter);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Build one (task, variant) dataset");
  gen->add_option("--task,-t", gen_args.task, "mts | sd | sosd | rmts")
      ->required();
  gen->add_option("--variant,-v", gen_args.variant, "perceptual variant name")
      ->required();
  gen->add_option("--seed,-s", gen_args.seed, "master seed")->required();
  gen->add_option("--out,-o", gen_args.out, "dataset directory")->required();
  gen->add_option("--split-sizes", gen_args.split_sizes,
                  "train,val,test sizes (default per task)")
      ->delimiter(',')
      ->expected(3);
  gen->add_option("--desk-scale", gen_args.desk_scale,
                  "divide split sizes by this for desk runs")
      ->check(CLI::PositiveNumber);
  gen->add_option("--jobs,-j", gen_args.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  RichArgs rich_args;
  CLI::App* rich =
      app.add_subcommand("rich", "Build the multi-variant training regime");
  rich->add_option("--task,-t", rich_args.task, "mts | sd | sosd | rmts")
      ->required();
  rich->add_option("--seed,-s", rich_args.seed, "master seed")->required();
  rich->add_option("--out,-o", rich_args.out, "regime directory")->required();
  rich->add_option("--train-variants", rich_args.train_csv,
                   "comma list (default: the nine training variants)");
  rich->add_option("--heldout-variants", rich_args.heldout_csv,
                   "comma list (default: the four held-out variants)");
  rich->add_option("--desk-scale", rich_args.desk_scale,
                   "divide split sizes by this for desk runs")
      ->check(CLI::PositiveNumber);
  rich->add_option("--jobs,-j", rich_args.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  std::string verify_manifest;
  int verify_jobs = 1;
  CLI::App* verify =
      app.add_subcommand("verify", "Audit a dataset against its manifest");
  verify->add_option("--manifest,-m", verify_manifest, "manifest.csv path")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--jobs,-j", verify_jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  std::string check_manifest;
  std::int64_t check_limit = -1;
  int check_jobs = 1;
  CLI::App* check = app.add_subcommand(
      "oracle-check", "Re-derive labels for a sample of a dataset");
  check->add_option("--manifest,-m", check_manifest, "manifest.csv path")
      ->required()
      ->check(CLI::ExistingFile);
  check->add_option("--limit,-n", check_limit,
                    "images per (variant, split); -1 = all");
  check->add_option("--jobs,-j", check_jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  GradeArgs grade_args;
  CLI::App* grade_cmd =
      app.add_subcommand("grade", "Score a predictions CSV against a manifest");
  grade_cmd
      ->add_option("--manifest,-m", grade_args.manifest, "manifest.csv path")
      ->required()
      ->check(CLI::ExistingFile);
  grade_cmd
      ->add_option("--predictions,-p", grade_args.predictions,
                   "model,seed,image_id,predicted_label CSV")
      ->required()
      ->check(CLI::ExistingFile);
  grade_cmd->add_option("--split", grade_args.split, "split to grade");
  grade_cmd->add_option("--report,-o", grade_args.report,
                        "write the aggregate report CSV here");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand(
      "plot", "Render a report as SVG bars or an attribution CSV as PNG");
  plot->add_option("--report,-r", plot_args.report, "report CSV from grade")
      ->check(CLI::ExistingFile);
  plot->add_option("--attribution,-a", plot_args.attribution,
                   "matrix CSV of attribution values")
      ->check(CLI::ExistingFile);
  plot->add_option("--out,-o", plot_args.out, "output file")->required();
  plot->add_option("--hatch", plot_args.hatch,
                   "comma list of variants drawn hatched");
  plot->add_option("--title", plot_args.title, "chart title");

  ProbeArgs probe_args;
  CLI::App* probe = app.add_subcommand(
      "probe", "Cosine-shortcut diagnostic on paired same/different images");
  probe->add_option("--seed,-s", probe_args.seed, "master seed")->required();
  probe->add_option("--mode", probe_args.mode, "centered | translated");
  probe->add_option("--n", probe_args.n, "number of pairs (even)")
      ->check(CLI::PositiveNumber);
  probe->add_option("--threshold", probe_args.threshold,
                    "similarity cut for calling a pair same");
  probe->add_option("--curve", probe_args.curve_csv,
                    "also run the flip sweep, write CSV here");
  probe->add_option("--curve-plot", probe_args.curve_svg,
                    "write the flip sweep SVG here");
  probe->add_option("--max-flips", probe_args.max_flips,
                    "largest flip count in the sweep")
      ->check(CLI::NonNegativeNumber);
  probe->add_option("--pairs", probe_args.pairs,
                    "noise pairs per flip condition")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(relgen::ExitCode::usage);
  }

  try {
    if (*gen) return run_gen(gen_args);
    if (*rich) return run_rich(rich_args);
    if (*verify) return run_verify(verify_manifest, verify_jobs);
    if (*check) return run_oracle_check(check_manifest, check_limit, check_jobs);
    if (*grade_cmd) return run_grade(grade_args);
    if (*plot) return run_plot(plot_args);
    if (*probe) return run_probe_cmd(probe_args);
  } catch (const relgen::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(relgen::ExitCode::io);
  }
  return 0;
}
