#include "relgen/datasets.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "relgen/errors.hpp"
#include "relgen/hash.hpp"
#include "relgen/oracle.hpp"
#include "relgen/png_io.hpp"

namespace relgen {

namespace {

// Runs fn(0..n-1) on `jobs` threads. Any exceptions are collected and the
// one thrown at the lowest index is rethrown, so failures are deterministic
// regardless of thread interleaving.
template <typename Fn>
void parallel_for(std::int64_t n, int jobs, Fn&& fn) {
  if (jobs <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex err_mutex;
  std::int64_t err_index = -1;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (err_index < 0 || i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = std::min<int>(jobs, static_cast<int>(std::max<std::int64_t>(n, 1)));
  threads.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (err) std::rethrow_exception(err);
}

std::string format_index(std::int64_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(i));
  return buf;
}

std::vector<int> balanced_labels(std::int64_t n, SeededRng rng) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = n / 2; i < n; ++i)
    labels[static_cast<std::size_t>(i)] = 1;
  rng.shuffle(labels);
  return labels;
}

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

constexpr std::string_view kManifestHeader =
    "image_id,path,split,label,seed,checksum,task,variant";

}  // namespace

std::array<std::int64_t, 3> default_split_sizes(TaskKind k) {
  switch (k) {
    case TaskKind::MTS:
    case TaskKind::SD:
      return {28000, 5600, 11200};
    case TaskKind::SOSD:
      return {98000, 14000, 28000};
    case TaskKind::RMTS:
      return {196000, 28000, 56000};
  }
  return {0, 0, 0};
}

std::int64_t scale_split(std::int64_t n, int desk_scale) {
  if (n == 0) return 0;
  return std::max<std::int64_t>(2, 2 * (n / (2 * desk_scale)));
}

std::array<std::int64_t, 3> DatasetSpec::scaled_sizes() const {
  std::array<std::int64_t, 3> out{};
  for (std::size_t i = 0; i < 3; ++i)
    out[i] = scale_split(split_sizes[i], desk_scale);
  return out;
}

DatasetSpec make_dataset_spec(TaskKind task, VariantId variant,
                              std::uint64_t master_seed,
                              std::filesystem::path root) {
  DatasetSpec spec;
  spec.task = task;
  spec.variant = variant;
  spec.master_seed = master_seed;
  spec.root = std::move(root);
  spec.split_sizes = default_split_sizes(task);
  return spec;
}

std::string Manifest::to_csv() const {
  std::string out{kManifestHeader};
  out += '\n';
  for (const auto& r : records) {
    out += r.image_id;
    out += ',';
    out += r.path;
    out += ',';
    out += r.split;
    out += ',';
    out += r.label == 0 ? '0' : '1';
    out += ',';
    out += hex64(r.seed);
    out += ',';
    out += hex64(r.checksum);
    out += ',';
    out += r.task;
    out += ',';
    out += r.variant;
    out += '\n';
  }
  return out;
}

std::uint64_t Manifest::fingerprint() const { return fnv1a64(to_csv()); }

void Manifest::save(const std::filesystem::path& csv_path) const {
  std::ofstream f(csv_path, std::ios::binary);
  if (!f) throw IoFailure("cannot write manifest: " + csv_path.string());
  const std::string body = to_csv();
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoFailure("manifest write failed: " + csv_path.string());
}

Manifest Manifest::load(const std::filesystem::path& csv_path) {
  std::ifstream f(csv_path);
  if (!f) throw IoFailure("cannot open manifest: " + csv_path.string());
  std::string line;
  if (!std::getline(f, line))
    throw CorruptDataset("empty manifest: " + csv_path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kManifestHeader)
    throw CorruptDataset("unexpected manifest header: " + csv_path.string());

  Manifest m;
  std::int64_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8)
      throw CorruptDataset("manifest row " + std::to_string(row) +
                           ": expected 8 fields");
    ManifestRecord r;
    r.image_id = fields[0];
    r.path = fields[1];
    r.split = fields[2];
    if (fields[3] == "0") r.label = 0;
    else if (fields[3] == "1") r.label = 1;
    else
      throw CorruptDataset("manifest row " + std::to_string(row) +
                           ": label must be 0 or 1");
    if (!parse_hex64(fields[4], r.seed) || !parse_hex64(fields[5], r.checksum))
      throw CorruptDataset("manifest row " + std::to_string(row) +
                           ": bad seed or checksum");
    r.task = fields[6];
    r.variant = fields[7];
    if (!parse_task(r.task))
      throw CorruptDataset("manifest row " + std::to_string(row) +
                           ": unknown task " + r.task);
    if (!parse_variant(r.variant))
      throw CorruptDataset("manifest row " + std::to_string(row) +
                           ": unknown variant " + r.variant);
    m.records.push_back(std::move(r));
  }
  return m;
}

Manifest build_dataset(const DatasetSpec& spec) {
  if (spec.desk_scale < 1) throw UsageError("desk scale must be >= 1");
  if (spec.jobs < 1) throw UsageError("jobs must be >= 1");
  for (const auto n : spec.split_sizes) {
    if (n < 0) throw UsageError("split sizes must be non-negative");
    if (n % 2 != 0)
      throw UsageError("split sizes must be even for exact label balance");
  }
  const auto sizes = spec.scaled_sizes();

  std::error_code ec;
  std::filesystem::create_directories(spec.root, ec);
  if (ec) throw IoFailure("cannot create " + spec.root.string());
  for (std::size_t s = 0; s < 3; ++s) {
    if (sizes[s] == 0) continue;
    std::filesystem::create_directories(spec.root / kSplitNames[s], ec);
    if (ec)
      throw IoFailure("cannot create split directory under " +
                      spec.root.string());
  }

  const SeededRng root_rng(spec.master_seed);
  std::array<std::vector<int>, 3> labels;
  for (std::size_t s = 0; s < 3; ++s)
    labels[s] = balanced_labels(
        sizes[s], root_rng.split(std::string("labels/") +
                                 std::string(kSplitNames[s])));

  struct WorkItem {
    std::size_t split;
    std::int64_t index;
  };
  std::vector<WorkItem> work;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::int64_t i = 0; i < sizes[s]; ++i) work.push_back({s, i});

  Manifest manifest;
  manifest.records.resize(work.size());
  const std::string task = std::string(task_name(spec.task));
  const std::string variant = std::string(variant_name(spec.variant));

  const std::int64_t total = static_cast<std::int64_t>(work.size());
  std::atomic<std::int64_t> done{0};
  std::mutex progress_mutex;
  constexpr std::int64_t kProgressStride = 5000;

  parallel_for(static_cast<std::int64_t>(work.size()), spec.jobs,
               [&](std::int64_t flat) {
    const WorkItem item = work[static_cast<std::size_t>(flat)];
    const std::string split = std::string(kSplitNames[item.split]);
    const int label = labels[item.split][static_cast<std::size_t>(item.index)];
    const std::uint64_t seed =
        root_rng.split(split, static_cast<std::uint64_t>(item.index)).seed();
    SeededRng rng(seed);
    const TaskInstance inst = compose(spec.task, spec.variant, label, rng);
    const Image img = rasterize(inst.scene);
    const std::vector<std::uint8_t> png = encode_png(img);

    const std::string filename = format_index(item.index) + ".png";
    write_bytes(spec.root / split / filename, png);

    ManifestRecord& r = manifest.records[static_cast<std::size_t>(flat)];
    r.image_id = task + "_" + variant + "_" + split + "_" + format_index(item.index);
    r.path = split + "/" + filename;
    r.split = split;
    r.label = label;
    r.seed = seed;
    r.checksum = fnv1a64(png.data(), png.size());
    r.task = task;
    r.variant = variant;

    if (spec.progress) {
      const std::int64_t d = done.fetch_add(1) + 1;
      if (d % kProgressStride == 0 || d == total) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        spec.progress(d, total);
      }
    }
  });

  manifest.save(spec.root / "manifest.csv");

  nlohmann::json echo;
  echo["format_version"] = 1;
  echo["task"] = task;
  echo["variant"] = variant;
  echo["master_seed"] = hex64(spec.master_seed);
  echo["split_sizes"] = spec.split_sizes;
  echo["scaled_sizes"] = sizes;
  echo["desk_scale"] = spec.desk_scale;
  echo["canvas"] = kCanvas;
  echo["records"] = manifest.records.size();
  echo["fingerprint"] = hex64(manifest.fingerprint());
  std::ofstream jf(spec.root / "dataset.json");
  if (!jf) throw IoFailure("cannot write dataset.json");
  jf << echo.dump(2) << '\n';

  return manifest;
}

std::vector<VariantId> default_rich_train() {
  return {VariantId::Original, VariantId::Irregular, VariantId::Regular,
          VariantId::Open,     VariantId::Wider,     VariantId::RandomColor,
          VariantId::Filled,   VariantId::Lines,     VariantId::Arrows};
}

std::vector<VariantId> default_rich_heldout() {
  return {VariantId::Rectangles, VariantId::StraightLines,
          VariantId::ConnectedSquares, VariantId::ConnectedCircles};
}

RichManifests build_rich_regime(const RichRegimeSpec& spec) {
  if (spec.train_variants.empty())
    throw UsageError("rich regime needs at least one training variant");
  for (VariantId v : spec.train_variants)
    for (VariantId h : spec.heldout_variants)
      if (v == h)
        throw UsageError("variant cannot be both trained and held out: " +
                         std::string(variant_name(v)));

  const SeededRng root_rng(spec.master_seed);
  const auto base_sizes = default_split_sizes(spec.task);
  RichManifests out;

  const auto append = [](Manifest& dst, const Manifest& src,
                         const std::string& prefix, std::string_view split) {
    for (const auto& r : src.records) {
      if (r.split != split) continue;
      ManifestRecord copy = r;
      copy.path = prefix + "/" + r.path;
      dst.records.push_back(std::move(copy));
    }
  };

  const auto component_spec = [&](VariantId v,
                                  std::array<std::int64_t, 3> sizes) {
    const std::string name(variant_name(v));
    DatasetSpec ds = make_dataset_spec(spec.task, v,
                                       root_rng.split(name).seed(),
                                       spec.root / name);
    ds.split_sizes = sizes;
    ds.desk_scale = spec.desk_scale;
    ds.jobs = spec.jobs;
    return ds;
  };

  // Resolve every component up front so progress can report against the
  // regime-wide image total.
  std::vector<DatasetSpec> components;
  for (VariantId v : spec.train_variants)
    components.push_back(component_spec(v, {base_sizes[0], base_sizes[1], 0}));
  for (VariantId v : spec.heldout_variants)
    components.push_back(component_spec(v, {0, 0, base_sizes[2]}));

  std::int64_t regime_total = 0;
  for (const auto& ds : components) {
    const auto sizes = ds.scaled_sizes();
    regime_total += sizes[0] + sizes[1] + sizes[2];
  }

  std::int64_t regime_done = 0;
  const std::size_t n_train = spec.train_variants.size();
  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    DatasetSpec& ds = components[ci];
    if (spec.progress) {
      const std::int64_t offset = regime_done;
      ds.progress = [&, offset](std::int64_t d, std::int64_t) {
        spec.progress(offset + d, regime_total);
      };
    }
    const Manifest m = build_dataset(ds);
    const std::string name(variant_name(ds.variant));
    if (ci < n_train) {
      append(out.train, m, name, "train");
      append(out.val, m, name, "val");
    } else {
      append(out.test, m, name, "test");
    }
    const auto sizes = ds.scaled_sizes();
    regime_done += sizes[0] + sizes[1] + sizes[2];
  }

  out.train.save(spec.root / "rich_train.csv");
  out.val.save(spec.root / "rich_val.csv");
  out.test.save(spec.root / "rich_test.csv");

  nlohmann::json echo;
  echo["format_version"] = 1;
  echo["task"] = std::string(task_name(spec.task));
  echo["master_seed"] = hex64(spec.master_seed);
  std::vector<std::string> train_names, heldout_names;
  for (VariantId v : spec.train_variants)
    train_names.emplace_back(variant_name(v));
  for (VariantId v : spec.heldout_variants)
    heldout_names.emplace_back(variant_name(v));
  echo["train_variants"] = train_names;
  echo["heldout_variants"] = heldout_names;
  echo["desk_scale"] = spec.desk_scale;
  echo["train_fingerprint"] = hex64(out.train.fingerprint());
  echo["val_fingerprint"] = hex64(out.val.fingerprint());
  echo["test_fingerprint"] = hex64(out.test.fingerprint());
  std::ofstream jf(spec.root / "rich.json");
  if (!jf) throw IoFailure("cannot write rich.json");
  jf << echo.dump(2) << '\n';

  return out;
}

VerificationReport verify_dataset(const std::filesystem::path& manifest_csv,
                                  int jobs) {
  const Manifest m = Manifest::load(manifest_csv);
  const std::filesystem::path base = manifest_csv.parent_path();

  VerificationReport report;
  report.records = static_cast<std::int64_t>(m.records.size());
  report.fingerprint = m.fingerprint();

  std::unordered_set<std::string> ids;
  std::unordered_set<std::uint64_t> seeds;
  std::unordered_map<std::string, std::array<std::int64_t, 2>> split_counts;
  for (const auto& r : m.records) {
    if (!ids.insert(r.image_id).second) {
      report.ids_unique = false;
      if (report.first_offender.empty())
        report.first_offender = "duplicate id " + r.image_id;
    }
    if (!seeds.insert(r.seed).second) {
      report.seeds_distinct = false;
      if (report.first_offender.empty())
        report.first_offender = "duplicate seed on " + r.image_id;
    }
    split_counts[r.variant + "/" + r.split][static_cast<std::size_t>(r.label)]++;
  }
  for (const auto& [key, counts] : split_counts) {
    if (counts[0] != counts[1]) {
      report.balance_ok = false;
      if (report.first_offender.empty())
        report.first_offender = "label imbalance in " + key;
    }
  }

  std::atomic<std::int64_t> missing{0}, bad_checksum{0}, bad_label{0};
  std::mutex offender_mutex;
  std::int64_t offender_index = -1;
  std::string offender_text;
  const auto note_offender = [&](std::int64_t i, const std::string& what) {
    std::lock_guard<std::mutex> lock(offender_mutex);
    if (offender_index < 0 || i < offender_index) {
      offender_index = i;
      offender_text = what;
    }
  };

  parallel_for(static_cast<std::int64_t>(m.records.size()), jobs,
               [&](std::int64_t i) {
    const ManifestRecord& r = m.records[static_cast<std::size_t>(i)];
    std::vector<std::uint8_t> bytes;
    try {
      bytes = read_bytes(base / r.path);
    } catch (const IoFailure&) {
      missing.fetch_add(1);
      note_offender(i, "missing file for " + r.image_id);
      return;
    }
    if (fnv1a64(bytes.data(), bytes.size()) != r.checksum) {
      bad_checksum.fetch_add(1);
      note_offender(i, "checksum mismatch for " + r.image_id);
      return;
    }
    try {
      const Image img = decode_png(bytes);
      const int derived = solve(img, *parse_task(r.task));
      if (derived != r.label) {
        bad_label.fetch_add(1);
        note_offender(i, "oracle disagrees on " + r.image_id);
      }
    } catch (const Error& e) {
      bad_label.fetch_add(1);
      note_offender(i, "oracle failed on " + r.image_id + ": " + e.what());
    }
  });

  report.missing_files = missing.load();
  report.checksum_failures = bad_checksum.load();
  report.label_mismatches = bad_label.load();
  if (report.first_offender.empty() && offender_index >= 0)
    report.first_offender = offender_text;
  return report;
}

OracleCheck oracle_check(const std::filesystem::path& manifest_csv,
                         std::int64_t limit_per_split, int jobs) {
  const Manifest m = Manifest::load(manifest_csv);
  const std::filesystem::path base = manifest_csv.parent_path();

  std::unordered_map<std::string, std::int64_t> taken;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    const std::string key = m.records[i].variant + "/" + m.records[i].split;
    if (limit_per_split >= 0 && taken[key] >= limit_per_split) continue;
    ++taken[key];
    chosen.push_back(i);
  }

  OracleCheck check;
  check.checked = static_cast<std::int64_t>(chosen.size());
  std::atomic<std::int64_t> mismatches{0};
  std::mutex first_mutex;
  std::int64_t first_index = -1;
  std::string first_text;

  parallel_for(static_cast<std::int64_t>(chosen.size()), jobs,
               [&](std::int64_t k) {
    const ManifestRecord& r = m.records[chosen[static_cast<std::size_t>(k)]];
    std::string failure;
    try {
      const Image img = decode_png(read_bytes(base / r.path));
      if (solve(img, *parse_task(r.task)) != r.label)
        failure = "oracle disagrees on " + r.image_id;
    } catch (const Error& e) {
      failure = "oracle failed on " + r.image_id + ": " + e.what();
    }
    if (!failure.empty()) {
      mismatches.fetch_add(1);
      std::lock_guard<std::mutex> lock(first_mutex);
      if (first_index < 0 || k < first_index) {
        first_index = k;
        first_text = failure;
      }
    }
  });

  check.mismatches = mismatches.load();
  check.first_mismatch = first_text;
  return check;
}

}  // namespace relgen
