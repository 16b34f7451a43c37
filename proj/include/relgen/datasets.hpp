#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "relgen/tasks.hpp"

namespace relgen {

inline constexpr std::array<std::string_view, 3> kSplitNames = {"train", "val",
                                                                "test"};

// Canonical (train, val, test) sizes per task.
std::array<std::int64_t, 3> default_split_sizes(TaskKind k);

// Reduced size for desk-scale runs: max(2, 2 * floor(n / (2 * scale))),
// always even so exact label balance survives; zero-size splits stay zero.
std::int64_t scale_split(std::int64_t n, int desk_scale);

struct DatasetSpec {
  TaskKind task = TaskKind::SD;
  VariantId variant = VariantId::Original;
  std::uint64_t master_seed = 0;
  std::filesystem::path root;  // dataset directory, created if needed
  std::array<std::int64_t, 3> split_sizes{0, 0, 0};  // pre-scaling; 0 = skip
  int desk_scale = 1;
  int jobs = 1;
  // Coarse liveness hook, called with (done, total) every few thousand
  // images and once at the end. Serialized across worker threads.
  std::function<void(std::int64_t, std::int64_t)> progress;

  std::array<std::int64_t, 3> scaled_sizes() const;
};

DatasetSpec make_dataset_spec(TaskKind task, VariantId variant,
                              std::uint64_t master_seed,
                              std::filesystem::path root);

struct ManifestRecord {
  std::string image_id;
  std::string path;  // relative to the manifest's directory
  std::string split;
  int label = 0;
  std::uint64_t seed = 0;
  std::uint64_t checksum = 0;  // FNV-1a 64 of the PNG bytes
  std::string task;
  std::string variant;
};

struct Manifest {
  std::vector<ManifestRecord> records;

  // FNV-1a 64 over the exact CSV serialisation; equal fingerprints mean
  // byte-identical manifests, and (through the checksums) identical images.
  std::uint64_t fingerprint() const;
  std::string to_csv() const;
  void save(const std::filesystem::path& csv_path) const;
  static Manifest load(const std::filesystem::path& csv_path);
};

// Generates every image of the dataset (label-balanced by construction,
// seeded per image from (master_seed, split, index)), writes
// <root>/<split>/<index>.png, manifest.csv and a dataset.json echo of the
// spec. `jobs` worker threads share the work; output is identical for any
// job count.
Manifest build_dataset(const DatasetSpec& spec);

std::vector<VariantId> default_rich_train();
std::vector<VariantId> default_rich_heldout();

struct RichRegimeSpec {
  TaskKind task = TaskKind::SD;
  std::uint64_t master_seed = 0;
  std::filesystem::path root;
  std::vector<VariantId> train_variants = default_rich_train();
  std::vector<VariantId> heldout_variants = default_rich_heldout();
  int desk_scale = 1;
  int jobs = 1;
  // Same hook as DatasetSpec::progress, reported against the image total
  // of the whole regime rather than one component.
  std::function<void(std::int64_t, std::int64_t)> progress;
};

struct RichManifests {
  Manifest train, val, test;
};

// Multi-variant regime: each training variant contributes its train and val
// splits, each held-out variant only a test split. Component datasets are
// built under <root>/<variant> (seeded from (master_seed, variant)) and the
// composite manifests rich_train.csv / rich_val.csv / rich_test.csv are
// written at the root.
RichManifests build_rich_regime(const RichRegimeSpec& spec);

struct VerificationReport {
  std::int64_t records = 0;
  std::int64_t missing_files = 0;
  std::int64_t checksum_failures = 0;
  std::int64_t label_mismatches = 0;
  bool balance_ok = true;
  bool ids_unique = true;
  bool seeds_distinct = true;
  std::string first_offender;
  std::uint64_t fingerprint = 0;

  bool ok() const {
    return missing_files == 0 && checksum_failures == 0 &&
           label_mismatches == 0 && balance_ok && ids_unique && seeds_distinct;
  }
};

// Full audit of a built dataset: file presence, checksums, oracle label
// agreement, per-split balance, id and seed uniqueness.
VerificationReport verify_dataset(const std::filesystem::path& manifest_csv,
                                  int jobs = 1);

struct OracleCheck {
  std::int64_t checked = 0;
  std::int64_t mismatches = 0;
  std::string first_mismatch;

  double agreement() const {
    return checked == 0 ? 0.0
                        : 1.0 - static_cast<double>(mismatches) /
                                    static_cast<double>(checked);
  }
};

// Re-derives labels with the oracle for up to limit_per_split images of each
// split (all of them when negative).
OracleCheck oracle_check(const std::filesystem::path& manifest_csv,
                         std::int64_t limit_per_split = -1, int jobs = 1);

}  // namespace relgen
