// End-to-end checks of the command-line binary: exit codes, stdout shape,
// and cross-run determinism. Each invocation captures stdout/stderr into
// scratch files.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "util.hpp"

#ifndef RELGEN_CLI_PATH
#error "RELGEN_CLI_PATH must name the relgen binary"
#endif

namespace {

struct CliResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream body;
  body << f.rdbuf();
  return body.str();
}

CliResult run_cli(const std::string& args) {
  testutil::TempDir scratch;
  const auto out_path = scratch.path / "out.txt";
  const auto err_path = scratch.path / "err.txt";
  const std::string cmd = std::string("\"") + RELGEN_CLI_PATH + "\" " + args +
                          " >" + out_path.string() + " 2>" + err_path.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string token_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size();
  auto end = start;
  while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
    ++end;
  return text.substr(start, end - start);
}

// One desk-scale sd/original dataset shared by the read-only test cases.
struct SharedDataset {
  testutil::TempDir dir;
  std::filesystem::path root;
  std::string fingerprint;

  SharedDataset() : root(dir.path / "sd_original") {
    const CliResult r = run_cli("gen --task sd --variant original --seed 7 --out " +
                                root.string() + " --desk-scale 1000");
    if (r.code != 0)
      throw std::runtime_error("shared dataset build failed: " + r.err);
    fingerprint = token_after(r.out, "fingerprint=");
  }
};

SharedDataset& shared() {
  static SharedDataset s;
  return s;
}

// image_id,path,split,label,seed,checksum,task,variant
std::vector<std::vector<std::string>> manifest_rows(
    const std::filesystem::path& manifest) {
  std::ifstream f(manifest);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(f, line)) {
    if (header) {
      header = false;
      continue;
    }
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
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help succeeds and documents the exit codes") {
  const CliResult r = run_cli("--help");
  CHECK(r.code == 0);
  CHECK(has(r.out, "Exit codes"));
  CHECK(has(r.out, "gen"));
  CHECK(has(r.out, "probe"));
}

TEST_CASE("usage failures exit with code 1") {
  testutil::TempDir dir;

  SUBCASE("missing required option") {
    const CliResult r = run_cli("gen --task sd --variant original --out " +
                                (dir.path / "x").string());
    CHECK(r.code == 1);
  }

  SUBCASE("unknown task name") {
    const CliResult r =
        run_cli("gen --task sorting --variant original --seed 1 --out " +
                (dir.path / "x").string());
    CHECK(r.code == 1);
    CHECK(has(r.err, "unknown task"));
  }

  SUBCASE("unknown subcommand") {
    CHECK(run_cli("frobnicate").code == 1);
  }

  SUBCASE("verify wants an existing manifest") {
    const CliResult r =
        run_cli("verify --manifest " + (dir.path / "none.csv").string());
    CHECK(r.code == 1);
  }

  SUBCASE("plot wants exactly one input") {
    const CliResult r = run_cli("plot --out " + (dir.path / "x.svg").string());
    CHECK(r.code == 1);
    CHECK(has(r.err, "exactly one"));
  }

  SUBCASE("odd probe pair count") {
    CHECK(run_cli("probe --seed 9 --n 9").code == 1);
  }

  SUBCASE("unknown probe mode") {
    CHECK(run_cli("probe --seed 9 --mode sideways --n 10").code == 1);
  }
}

TEST_CASE("gen reports size and fingerprint, deterministic across runs") {
  // Desk scale 1000 on sd: splits 28/4/10.
  CHECK(shared().fingerprint.size() == 16);
  CHECK(std::filesystem::exists(shared().root / "manifest.csv"));
  CHECK(std::filesystem::exists(shared().root / "dataset.json"));

  testutil::TempDir dir;
  const CliResult again =
      run_cli("gen --task sd --variant original --seed 7 --out " +
              (dir.path / "again").string() + " --desk-scale 1000 --jobs 2");
  REQUIRE(again.code == 0);
  CHECK(has(again.out, "records=42"));
  CHECK(token_after(again.out, "fingerprint=") == shared().fingerprint);

  const CliResult other =
      run_cli("gen --task sd --variant original --seed 8 --out " +
              (dir.path / "other").string() + " --desk-scale 1000");
  REQUIRE(other.code == 0);
  CHECK(token_after(other.out, "fingerprint=") != shared().fingerprint);
}

TEST_CASE("verify accepts a fresh dataset and flags a tampered copy") {
  const auto manifest = shared().root / "manifest.csv";
  const CliResult ok = run_cli("verify --manifest " + manifest.string());
  CHECK(ok.code == 0);
  CHECK(has(ok.out, "records=42"));
  CHECK(has(ok.out, "balance=ok"));
  CHECK(has(ok.out, "ids_unique=ok"));
  CHECK(token_after(ok.out, "fingerprint=") == shared().fingerprint);

  // Tamper with a copy so the shared dataset stays pristine.
  testutil::TempDir dir;
  const auto copy = dir.path / "copy";
  std::filesystem::copy(shared().root, copy,
                        std::filesystem::copy_options::recursive);
  const auto rows = manifest_rows(copy / "manifest.csv");
  REQUIRE(!rows.empty());
  const auto victim = copy / rows.front()[1];
  {
    std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
    REQUIRE(f.good());
    f.seekg(-20, std::ios::end);
    char byte = 0;
    f.get(byte);
    f.seekp(-20, std::ios::end);
    f.put(static_cast<char>(byte ^ 0x40));
  }
  const CliResult bad =
      run_cli("verify --manifest " + (copy / "manifest.csv").string());
  CHECK(bad.code == 6);
  CHECK(has(bad.err, "first offender"));
}

TEST_CASE("oracle-check re-derives every sampled label") {
  const CliResult r = run_cli("oracle-check --manifest " +
                              (shared().root / "manifest.csv").string() +
                              " --limit 2");
  CHECK(r.code == 0);
  CHECK(has(r.out, "checked=6"));  // 3 splits x 2 images
  CHECK(has(r.out, "mismatches=0"));
  CHECK(has(r.out, "agreement=1.0000"));
}

TEST_CASE("grade and plot round trip") {
  testutil::TempDir dir;
  const auto rows = manifest_rows(shared().root / "manifest.csv");

  // Two seeds of a model that reads the true labels off the manifest.
  const auto predictions = dir.path / "predictions.csv";
  {
    std::ofstream f(predictions);
    f << "model,seed,image_id,predicted_label\n";
    for (int seed = 0; seed < 2; ++seed)
      for (const auto& row : rows)
        if (row[2] == "test")
          f << "net," << seed << ',' << row[0] << ',' << row[3] << '\n';
  }

  const auto report = dir.path / "report.csv";
  const CliResult graded =
      run_cli("grade --manifest " + (shared().root / "manifest.csv").string() +
              " --predictions " + predictions.string() + " --report " +
              report.string());
  REQUIRE(graded.code == 0);
  CHECK(has(graded.out, "model=net"));
  CHECK(has(graded.out, "variant=original"));
  CHECK(has(graded.out, "n_seeds=2"));
  CHECK(has(graded.out, "mean=1.0000"));
  CHECK(has(graded.out, "high_accuracy"));
  REQUIRE(std::filesystem::exists(report));

  SUBCASE("report to svg") {
    const auto chart = dir.path / "chart.svg";
    const CliResult plotted =
        run_cli("plot --report " + report.string() + " --out " +
                chart.string() + " --hatch original --title accuracy");
    CHECK(plotted.code == 0);
    const std::string svg = slurp(chart);
    CHECK(has(svg, "<svg"));
    CHECK(has(svg, "url(#hatch)"));
  }

  SUBCASE("both inputs at once is an error") {
    const CliResult r = run_cli("plot --report " + report.string() +
                                " --attribution " + report.string() +
                                " --out " + (dir.path / "x.svg").string());
    CHECK(r.code == 1);
  }

  SUBCASE("hatch names are validated") {
    const CliResult r =
        run_cli("plot --report " + report.string() + " --out " +
                (dir.path / "x.svg").string() + " --hatch bogus");
    CHECK(r.code == 1);
    CHECK(has(r.err, "unknown variant"));
  }

  SUBCASE("attribution matrix to png") {
    const auto attr = dir.path / "attr.csv";
    {
      std::ofstream f(attr);
      f << "1,0.5,0.25\n0.125,0.0625,0.03125\n";
    }
    const auto png = dir.path / "attr.png";
    const CliResult r = run_cli("plot --attribution " + attr.string() +
                                " --out " + png.string());
    CHECK(r.code == 0);
    const std::string bytes = slurp(png);
    REQUIRE(bytes.size() > 8);
    CHECK(static_cast<unsigned char>(bytes[0]) == 0x89);
    CHECK(bytes.compare(1, 3, "PNG") == 0);
  }
}

TEST_CASE("probe prints a solved centered run and writes the sweep") {
  const CliResult r = run_cli("probe --seed 9 --n 50");
  CHECK(r.code == 0);
  CHECK(has(r.out, "mode=centered"));
  CHECK(has(r.out, "n=50"));
  CHECK(has(r.out, "accuracy=1.0000"));

  testutil::TempDir dir;
  const auto csv = dir.path / "curve.csv";
  const auto svg = dir.path / "curve.svg";
  const CliResult sweep =
      run_cli("probe --seed 9 --n 10 --curve " + csv.string() +
              " --curve-plot " + svg.string() + " --max-flips 20 --pairs 4");
  CHECK(sweep.code == 0);
  CHECK(has(sweep.out, "curve_rows=21"));
  CHECK(has(slurp(csv), "flips,mean_similarity,std_similarity"));
  CHECK(has(slurp(svg), "<svg"));
}

TEST_CASE("rich regime smoke run") {
  testutil::TempDir dir;
  const CliResult r =
      run_cli("rich --task sd --seed 5 --out " + (dir.path / "rich").string() +
              " --desk-scale 2000");
  REQUIRE(r.code == 0);
  CHECK(has(r.out, "train=126 val=18 test=16"));
  CHECK(token_after(r.out, "train_fingerprint=").size() == 16);
  CHECK(std::filesystem::exists(dir.path / "rich" / "rich_train.csv"));
  CHECK(std::filesystem::exists(dir.path / "rich" / "rich.json"));
}

}  // TEST_SUITE
