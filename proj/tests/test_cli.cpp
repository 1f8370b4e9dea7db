/*
 * Copyright 2026 The famglm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <string>

#include "famglm/csv.hpp"
#include "famglm/metrics.hpp"
#include "famglm/model_io.hpp"
#include "helpers.hpp"

using namespace famglm;
using testutil::TempDir;
namespace fs = std::filesystem;

namespace {

double csv_metric(const fs::path& metrics_csv, const std::string& name) {
  for (const auto& row : read_csv(metrics_csv)) {
    if (row.size() == 2 && row[0] == name) return parse_float(row[1]);
  }
  FAIL("metric " + name + " not found in " + metrics_csv.string());
  return 0.0;
}

}  // namespace

TEST_CASE("cli reports usage errors with exit code 2") {
  REQUIRE_FALSE(testutil::cli_path().empty());
  TempDir dir("cli_usage");
  const std::string out = " --out " + (dir.path() / "o").string();
  CHECK(testutil::run_cli("simulate" + out + " 2>/dev/null") == 2);
  CHECK(testutil::run_cli("simulate --scenario nope" + out + " 2>/dev/null") == 2);
  CHECK(testutil::run_cli("simulate --scenario goodnessOfFit --p1 8 --p2 6 --n 10 "
                          "--rho 1.0" + out + " 2>/dev/null") == 2);
  CHECK(testutil::run_cli("bogus-subcommand 2>/dev/null") == 2);
}

TEST_CASE("cli reports runtime errors with exit code 3") {
  TempDir dir("cli_runtime");
  const std::string out = " --out " + (dir.path() / "o").string();
  CHECK(testutil::run_cli("fit --manifest /nonexistent/m.csv" + out + " 2>/dev/null") == 3);
}

TEST_CASE("simulate output is byte-identical across runs") {
  TempDir dir("cli_det");
  const std::string base = "simulate --scenario goodnessOfFit --p1 8 --p2 6 --n 40 "
                           "--seed 11 --replicates 2 --out ";
  const auto out_a = dir.path() / "a";
  const auto out_b = dir.path() / "b";
  REQUIRE(testutil::run_cli(base + out_a.string() + " >/dev/null") == 0);
  REQUIRE(testutil::run_cli(base + out_b.string() + " >/dev/null") == 0);
  for (const char* name : {"results.csv", "ranks.csv", "roc.csv", "pr.csv"}) {
    CHECK(testutil::read_file(out_a / name) == testutil::read_file(out_b / name));
    CHECK_FALSE(testutil::read_file(out_a / name).empty());
  }
}

TEST_CASE("simulate emits a curve consistent with its own auc at one replicate") {
  TempDir dir("cli_curve");
  const auto out = dir.path() / "o";
  REQUIRE(testutil::run_cli("simulate --scenario goodnessOfFit --p1 10 --p2 8 --n 60 "
                            "--seed 3 --replicates 1 --out " + out.string() +
                            " >/dev/null") == 0);
  double auc_mean = -1.0;
  for (const auto& row : read_csv(out / "results.csv")) {
    if (row.size() == 4 && row[0] == "famglm" && row[1] == "auc") {
      auc_mean = parse_float(row[2]);
    }
  }
  REQUIRE(auc_mean >= 0.0);
  std::vector<std::pair<double, double>> curve;
  const auto rows = read_csv(out / "roc.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    curve.emplace_back(parse_float(rows[i][0]), parse_float(rows[i][1]));
  }
  CHECK(std::abs(trapezoid_area(curve) - auc_mean) < 1e-10);
}

TEST_CASE("simulate honors a config file with flag overrides") {
  TempDir dir("cli_cfg");
  const auto cfg = dir.path() / "scenario.txt";
  testutil::write_file(cfg,
                       "scenario goodnessOfFit\np1 8\np2 6\nn 40\nseed 4\nreplicates 1\n");
  const auto out_file = dir.path() / "from_file";
  const auto out_cli = dir.path() / "from_cli";
  REQUIRE(testutil::run_cli("simulate --config " + cfg.string() + " --out " +
                            out_file.string() + " >/dev/null") == 0);
  REQUIRE(testutil::run_cli("simulate --scenario goodnessOfFit --p1 8 --p2 6 --n 40 "
                            "--seed 4 --replicates 1 --out " + out_cli.string() +
                            " >/dev/null") == 0);
  CHECK(testutil::read_file(out_file / "results.csv") ==
        testutil::read_file(out_cli / "results.csv"));

  // an override on top of the file changes the result
  const auto out_override = dir.path() / "override";
  REQUIRE(testutil::run_cli("simulate --config " + cfg.string() + " --seed 5 --out " +
                            out_override.string() + " >/dev/null") == 0);
  CHECK(testutil::read_file(out_file / "results.csv") !=
        testutil::read_file(out_override / "results.csv"));
}

TEST_CASE("timing flag writes a median table") {
  TempDir dir("cli_time");
  const auto out = dir.path() / "o";
  REQUIRE(testutil::run_cli("simulate --scenario goodnessOfFit --p1 8 --p2 6 --n 40 "
                            "--seed 6 --replicates 3 --timing --out " + out.string() +
                            " >/dev/null") == 0);
  const auto rows = read_csv(out / "timing.csv");
  REQUIRE(rows.size() >= 3);  // header + two methods
  CHECK(rows[0][0] == "method");
  CHECK(parse_float(rows[1][1]) >= 0.0);
}

TEST_CASE("fit, predict, evaluate round-trip on the bundled corpus") {
  REQUIRE_FALSE(testutil::data_dir().empty());
  const fs::path manifest = fs::path(testutil::data_dir()) / "demo" / "manifest.csv";
  REQUIRE(fs::exists(manifest));
  TempDir dir("cli_chain");
  const auto fit_out = dir.path() / "fit";
  REQUIRE(testutil::run_cli("fit --manifest " + manifest.string() +
                            " --family binomial --height 32 --width 32 --ranks 2,2 "
                            "--out " + fit_out.string() + " >/dev/null") == 0);
  const ModelBundle model = load_model(fit_out / "model.fam");
  CHECK(model.k1 == 2);
  CHECK(model.k2 == 2);
  CHECK(model.p1 == 32);
  CHECK(model.target_height == 32);

  const auto pred_out = dir.path() / "pred";
  REQUIRE(testutil::run_cli("predict --model " + (fit_out / "model.fam").string() +
                            " --manifest " + manifest.string() + " --out " +
                            pred_out.string()) == 0);

  // in-sample predictions equal the ones logged at fit time
  const auto logged = read_csv(fit_out / "train_predictions.csv");
  const auto scored = read_csv(pred_out / "predictions.csv");
  REQUIRE(logged.size() == scored.size());
  for (std::size_t i = 1; i < logged.size(); ++i) {
    CHECK(logged[i][1] == scored[i][1]);
    CHECK(logged[i][2] == scored[i][2]);
  }

  const auto eval_out = dir.path() / "eval";
  REQUIRE(testutil::run_cli("evaluate --predictions " +
                            (pred_out / "predictions.csv").string() + " --manifest " +
                            manifest.string() + " --family binomial --out " +
                            eval_out.string()) == 0);
  const double ca = csv_metric(eval_out / "metrics.csv", "ca");
  CHECK(ca >= 0.5);
  CHECK(csv_metric(eval_out / "metrics.csv", "auc") >= 0.5);
  CHECK(fs::exists(eval_out / "roc.csv"));
  CHECK(fs::exists(eval_out / "pr.csv"));
}

TEST_CASE("evaluate catches misaligned inputs with exit code 2") {
  TempDir dir("cli_misalign");
  const fs::path manifest = fs::path(testutil::data_dir()) / "demo" / "manifest.csv";
  const auto preds = dir.path() / "p.csv";
  testutil::write_file(preds, "path,linear,mean\nwrong.pgm,0.0,0.5\n");
  CHECK(testutil::run_cli("evaluate --predictions " + preds.string() + " --manifest " +
                          manifest.string() + " --family binomial --out " +
                          (dir.path() / "o").string() + " 2>/dev/null") == 2);
}

TEST_CASE("evaluate reproduces the hand confusion case and a perfect regression") {
  TempDir dir("cli_eval");
  // four tiny images, labels 1,1,0,0
  for (int i = 0; i < 4; ++i) {
    testutil::write_file(dir.path() / ("img" + std::to_string(i) + ".pgm"),
                         "P2\n1 1\n255\n" + std::to_string(40 * i) + "\n");
  }
  testutil::write_file(dir.path() / "labels.csv",
                       "path,label\nimg0.pgm,1\nimg1.pgm,1\nimg2.pgm,0\nimg3.pgm,0\n");
  testutil::write_file(dir.path() / "preds.csv",
                       "path,mean\nimg0.pgm,0.9\nimg1.pgm,0.2\nimg2.pgm,0.8\nimg3.pgm,0.1\n");
  const auto out = dir.path() / "out";
  REQUIRE(testutil::run_cli("evaluate --predictions " + (dir.path() / "preds.csv").string() +
                            " --manifest " + (dir.path() / "labels.csv").string() +
                            " --family binomial --out " + out.string()) == 0);
  CHECK(csv_metric(out / "metrics.csv", "ca") == 0.5);
  CHECK(csv_metric(out / "metrics.csv", "kappa") == 0.0);
  CHECK(csv_metric(out / "metrics.csv", "sensitivity") == 0.5);

  testutil::write_file(dir.path() / "labels_reg.csv",
                       "path,label\nimg0.pgm,1.5\nimg1.pgm,2.5\nimg2.pgm,0.5\nimg3.pgm,-1\n");
  testutil::write_file(dir.path() / "preds_reg.csv",
                       "path,mean\nimg0.pgm,1.5\nimg1.pgm,2.5\nimg2.pgm,0.5\nimg3.pgm,-1\n");
  const auto out_reg = dir.path() / "out_reg";
  REQUIRE(testutil::run_cli("evaluate --predictions " +
                            (dir.path() / "preds_reg.csv").string() + " --manifest " +
                            (dir.path() / "labels_reg.csv").string() +
                            " --family gaussian --out " + out_reg.string()) == 0);
  CHECK(csv_metric(out_reg / "metrics.csv", "rmse") == 0.0);
  CHECK(csv_metric(out_reg / "metrics.csv", "mae") == 0.0);
}

TEST_CASE("reconstruct writes grids and errors consistent with the model") {
  TempDir dir("cli_recon");
  // tiny 3x3 corpus with exact rank-1 structure, full-rank fit
  for (int i = 0; i < 4; ++i) {
    std::string pixels;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        pixels += std::to_string((i + 1) * (r + 1) * (c + 1) * 7) + " ";
      }
    }
    testutil::write_file(dir.path() / ("m" + std::to_string(i) + ".pgm"),
                         "P2\n3 3\n255\n" + pixels + "\n");
  }
  testutil::write_file(dir.path() / "man.csv",
                       "path,label\nm0.pgm,0\nm1.pgm,1\nm2.pgm,0\nm3.pgm,1\n");
  const auto fit_out = dir.path() / "fit";
  REQUIRE(testutil::run_cli("fit --manifest " + (dir.path() / "man.csv").string() +
                            " --family binomial --height 3 --width 3 --ranks 3,3 --out " +
                            fit_out.string() + " >/dev/null 2>/dev/null") == 0);
  const auto recon_out = dir.path() / "recon";
  REQUIRE(testutil::run_cli("reconstruct --model " + (fit_out / "model.fam").string() +
                            " --manifest " + (dir.path() / "man.csv").string() +
                            " --out " + recon_out.string() + " >/dev/null") == 0);

  const auto rows = read_csv(recon_out / "recon_error.csv");
  REQUIRE(rows.size() == 6);  // header + 4 entries + mean
  double sum = 0.0;
  for (std::size_t i = 1; i <= 4; ++i) {
    const double err = parse_float(rows[i][1]);
    CHECK(err < 1e-8);  // full-rank reconstruction is exact
    sum += err;
  }
  CHECK(rows[5][0] == "__mean__");
  CHECK(parse_float(rows[5][1]) == Catch::Approx(sum / 4.0).epsilon(1e-12));
  CHECK(fs::exists(recon_out / "recon_0000.csv"));
  const auto grid = read_csv(recon_out / "recon_0003.csv");
  CHECK(grid.size() == 3);
  CHECK(grid[0].size() == 3);

  // reloaded model agrees with the stored training reconstruction error
  const ModelBundle model = load_model(fit_out / "model.fam");
  CHECK(model.training_reconstruction_error ==
        Catch::Approx(parse_float(rows[5][1])).margin(1e-12));
}
