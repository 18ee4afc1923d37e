// Copyright 2026 The swapanneal Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "swapanneal/experiments.hpp"

namespace sa = swapanneal;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("swapanneal_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(sa::read_file(p));
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, SizeLists) {
  EXPECT_EQ(sa::parse_size_list("8..512", "dims"),
            (std::vector<std::size_t>{8, 16, 32, 64, 128, 256, 512}));
  EXPECT_EQ(sa::parse_size_list("3, 5,7", "dims"), (std::vector<std::size_t>{3, 5, 7}));
  EXPECT_TRUE(sa::parse_size_list("", "dims").empty());
  EXPECT_THROW(sa::parse_size_list("8..4", "dims"), sa::InputError);
  EXPECT_THROW(sa::parse_size_list("x", "dims"), sa::InputError);
  EXPECT_THROW(sa::parse_size_list("-3", "dims"), sa::InputError);
}

TEST(Config, FileThenFlagsOverride) {
  sa::ExperimentConfig cfg;
  sa::apply_config_text(cfg, "# comment\nmodel = b,c\ndims=8..32\ndelta=2 # trailing\nseed=9\n");
  EXPECT_EQ(cfg.models, (std::vector<sa::ModelKind>{sa::ModelKind::b, sa::ModelKind::c}));
  EXPECT_EQ(cfg.dims.size(), 3u);
  EXPECT_EQ(cfg.step(), 0.005);
  sa::apply_setting(cfg, "dims", "64");
  sa::apply_setting(cfg, "dt", "0.1");
  EXPECT_EQ(cfg.dims, (std::vector<std::size_t>{64}));
  EXPECT_EQ(cfg.step(), 0.1);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_THROW(sa::apply_config_text(cfg, "bogus=1"), sa::InputError);
  EXPECT_THROW(sa::apply_config_text(cfg, "no equals sign"), sa::InputError);
  EXPECT_THROW(sa::apply_setting(cfg, "model", "e"), sa::InputError);
  EXPECT_THROW(sa::apply_setting(cfg, "double", "maybe"), sa::InputError);
}

TEST(Manifest, Sha256) {
  EXPECT_EQ(sa::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sa::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunFlow, WritesTablesAndManifest) {
  const auto dir = scratch("flow");
  sa::ExperimentConfig cfg;
  sa::apply_setting(cfg, "dims", "8..32");
  sa::apply_setting(cfg, "model", "a,d");
  cfg.out = dir;
  const auto r = sa::run_flow(cfg);
  EXPECT_EQ(r.exit_code, 0);
  for (const char* f : {"flow_a_8.csv", "flow_a_32.csv", "flow_d_16.csv", "manifest_flow.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto manifest = nlohmann::json::parse(sa::read_file(dir / "manifest_flow.json"));
  ASSERT_EQ(manifest["files"].size(), 6u);
  for (const auto& f : manifest["files"])
    EXPECT_EQ(f["sha256"], sa::sha256_hex(sa::read_file(dir / f["path"].get<std::string>())));
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");

  const auto rows = read_csv(dir / "flow_a_8.csv");
  double prev = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p = sa::parse_double(rows[i][1]);
    EXPECT_GE(p, prev);
    prev = p;
  }
  EXPECT_GT(prev, 0.99);
}

TEST(RunFlow, InvalidInputWritesNothing) {
  const auto dir = scratch("flow_bad");
  sa::ExperimentConfig cfg;
  cfg.out = dir;
  EXPECT_THROW(sa::run_flow(cfg), sa::InputError);  // empty dims
  sa::apply_setting(cfg, "model", "c");
  sa::apply_setting(cfg, "dims", "8,12");
  EXPECT_THROW(sa::run_flow(cfg), sa::InputError);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(RunXi, MissingKSourceIsInputError) {
  const auto dir = scratch("xi_missing");
  sa::ExperimentConfig cfg;
  cfg.out = dir;
  try {
    sa::run_xi(cfg);
    FAIL() << "expected an InputError";
  } catch (const sa::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("coeffs"), std::string::npos);
  }
}

TEST(RunCoeffs, SmallNetworks) {
  const auto dir = scratch("coeffs");
  sa::ExperimentConfig cfg;
  sa::apply_setting(cfg, "ms", "1,2,4");
  cfg.out = dir;
  EXPECT_EQ(sa::run_coeffs(cfg).exit_code, 0);
  EXPECT_EQ(sa::read_file(dir / "K_m1.csv"), "j,k1,k2,k3\n1,0,1,0\n2,0,1,0\n");
  const auto steps = read_csv(dir / "step_star.csv");
  EXPECT_EQ(steps[1][0], "1");
  EXPECT_EQ(steps[1][1], "1");
  EXPECT_EQ(steps[2][0], "2");
  EXPECT_EQ(steps[2][1], "3");
}

TEST(RunVerify, DefaultPassesAndCorruptedTaylorFails) {
  sa::ExperimentConfig cfg;
  cfg.out = scratch("verify");
  cfg.samples = 50;
  EXPECT_EQ(sa::run_verify(cfg).exit_code, 0);
  cfg.taylor_hph = 1.0;
  const auto r = sa::run_verify(cfg);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.message.find("taylor_second_order_vs_oracle"), std::string::npos);
}

TEST(RunVerify, SeedVariation) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sa::VerifyOptions opt;
    opt.seed = seed;
    opt.protocol_samples = 40;
    opt.max_schedule_m = 8;
    EXPECT_TRUE(sa::run_verification(opt).passed()) << seed;
  }
}

TEST(GoldenXi, MatchesBaseline) {
  const fs::path golden = fs::path(SWAPANNEAL_GOLDEN_DIR) / "xi_baseline.csv";
  const auto rows = read_csv(golden);
  ASSERT_GT(rows.size(), 1u);
  const auto K = sa::propagate_coefficients(sa::build_improved_schedule(128));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto kind = sa::parse_model_kind(rows[i][0]);
    const std::size_t dim = std::stoul(rows[i][1]);
    const int alpha = std::stoi(rows[i][2]);
    const sa::ModelCase c{kind, dim, sa::build_model(kind, dim, 1.0), ""};
    const auto got = sa::xi_rows(c, K, {alpha}, 0.01).front();
    EXPECT_EQ(got.m_alpha, std::stoll(rows[i][3])) << rows[i][0] << dim << alpha;
    const double want = sa::parse_double(rows[i][4]);
    EXPECT_NEAR(got.xi, want, 1e-9 * std::abs(want) + 1e-300) << rows[i][0] << dim << alpha;
  }
}
