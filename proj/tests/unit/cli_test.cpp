#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rnip/manifest.hpp"
#include "scene_fixture.hpp"

namespace rnip {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / "rnip_cli_test" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  RunResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(RNIP_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  // Three captures: two shifted copies and one of unrelated content.
  fs::path three_pair_fixture() const {
    const fs::path in = dir_ / "in";
    testing::write_scene(in / "scene_a", 256, 11,
                         {{"noisy_1", 4, -2}, {"noisy_2", -6, 8}, {"noisy_3", 0, 0, true}});
    return in;
  }

  // Small training configuration that runs in about a second.
  fs::path tiny_config(int steps = 3) const {
    nlohmann::json j{{"steps", steps},        {"input_size", 96},      {"channels", 8},  {"latent_channels", 8},
                     {"train_pairs", 4},      {"val_pairs", 2},        {"batch", 2}};
    const fs::path p = dir_ / "tiny.json";
    std::ofstream(p) << j.dump();
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpListsEveryCommand) {
  const RunResult r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* c : {"prepare", "align", "mask", "develop", "demosaic", "train", "eval", "rd-sweep", "mac-count",
                        "coder-selftest"})
    EXPECT_NE(r.out.find(c), std::string::npos) << c;
  const RunResult p = run("prepare --help");
  EXPECT_NE(p.out.find("0.035"), std::string::npos);
}

TEST_F(CliTest, InvalidInvocationsExitWithTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("prepare --input x").code, 2);
  EXPECT_EQ(run("--threads 0 mac-count").code, 2);
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"stepz": 3})";
  EXPECT_EQ(run("train --config " + bad.string() + " --output " + (dir_ / "x.ckpt").string()).code, 2);
}

TEST_F(CliTest, PrepareEmptyInput) {
  fs::create_directories(dir_ / "empty");
  const RunResult r = run("prepare --input " + (dir_ / "empty").string() + " --output " + (dir_ / "out").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(slurp(dir_ / "out" / "manifest.jsonl").empty());
  EXPECT_TRUE(slurp(dir_ / "out" / "patch_index.jsonl").empty());
}

TEST_F(CliTest, PrepareThreePairFixture) {
  const fs::path in = three_pair_fixture();
  const RunResult r = run("prepare --input " + in.string() + " --output " + (dir_ / "out").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto records = read_manifest(dir_ / "out" / "manifest.jsonl");
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].shift_y, 4);
  EXPECT_EQ(records[0].shift_x, -2);
  EXPECT_EQ(records[1].shift_y, -6);
  EXPECT_EQ(records[1].shift_x, 8);
  int discarded = 0;
  for (const auto& rec : records) {
    discarded += rec.discarded;
    EXPECT_EQ(rec.scene_id, "scene_a");
    EXPECT_EQ(rec.camera_id, "fixture-cam");
    EXPECT_EQ(rec.mask_ref.empty(), rec.discarded);
    if (!rec.discarded) EXPECT_TRUE(fs::exists(dir_ / "out" / rec.mask_ref));
  }
  EXPECT_EQ(discarded, 1);
  EXPECT_TRUE(records[2].discarded);
  EXPECT_NE(r.out.find("discarded 1"), std::string::npos) << r.out;
}

TEST_F(CliTest, PrepareIsDeterministicAcrossThreads) {
  const fs::path in = three_pair_fixture();
  // Large enough for the 512-pixel patch grid.
  testing::write_scene(in / "scene_b", 640, 12, {{"a", 2, 2}, {"b", -4, 0}});
  const int threads[] = {1, 1, 8};
  for (int k = 0; k < 3; ++k) {
    const std::string out = (dir_ / ("o" + std::to_string(k))).string();
    ASSERT_EQ(run("--threads " + std::to_string(threads[k]) + " prepare --patch-kind bayer --input " + in.string() +
                  " --output " + out)
                  .code,
              0);
  }
  for (const char* f : {"manifest.jsonl", "patch_index.jsonl", "masks/scene_b/a.mask"}) {
    const std::string one = slurp(dir_ / "o0" / f);
    EXPECT_FALSE(one.empty()) << f;
    EXPECT_EQ(slurp(dir_ / "o1" / f), one) << f;
    EXPECT_EQ(slurp(dir_ / "o2" / f), one) << f;
  }
}

TEST_F(CliTest, PrepareFailsWhenMostPairsFail) {
  const fs::path in = dir_ / "in";
  testing::write_scene(in / "s", 256, 13, {{"n1", 0, 0}, {"n2", 2, 2}});
  // A second clean capture makes the scene ambiguous, so all its pairs fail.
  fs::copy_file(in / "s" / "clean.pgm", in / "s" / "gt_2.pgm");
  fs::copy_file(in / "s" / "clean.meta", in / "s" / "gt_2.meta");
  const RunResult r = run("prepare --input " + in.string() + " --output " + (dir_ / "out").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("expected one clean capture"), std::string::npos) << r.err;
}

TEST_F(CliTest, AlignAndMaskSinglePair) {
  const fs::path in = three_pair_fixture();
  const fs::path s = in / "scene_a";
  const RunResult r = run("align --noisy " + (s / "noisy_2.pgm").string() + " --clean " + (s / "clean.pgm").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["shift_y"], -6);
  EXPECT_EQ(j["shift_x"], 8);
  EXPECT_FALSE(j["discarded"].get<bool>());
  const RunResult m = run("mask --noisy " + (s / "noisy_1.pgm").string() + " --clean " + (s / "clean.pgm").string() +
                          " --output " + (dir_ / "m.mask").string());
  EXPECT_EQ(m.code, 0) << m.err;
  EXPECT_TRUE(fs::exists(dir_ / "m.mask"));
  EXPECT_EQ(run("align --noisy " + (s / "missing.pgm").string() + " --clean " + (s / "clean.pgm").string()).code, 1);
}

TEST_F(CliTest, DevelopAndDemosaicAreSeeded) {
  const fs::path in = three_pair_fixture();
  const std::string src = (in / "scene_a" / "clean.pgm").string();
  ASSERT_EQ(run("develop --input " + src + " --output " + (dir_ / "a.rawpatch").string() + " --dev-seed 5 --params-out " +
                (dir_ / "a.txt").string())
                .code,
            0);
  ASSERT_EQ(run("develop --input " + src + " --output " + (dir_ / "b.rawpatch").string() + " --dev-seed 5").code, 0);
  ASSERT_EQ(run("develop --input " + src + " --output " + (dir_ / "c.rawpatch").string() + " --dev-seed 6").code, 0);
  EXPECT_EQ(slurp(dir_ / "a.rawpatch"), slurp(dir_ / "b.rawpatch"));
  EXPECT_NE(slurp(dir_ / "a.rawpatch"), slurp(dir_ / "c.rawpatch"));
  EXPECT_NE(slurp(dir_ / "a.txt").find("sigmoid_gain"), std::string::npos);
  EXPECT_EQ(run("demosaic --input " + src + " --output " + (dir_ / "d.rawpatch").string()).code, 0);
  EXPECT_GT(fs::file_size(dir_ / "d.rawpatch"), 3u * 256 * 256 * 4);
}

TEST_F(CliTest, MacCountAndCoderSelftest) {
  const RunResult m = run("mac-count");
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("62.592"), std::string::npos) << m.out;
  const RunResult c = run("coder-selftest --symbols 100000");
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("roundtrip exact"), std::string::npos) << c.out;
}

TEST_F(CliTest, TrainIsDeterministicAcrossThreads) {
  const std::string cfg = tiny_config().string();
  ASSERT_EQ(run("--threads 1 train --config " + cfg + " --output " + (dir_ / "t1.ckpt").string()).code, 0);
  ASSERT_EQ(run("--threads 8 train --config " + cfg + " --output " + (dir_ / "t8.ckpt").string()).code, 0);
  EXPECT_EQ(slurp(dir_ / "t1.ckpt"), slurp(dir_ / "t8.ckpt"));
  ASSERT_EQ(run("--seed 9 train --config " + cfg + " --output " + (dir_ / "s9.ckpt").string()).code, 0);
  EXPECT_NE(slurp(dir_ / "t1.ckpt"), slurp(dir_ / "s9.ckpt"));
  const RunResult e = run("eval --checkpoint " + (dir_ / "t1.ckpt").string());
  ASSERT_EQ(e.code, 0) << e.err;
  const auto j = nlohmann::json::parse(e.out);
  EXPECT_GT(j["coded_bpp"].get<double>(), 0.0);
  EXPECT_GT(j["msssim"].get<double>(), 0.0);
}

TEST_F(CliTest, RdSweep) {
  const fs::path ckpts = dir_ / "ckpt";
  fs::create_directories(ckpts);
  const RunResult empty = run("rd-sweep --checkpoint-dir " + ckpts.string() + " --output " + (dir_ / "e.csv").string());
  EXPECT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(slurp(dir_ / "e.csv"), "label,lambda,bpp,msssim\n");

  const std::string cfg = tiny_config(2).string();
  const RunResult missing = run("rd-sweep --config " + cfg + " --lambdas 0.01 --checkpoint-dir " + ckpts.string() +
                                " --output " + (dir_ / "m.csv").string());
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("MissingCheckpoint"), std::string::npos) << missing.err;

  const RunResult r = run("rd-sweep --config " + cfg + " --lambdas 0.01,0.5 --checkpoint-dir " + ckpts.string() +
                          " --output " + (dir_ / "r.csv").string() + " --train-missing --label tiny");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(ckpts / "lambda_0.01.ckpt"));
  EXPECT_TRUE(fs::exists(ckpts / "lambda_0.5.ckpt"));
  std::istringstream csv(slurp(dir_ / "r.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "label,lambda,bpp,msssim");
  double prev_bpp = -1.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    EXPECT_EQ(line.rfind("tiny,", 0), 0u);
    const double bpp = std::stod(line.substr(line.find(',', 5) + 1));
    EXPECT_GE(bpp, prev_bpp);
    prev_bpp = bpp;
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

}  // namespace
}  // namespace rnip
