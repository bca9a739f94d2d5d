// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "varitune/fm/dsl.hpp"
#include "varitune/learn/forest.hpp"
#include "varitune/measure/dataset.hpp"
#include "varitune/measure/measure.hpp"
#include "varitune/sampler/sample_io.hpp"

namespace varitune::cli {
namespace {

namespace fs = std::filesystem;

const std::string kFixtures = VARITUNE_FIXTURES;
const std::string kModel = kFixtures + "/hf-transformers.fm";
const std::string kEffects = kFixtures + "/hf-effects.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "varitune");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("varitune-cli-") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // a, b and c are free; the effect table is additive and noise-free.
  void write_tiny() {
    spit(dir_ / "tiny.fm", "feature root abstract {\n  optional { feature a feature b feature c }\n}\n");
    spit(dir_ / "tiny-effects.json",
         R"({"base": {"energy_kj": 20, "latency_s": 10, "pass_at_1": 0.5},
             "features": {"a": {"energy_kj": 30}, "b": {"energy_kj": -10}, "c": {"energy_kj": 5}},
             "noise_relative": 0, "idle_power_w": 50})");
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"count"}).code, 1);  // missing --model
  EXPECT_EQ(invoke({"sample", "-m", kModel, "-s", "random", "-t", "9"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
  EXPECT_EQ(invoke({"count", "-m", path("missing.fm")}).code, 2);
  spit(dir_ / "broken.fm", "feature root { optional { feature } }");
  const auto broken = invoke({"check", "-m", path("broken.fm")});
  EXPECT_EQ(broken.code, 2);
  EXPECT_NE(broken.err.find("1:"), std::string::npos) << broken.err;
  spit(dir_ / "unsat.fm", "feature r { optional { feature a } }\nconstraints { a !a }\n");
  EXPECT_EQ(invoke({"check", "-m", path("unsat.fm")}).code, 2);
  EXPECT_EQ(invoke({"sample", "-m", kModel, "-s", "sideways"}).code, 2);
}

TEST_F(CliTest, CheckAssignment) {
  write_tiny();
  spit(dir_ / "req.fm", "feature r { optional { feature a feature b } }\nconstraints { a => b }\n");
  EXPECT_EQ(invoke({"check", "-m", path("req.fm"), "--select", "a"}).code, 0);
  const auto bad = invoke({"check", "-m", path("req.fm"), "--select", "a", "--deselect", "b"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("assignment: invalid"), std::string::npos);
  EXPECT_EQ(invoke({"check", "-m", path("req.fm"), "--select", "zz"}).code, 2);
}

TEST_F(CliTest, CountAndBudget) {
  write_tiny();
  const auto r = invoke({"count", "-m", path("tiny.fm")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "8\n");

  ::setenv("VARITUNE_BUDGET_DECISIONS", "1", 1);
  const auto capped = invoke({"count", "-m", kModel});
  ::setenv("VARITUNE_BUDGET_DECISIONS", "many", 1);
  const auto garbled = invoke({"count", "-m", kModel});
  ::unsetenv("VARITUNE_BUDGET_DECISIONS");
  EXPECT_EQ(capped.code, 3);
  EXPECT_EQ(garbled.code, 2);
}

TEST_F(CliTest, DeadFeatures) {
  spit(dir_ / "dead.fm",
       "feature r { optional { feature a feature b } }\nconstraints { a => !a }\n");
  const auto r = invoke({"dead", "-m", path("dead.fm")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a\n");
}

TEST_F(CliTest, SampleWritesReReadableOutputs) {
  const auto r = invoke({"sample", "-m", kModel, "-s", "greedy2wise", "--seed", "7", "-o", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = fm::load_model(kModel);
  const auto sample = sampler::load_sample(model, path("out/sample.json"), 2);
  EXPECT_EQ(sample.coverage, 1.0);
  EXPECT_EQ(sample.seed, 7u);
  EXPECT_EQ(sample.strategy, sampler::Strategy::kGreedy2Wise);

  const auto meta = nlohmann::json::parse(slurp(path("out/sample-meta.json")));
  EXPECT_EQ(meta["coverage"].get<double>(), 1.0);

  const auto manifest = nlohmann::json::parse(slurp(path("out/manifest.json")));
  EXPECT_EQ(manifest["command"], "sample");
  EXPECT_EQ(manifest["parameters"]["seed"], 7);
  EXPECT_TRUE(manifest["inputs"]["model"].contains("hash"));
  EXPECT_EQ(slurp(path("out/manifest.json")).find(path("out")), std::string::npos);

  const auto cov = invoke({"coverage", "-m", kModel, "--sample", path("out/sample.json")});
  EXPECT_EQ(cov.code, 0);
  EXPECT_EQ(cov.out.rfind("coverage: 1 (", 0), 0u) << cov.out;
}

TEST_F(CliTest, SeveralStrategiesMerge) {
  write_tiny();
  const auto r = invoke({"sample", "-m", path("tiny.fm"), "-s", "random", "-s", "greedy2wise",
                         "-n", "3", "-o", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = fm::load_model(path("tiny.fm"));
  const auto sample = sampler::load_sample(model, path("out/sample.json"), 2);
  EXPECT_EQ(sample.strategy, sampler::Strategy::kCombined);
  EXPECT_EQ(sample.coverage, 1.0);
}

TEST_F(CliTest, MeasureSynthRowsIngest) {
  ASSERT_EQ(invoke({"sample", "-m", kModel, "-s", "incremental2wise", "-o", path("s")}).code, 0);
  const auto r = invoke({"measure-synth", "-m", kModel, "--sample", path("s/sample.json"),
                         "--effects", kEffects, "--reps", "3", "-o", path("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = fm::load_model(kModel);
  const auto sample = sampler::load_sample(model, path("s/sample.json"), 2);
  const auto records = measure::ingest_csv(path("s/measurements.csv"), sample);
  EXPECT_EQ(records.size(), 3 * sample.size());
}

// Hand arithmetic on the additive table: for a, the rows with a average
// 20 + 30 + (-10 + 5) / 2 and the rows without average 20 + (-10 + 5) / 2.
TEST_F(CliTest, AnalyzeGolden) {
  write_tiny();
  ASSERT_EQ(invoke({"sample", "-m", path("tiny.fm"), "-s", "random", "-n", "8", "-o", path("s")}).code, 0);
  ASSERT_EQ(invoke({"measure-synth", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                    "--effects", path("tiny-effects.json"), "-o", path("s")})
                .code,
            0);
  const auto r = invoke({"analyze", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                         "--measurements", path("s/measurements.csv"), "--metric", "energy_kj",
                         "--feature-wise", "-o", path("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("a/impacts.csv")),
            "rank,subject,anchor,metric,delta,mean_with,mean_without,support_with,"
            "support_without,insufficient_support\n"
            "1,a,,energy_kj,30,47.5,17.5,4,4,false\n"
            "2,b,,energy_kj,-10,27.5,37.5,4,4,false\n"
            "3,c,,energy_kj,5,35,30,4,4,false\n");
  EXPECT_FALSE(fs::exists(path("a/pair-impacts.csv")));

  const auto anchored = invoke({"analyze", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                                "--measurements", path("s/measurements.csv"), "--anchor", "a",
                                "-o", path("p")});
  ASSERT_EQ(anchored.code, 0) << anchored.err;
  // No pair effects were injected: within rows that select a, b and c keep
  // their singleton deltas.
  const std::string pairs = slurp(path("p/pair-impacts.csv"));
  EXPECT_NE(pairs.find("1,a & b,a,energy_kj,-10,"), std::string::npos) << pairs;
  EXPECT_NE(pairs.find("2,a & c,a,energy_kj,5,"), std::string::npos) << pairs;

  EXPECT_EQ(invoke({"analyze", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                    "--measurements", path("s/measurements.csv"), "--anchor", "zz"})
                .code,
            2);
}

TEST_F(CliTest, MeasurementErrorsCarryLineNumbers) {
  write_tiny();
  ASSERT_EQ(invoke({"sample", "-m", path("tiny.fm"), "-s", "random", "-n", "8", "-o", path("s")}).code, 0);
  spit(dir_ / "bad.csv", std::string(measure::kCsvHeader) + "\nr001,1,-4,1,0.5,50,ok\n");
  const auto r = invoke({"pareto", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                         "--measurements", path("bad.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("2"), std::string::npos) << r.err;
}

TEST_F(CliTest, ParetoFiltersAndOutputs) {
  write_tiny();
  ASSERT_EQ(invoke({"sample", "-m", path("tiny.fm"), "-s", "random", "-n", "8", "-o", path("s")}).code, 0);
  // Energy equals the additive table; accuracy rises with energy except for
  // one zero-accuracy row and one above the threshold.
  spit(dir_ / "m.csv", std::string(measure::kCsvHeader) +
                           "\n# campaign: hand-written\n"
                           "r001,1,45,1,0.8,50,ok\n"
                           "r002,1,20,1,0.3,50,ok\n"
                           "r003,1,50,1,0.0,50,ok\n"
                           "r004,1,40,1,0.7,50,ok\n"
                           "r005,1,25,1,0.2,50,ok\n"
                           "r006,1,75,1,0.9,50,ok\n"
                           "r007,1,10,1,0.1,50,ok\n"
                           "r008,1,15,1,0.1,50,ok\n");
  const auto r = invoke({"pareto", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                         "--measurements", path("m.csv"), "-o", path("p")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(path("p/pareto.csv"));
  EXPECT_NE(csv.find("r003,,,,pass_at_1 = 0"), std::string::npos) << csv;
  EXPECT_NE(csv.find("r006,,,,energy_kj > 70"), std::string::npos) << csv;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::map<std::string, std::string> dominated;
  while (std::getline(lines, line)) {
    const auto id = line.substr(0, 4);
    dominated[id] = line;
  }
  EXPECT_EQ(dominated.size(), 8u);
  EXPECT_NE(dominated["r007"].find(",false,"), std::string::npos);
  EXPECT_NE(dominated["r008"].find(",true,"), std::string::npos);  // r007 is cheaper, equal pass
  EXPECT_NE(dominated["r005"].find(",true,"), std::string::npos);  // r002 is cheaper and better
  EXPECT_TRUE(fs::exists(path("p/pareto.svg")));
  EXPECT_TRUE(fs::exists(path("p/profiles.md")));

  const auto kept = invoke({"pareto", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                            "--measurements", path("m.csv"), "--keep-zero-accuracy",
                            "--max-energy", "100", "-o", path("k")});
  ASSERT_EQ(kept.code, 0) << kept.err;
  EXPECT_EQ(slurp(path("k/pareto.csv")).find("pass_at_1 = 0"), std::string::npos);
}

TEST_F(CliTest, TrainPredictRoundTrip) {
  ASSERT_EQ(invoke({"sample", "-m", kModel, "-s", "random", "-s", "greedy2wise", "-o", path("s")}).code, 0);
  ASSERT_EQ(invoke({"measure-synth", "-m", kModel, "--sample", path("s/sample.json"), "--effects",
                    kEffects, "-o", path("s")})
                .code,
            0);
  const auto r = invoke({"train", "-m", kModel, "--sample", path("s/sample.json"), "--measurements",
                         path("s/measurements.csv"), "--metric", "energy_kj", "--grid", "quick",
                         "-o", path("t")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"forest.json", "eval.json", "eval.md", "cv.md", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "t" / f)) << f;
  }
  const auto eval = nlohmann::json::parse(slurp(path("t/eval.json")));
  EXPECT_GT(eval["r2"].get<double>(), 0.5);

  const auto forest = learn::forest_from_json(slurp(path("t/forest.json")));
  EXPECT_EQ(learn::forest_to_json(forest), slurp(path("t/forest.json")));
  const auto model = fm::load_model(kModel);
  const auto sample = sampler::load_sample(model, path("s/sample.json"), 2);

  const auto p = invoke({"predict", "--forest", path("t/forest.json"), "-m", kModel, "--sample",
                         path("s/sample.json"), "-o", path("q")});
  ASSERT_EQ(p.code, 0) << p.err;
  std::istringstream lines(p.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "config_id,prediction");
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto& c = sample.configurations.at(i++);
    const double expected = forest.predict(measure::feature_vector(model, c));
    EXPECT_EQ(line, c.id + "," + fmt::format("{}", expected));
  }
  EXPECT_EQ(i, sample.size());
  EXPECT_EQ(slurp(path("q/predictions.csv")), p.out);

  // One configuration given by its selected features.
  const auto& first = sample.configurations[0];
  std::string names;
  for (const auto& n : first.selected_names(model)) {
    const auto idx = model.index_of(n);
    if (model.feature(idx).is_abstract) continue;
    names += (names.empty() ? "" : ",") + n;
  }
  const auto one = invoke({"predict", "--forest", path("t/forest.json"), "-m", kModel, "--select", names});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, fmt::format("config_id,prediction\nquery,{}\n",
                                 forest.predict(measure::feature_vector(model, first))));
  EXPECT_EQ(invoke({"predict", "--forest", path("t/forest.json"), "-m", kModel, "--select",
                    "decoding_greedy"})
                .code,
            2);

  spit(dir_ / "other.fm", "feature r { optional { feature a } }");
  EXPECT_EQ(invoke({"predict", "--forest", path("t/forest.json"), "-m", path("other.fm"),
                    "--select", "a"})
                .code,
            2);
}

std::map<std::string, std::string> tree_of(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return files;
}

TEST_F(CliTest, ReportFromManifestIsDeterministic) {
  spit(dir_ / "cfg" / "run.json",
       nlohmann::json{{"model", kModel},
                      {"strategies", {"random", "greedy2wise"}},
                      {"seed", 3},
                      {"measurements", {{"synthetic", kEffects}, {"repetitions", 2}}},
                      {"anchor", "decoding_greedy"},
                      {"learn", {{"grid", "quick"}, {"folds", 3}}},
                      {"output", "first"}}
           .dump());
  const auto a = invoke({"report", "--manifest", path("cfg/run.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = invoke({"report", "--manifest", path("cfg/run.json"), "-o", path("second")});
  ASSERT_EQ(b.code, 0) << b.err;

  const auto first = tree_of(dir_ / "cfg" / "first");
  const auto second = tree_of(dir_ / "second");
  ASSERT_FALSE(first.empty());
  EXPECT_EQ(first, second);
  for (const char* f : {"report.md", "manifest.json", "measurements.csv", "pareto.csv",
                        "pareto.svg", "profiles.md", "impacts-energy_kj.csv",
                        "pair-impacts-pass_at_1.csv", "sample/sample.json",
                        "forest-energy_kj-ALL.json", "eval-latency_s-ALL.json"}) {
    EXPECT_TRUE(first.count(f)) << f;
  }

  // Outputs feed back into the ingest side.
  const auto model = fm::load_model(kModel);
  const auto sample = sampler::load_sample(model, (dir_ / "second/sample/sample.json").string(), 2);
  EXPECT_EQ(sample.coverage, 1.0);
  EXPECT_EQ(measure::ingest_csv(dir_ / "second/measurements.csv", sample).size(), 2 * sample.size());
  EXPECT_NO_THROW(learn::forest_from_json(first.at("forest-pass_at_1-ALL.json")));
}

TEST_F(CliTest, ReportManifestRelativePathsAndErrors) {
  fs::copy_file(kModel, dir_ / "model.fm");
  fs::copy_file(kEffects, dir_ / "effects.json");
  spit(dir_ / "run.json", R"({"model": "model.fm", "strategies": ["greedy2wise"],
                             "measurements": {"synthetic": "effects.json"}})");
  const auto r = invoke({"report", "--manifest", path("run.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "report" / "report.md"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "report" / "manifest.json"));
  EXPECT_EQ(manifest["inputs"]["model"]["path"], "model.fm");

  spit(dir_ / "nosource.json", R"({"model": "model.fm", "measurements": {}})");
  EXPECT_EQ(invoke({"report", "--manifest", path("nosource.json")}).code, 2);
  spit(dir_ / "garbage.json", "{not json");
  EXPECT_EQ(invoke({"report", "--manifest", path("garbage.json")}).code, 2);
  spit(dir_ / "nomodel.json", R"({"model": "absent.fm", "measurements": {"synthetic": "effects.json"}})");
  EXPECT_EQ(invoke({"report", "--manifest", path("nomodel.json")}).code, 2);
}

TEST_F(CliTest, ReportFromFiles) {
  write_tiny();
  ASSERT_EQ(invoke({"sample", "-m", path("tiny.fm"), "-s", "random", "-n", "8", "-o", path("s")}).code, 0);
  ASSERT_EQ(invoke({"measure-synth", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                    "--effects", path("tiny-effects.json"), "-o", path("s")})
                .code,
            0);
  const auto r = invoke({"report", "-m", path("tiny.fm"), "--sample", path("s/sample.json"),
                         "--measurements", path("s/measurements.csv"), "--metric", "energy_kj",
                         "--max-energy", "100", "-o", path("r")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string md = slurp(path("r/report.md"));
  EXPECT_NE(md.find("valid configurations: 8"), std::string::npos) << md;
  EXPECT_NE(md.find("| 1 | a | +30.00 |"), std::string::npos) << md;
}

}  // namespace
}  // namespace varitune::cli
