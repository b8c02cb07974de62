#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "oracles.hpp"

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(TRUSTSAGE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::pair<double, double>> scores_by_label(const std::filesystem::path& p) {
  std::map<std::string, std::pair<double, double>> out;
  std::ifstream in(p);
  std::string label;
  double ti, tw;
  while (in >> label >> ti >> tw) out[label] = {ti, tw};
  return out;
}

}  // namespace

using trustsage::oracle::TempDir;

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("tsm"), 2);
  EXPECT_EQ(run("nonsense"), 2);
  EXPECT_EQ(run("tsm --edges /nonexistent/edges.tsv"), 2);
}

TEST(Cli, SynthThenDownstreamCommands) {
  TempDir dir;
  const std::string d = dir.path().string();
  const std::string small =
      " --set synth.communities=3 --set synth.community_size=30 --set synth.p_in=0.2"
      " --set synth.p_out=0.02 --set cascade.seeds=3 --set train.epochs=2"
      " --set train.hidden_dim=4 --set train.sample_size=5";
  ASSERT_EQ(run("--out-dir " + d + small + " synth"), 0);
  for (auto* f : {"edges.tsv", "trust_scores.tsv", "believability.tsv", "communities.tsv",
                  "cha.tsv", "trace.tsv", "activity.csv", "retweets.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.file(f))) << f;
  }
  const std::string e = d + "/edges.tsv";
  const std::string inputs = " --edges " + e + " --trust " + d + "/trust_scores.tsv" +
                             " --believability " + d + "/believability.tsv";
  EXPECT_EQ(run("--out-dir " + d + "/t tsm --edges " + e), 0);
  // reloading renumbers nodes, so compare per label
  auto a = scores_by_label(dir.file("t/trust_scores.tsv"));
  auto b = scores_by_label(dir.file("trust_scores.tsv"));
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [label, s] : b) {
    ASSERT_EQ(a.count(label), 1u) << label;
    EXPECT_NEAR(a[label].first, s.first, 1e-12);
    EXPECT_NEAR(a[label].second, s.second, 1e-12);
  }
  EXPECT_EQ(run("--out-dir " + d + " featurize" + inputs), 0);
  EXPECT_EQ(run("sample --edges " + e + " --weights " + d + "/sampling_weights.tsv --root 0"), 0);
  EXPECT_EQ(run("sample --edges " + e + " --weights " + d + "/sampling_weights.tsv --root zz"), 2);
  EXPECT_EQ(run("--out-dir " + d + small + " train" + inputs + " --trace " + d +
                "/trace.tsv --communities " + d + "/communities.tsv"),
            0);
  EXPECT_EQ(run("--out-dir " + d + " predict" + inputs + " --model " + d + "/model.json"), 0);
  EXPECT_EQ(run("--out-dir " + d + " evaluate --edges " + e + " --predictions " + d +
                "/predictions.tsv --trace " + d + "/trace.tsv"),
            0);
  auto metrics = nlohmann::json::parse(slurp(dir.file("metrics.json")));
  EXPECT_TRUE(metrics.contains("accuracy"));
  EXPECT_EQ(run("--out-dir " + d + " baseline" + inputs + " --trace " + d +
                "/trace.tsv --communities " + d + "/communities.tsv --selector trusted"),
            0);
  EXPECT_EQ(run("--out-dir " + d + " --set no.such.key=1 pipeline"), 2);
}

TEST(Cli, ContractViolationExitsThree) {
  TempDir dir;
  const std::string d = dir.path().string();
  std::ostringstream edges, trace, comm;
  for (int v = 0; v < 12; ++v) {
    edges << v << '\t' << (v + 1) % 12 << '\n';
    trace << v << '\t' << (v == 0 ? "spreader\t0" : "exposed\t1") << '\n';
  }
  dir.write("edges.tsv", edges.str());
  dir.write("trace.tsv", trace.str());
  EXPECT_EQ(run("--out-dir " + d + " --set edges=" + d + "/edges.tsv --set trace=" + d +
                "/trace.tsv --set models=trusting pipeline"),
            3);
}
