#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "lexsev/cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using oracle::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run lexsev_run(std::vector<std::string> args) {
  args.insert(args.begin(), "lexsev");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = lexsev::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return files;
}

/// The toy sample copied into a scratch directory.
fs::path copy_toy(const TempDir& dir) {
  fs::copy(fs::path(LEXSEV_SOURCE_DIR) / "samples" / "toy", dir.path() / "toy", fs::copy_options::recursive);
  fs::remove_all(dir.path() / "toy" / "out");
  return dir.path() / "toy" / "config.json";
}

const char* kCommands[] = {"analyze", "severe", "eval", "sweep", "mine", "graph"};

}  // namespace

TEST(Cli, MissingFileNamesThePath) {
  TempDir dir;
  auto cfg = dir.write("c.json", R"({"output": "out",
    "corpora": [{"name": "c", "path": "nowhere.csv", "format": "lines", "labels_path": "nowhere.labels"}],
    "term_lists": [{"name": "L", "path": "l.txt"}]})");
  dir.write("l.txt", "x\n");
  auto r = lexsev_run({"--config", cfg.string(), "analyze"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nowhere.csv"), std::string::npos) << r.err;
}

TEST(Cli, MissingConfig) {
  TempDir dir;
  auto r = lexsev_run({"--config", (dir.path() / "absent.json").string(), "analyze"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("absent.json"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  TempDir dir;
  auto cfg = copy_toy(dir);
  EXPECT_EQ(lexsev_run({"--config", cfg.string()}).code, 2);
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "--bogus", "analyze"}).code, 2);
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "--min-offense", "1.5", "severe"}).code, 2);
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "--min-sup", "0", "mine"}).code, 2);
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "--case", "weird", "analyze"}).code, 2);
  EXPECT_EQ(lexsev_run({"--help"}).code, 0);
}

TEST(Cli, ManifestIndexesEveryFile) {
  TempDir dir;
  auto cfg = copy_toy(dir);
  auto out = dir.path() / "out";
  for (auto c : kCommands) ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", out.string(), c}).code, 0) << c;
  auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["tool"], "lexsev");
  std::set<std::string> listed, commands;
  for (const auto& f : manifest["files"]) {
    auto rel = f["path"].get<std::string>();
    listed.insert(rel);
    commands.insert(f["command"].get<std::string>());
    ASSERT_TRUE(fs::exists(out / rel)) << rel;
    EXPECT_EQ(fs::file_size(out / rel), f["bytes"].get<std::uintmax_t>()) << rel;
  }
  std::set<std::string> on_disk;
  for (const auto& [rel, _] : tree(out))
    if (rel != "manifest.json") on_disk.insert(rel);
  EXPECT_EQ(listed, on_disk);
  // Severe lists are rewritten by eval, which records itself as their last writer.
  EXPECT_EQ(commands, (std::set<std::string>{"analyze", "eval", "sweep", "mine", "graph"}));
  for (auto stem : {"corpus_a/LinesByTermCount_ListA", "corpus_a/AllHateTermsFrequencies_ListA",
                    "corpus_a/TopTermsFrequency_ListA", "corpus_a/AllHTsPercentLine_ListA",
                    "corpus_a/OuterJoinHTsFrequencies_ListA", "corpus_a/OuterJoinHTsPercentLines_ListA",
                    "corpus_a/IntraAgreement_ListA", "corpus_a/InterAgreement", "corpus_a/Summary_N",
                    "corpus_a/Eval", "corpus_a/Sweep", "rules/OuterJoin", "rules/StableRules", "graphs/Concepts"}) {
    EXPECT_TRUE(listed.count(std::string(stem) + ".csv")) << stem;
    EXPECT_TRUE(listed.count(std::string(stem) + ".json")) << stem;
  }
  EXPECT_TRUE(listed.count("corpus_a/SevereList_Offensiveness(Hate)(0.7).txt"));
  EXPECT_TRUE(listed.count("corpus_a/SweepSeries.tsv"));
}

TEST(Cli, IdempotentOutputs) {
  TempDir dir;
  auto cfg = copy_toy(dir);
  auto a = dir.path() / "a", b = dir.path() / "b";
  for (auto c : kCommands) {
    ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", a.string(), "--threads", "3", c}).code, 0);
    ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", b.string(), c}).code, 0);
  }
  // Rerunning into an existing directory leaves it unchanged.
  auto before = tree(a);
  for (auto c : kCommands) ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", a.string(), c}).code, 0);
  EXPECT_EQ(tree(a), before);
  EXPECT_EQ(tree(a), tree(b));
}

TEST(Cli, StrictPromotesWarnings) {
  TempDir dir;
  auto cfg = copy_toy(dir);
  auto out = (dir.path() / "out").string();
  auto lax = lexsev_run({"--config", cfg.string(), "--out", out, "--min-offense", "1.0", "severe"});
  EXPECT_EQ(lax.code, 0);
  EXPECT_NE(lax.err.find("is empty"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "corpus_a" / "SevereList_Offensiveness(Hate)(1).txt"));
  auto strict = lexsev_run({"--config", cfg.string(), "--out", out, "--strict", "--min-offense", "1.0", "severe"});
  EXPECT_EQ(strict.code, 1);
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "--out", out, "--strict", "analyze"}).code, 0);
}

TEST(Cli, MinStabAboveDatabaseCount) {
  TempDir dir;
  auto cfg = copy_toy(dir);
  auto r = lexsev_run({"--config", cfg.string(), "--out", (dir.path() / "out").string(), "--min-stab", "9", "mine"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("minStab"), std::string::npos) << r.err;
}

TEST(Cli, EmptyDatabaseWarns) {
  TempDir dir;
  dir.write("c.txt", "nothing hateful\nplain words\nmore words\n");
  dir.write("c.labels", "hate\nno_hate\nrelative_hate\n");
  dir.write("l.txt", "tr*sh\n");
  auto cfg = dir.write("c.json", R"({"output": "out",
    "corpora": [{"name": "c", "path": "c.txt", "format": "lines", "labels_path": "c.labels"}],
    "term_lists": [{"name": "L", "path": "l.txt"}],
    "mining": {"min_sup": 1, "min_conf": 0, "min_stab": 1}})");
  auto r = lexsev_run({"--config", cfg.string(), "mine"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("empty"), std::string::npos) << r.err;
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "rules" / "StableRules.csv"));
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "--strict", "mine"}).code, 1);
  EXPECT_EQ(lexsev_run({"--config", cfg.string(), "graph"}).code, 0);
}

TEST(Cli, OrderedRuleFileFromFixture) {
  TempDir dir;
  std::string text, labels;
  auto add = [&](int n, const std::string& line) {
    for (int i = 0; i < n; ++i) {
      text += line + " n" + std::to_string(text.size()) + "\n";
      labels += "hate\n";
    }
  };
  add(1, "sp*c Anglo k*ll");
  add(1, "sp*c Anglo");
  add(1, "Anglo");
  add(13, "sp*c k*ll");
  add(3, "sp*c");
  text += "calm line\n";
  labels += "no_hate\n";
  dir.write("c.txt", text);
  dir.write("c.labels", labels);
  dir.write("l.txt", "sp*c\nk*ll\n");
  dir.write("e.txt", "Anglo\n");
  auto cfg = dir.write("c.json", R"({"output": "out",
    "corpora": [{"name": "c", "path": "c.txt", "format": "lines", "labels_path": "c.labels"}],
    "term_lists": [{"name": "L", "path": "l.txt"}],
    "entity_lists": [{"name": "E", "path": "e.txt"}],
    "mining": {"min_sup": 1, "min_conf": 0, "min_stab": 1, "mode": "ordered"}})");
  ASSERT_EQ(lexsev_run({"--config", cfg.string(), "mine"}).code, 0);
  auto rules = slurp(dir.path() / "out" / "rules" / "Rules_c__L.csv");
  EXPECT_NE(rules.find("\nsp*c,anglo,2,15,0.133\n"), std::string::npos) << rules;
  auto j = nlohmann::json::parse(slurp(dir.path() / "out" / "rules" / "Rules_c__L.json"));
  bool found = false;
  for (const auto& r : j)
    if (r["antecedent"] == nlohmann::json{"sp*c"} && r["consequent"] == nlohmann::json{"anglo"}) {
      found = true;
      EXPECT_NEAR(r["confidence"].get<double>(), 2.0 / 15.0, 1e-9);
    }
  EXPECT_TRUE(found);
  ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--mining-mode", "unordered", "--out", (dir.path() / "u").string(), "mine"}).code, 0);
  auto u = slurp(dir.path() / "u" / "rules" / "Rules_c__L.csv");
  EXPECT_NE(u.find("\nanglo,sp*c,2,3,0.667\n"), std::string::npos) << u;
  EXPECT_NE(u.find("\nsp*c,anglo,2,18,0.111\n"), std::string::npos) << u;
}

TEST(Cli, OverridesWin) {
  TempDir dir;
  auto cfg = copy_toy(dir);
  auto out = dir.path() / "o";
  ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", out.string(), "--min-offense", "0.25", "0.4", "severe"}).code, 0);
  EXPECT_TRUE(fs::exists(out / "corpus_a" / "SevereList_Offensiveness(Hate)(0.25).txt"));
  EXPECT_TRUE(fs::exists(out / "corpus_a" / "SevereList_Offensiveness(Hate)(0.4).txt"));
  EXPECT_FALSE(fs::exists(out / "corpus_a" / "SevereList_Offensiveness(Hate)(0.7).txt"));
  ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", out.string(), "--case", "hate_plus_relative", "severe"}).code, 0);
  EXPECT_TRUE(fs::exists(out / "corpus_a" / "SevereList_Offensiveness(Hate+Relative)(0.7).txt"));
  ASSERT_EQ(lexsev_run({"--config", cfg.string(), "--out", out.string(), "--top-k", "1", "analyze"}).code, 0);
  auto top = slurp(out / "corpus_a" / "TopTermsFrequency_ListA.csv");
  // One row per populated class.
  EXPECT_EQ(std::count(top.begin(), top.end(), '\n'), 3);
}
