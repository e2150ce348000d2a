#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "parrot/cli.hpp"
#include "synthetic.hpp"

using namespace parrot;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Run cli(const fs::path& data, std::vector<std::string> args) {
  std::vector<std::string> all{"parrot", "--data", data.string()};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : all) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("cli limits") {
  TempDir t("parrot_cli_limits");
  const auto r = cli(t.path, {"limits", "--vocab", "2818", "--max-words", "25"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("177.22×10^84") != std::string::npos);
  const auto j = json::parse(cli(t.path, {"--json", "limits", "--vocab", "600000", "--max-words", "43"}).out);
  CHECK(j["dominantRendering"] == "288.74×10^246");
  const auto table = cli(t.path, {"limits", "--table"});
  CHECK(table.out.find("2.70×10^89") != std::string::npos);
  CHECK(table.out.find("1.45×10^157") != std::string::npos);
  CHECK(cli(t.path, {"limits"}).code == kExitUsage);
  CHECK(cli(t.path, {"limits", "--vocab", "0"}).code == kExitUsage);
  CHECK(cli(t.path, {"frobnicate"}).code == kExitUsage);
  CHECK(cli(t.path, {}).code == kExitUsage);
}

TEST_CASE("cli ingest, metrics, dedup, common, audit, validate") {
  TempDir t("parrot_cli_ingest");
  const auto data = t.path / "data";
  const auto corpus = t.path / "corpus";
  write(corpus / "a.txt", "Alpha one. Shared line.");
  write(corpus / "b.txt", "Beta two. Shared line.");
  write(corpus / "sub" / "c.html", "<p>Gamma three.</p><p>Shared line.</p>");
  write(corpus / "skip.bin", "ignored");

  auto empty = cli(data, {"metrics"});
  CHECK(empty.code == kExitOk);
  CHECK(empty.out.find("#sentences") != std::string::npos);

  auto r = cli(data, {"ingest", corpus.string(), "--source", "A"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("files=3\tok=3") != std::string::npos);

  r = cli(data, {"ingest", corpus.string(), "--source", "A"});
  CHECK(r.code == kExitPartial);
  CHECK(r.out.find("already_ingested") != std::string::npos);
  CHECK(r.out.find("ok=0\tfailed=3") != std::string::npos);

  r = cli(data, {"ingest", (corpus / "a.txt").string(), (t.path / "missing.txt").string(), "--source", "B"});
  CHECK(r.code == kExitPartial);
  CHECK(r.out.find("error\t") != std::string::npos);
  CHECK(r.out.find("ok=1\tfailed=1") != std::string::npos);

  const auto m = json::parse(cli(data, {"--json", "metrics", "--source", "A"}).out);
  CHECK(m["documents"] == 3);
  CHECK(m["sentences"] == 6);
  CHECK(m["distinctSentences"] == 4);
  CHECK(m["dSentencesWithRepetitions"] == 1);

  CHECK(cli(data, {"metrics", "--source", "nope"}).code == kExitData);
  CHECK(cli(data, {"dedup"}).out == "merged 0\n");
  const auto common = json::parse(cli(data, {"--json", "common", "--sources", "A,B"}).out);
  CHECK(common["counts"][1][0] == 2);
  CHECK(common["all"] == 2);
  CHECK(cli(data, {"common", "--sources", "A,B"}).out.find("Common #distinct sentences") != std::string::npos);

  const auto audit = cli(data, {"audit"});
  CHECK(audit.code == kExitOk);
  CHECK(audit.out.find("ok") != std::string::npos);

  const auto val = json::parse(cli(data, {"--json", "validate", "--sample", "2"}).out);
  CHECK(val["samples"].size() == 2);
  CHECK(val["aggregate"]["distinctChecked"] == 4);
}

TEST_CASE("cli ingest is worker-count independent") {
  TempDir t("parrot_cli_jobs");
  const auto docs = testing::zipf_corpus({.seed = 61, .documents = 30, .poolSize = 80});
  for (const auto& d : docs) write(t.path / "corpus" / d.meta.name, d.content.text);
  const auto corpus = (t.path / "corpus").string();
  CHECK(cli(t.path / "one", {"ingest", corpus, "--source", "S", "--jobs", "1"}).code == kExitOk);
  CHECK(cli(t.path / "many", {"ingest", corpus, "--source", "S", "--jobs", "6"}).code == kExitOk);
  const auto a = cli(t.path / "one", {"--json", "metrics"}).out;
  const auto b = cli(t.path / "many", {"--json", "metrics"}).out;
  CHECK(a == b);
}

TEST_CASE("cli project") {
  TempDir t("parrot_cli_project");
  const auto r = cli(t.path, {"project", "--points", PARROT_TEST_DATA "/trend_all.tsv", "--target-pct", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("4.03E+13") != std::string::npos);
  CHECK(r.out.find("extrapolated") != std::string::npos);
  const auto j = json::parse(cli(t.path, {"--json", "project", "--points", PARROT_TEST_DATA "/trend_all.tsv",
                                          "--at", "80399442210"})
                                 .out);
  CHECK(j["projections"].size() == 5);
  CHECK(j["prediction"]["repetitionPct"].get<double>() == doctest::Approx(3.49).epsilon(0.006));
  CHECK(cli(t.path, {"project"}).code == kExitUsage);
  CHECK(cli(t.path, {"project", "--points", "/no/such.tsv"}).code == kExitData);

  // live snapshots from a plan file
  const auto corpus = t.path / "corpus";
  const auto docs = testing::zipf_corpus({.seed = 67, .documents = 50, .poolSize = 300});
  for (std::size_t i = 0; i < docs.size(); ++i) {
    write(corpus / ("y" + std::to_string(2016 + i % 5)) / docs[i].meta.name, docs[i].content.text);
  }
  CHECK(cli(t.path / "data", {"ingest", corpus.string(), "--source", "S"}).code == kExitOk);
  const auto prefix = corpus.lexically_normal().generic_string();
  write(t.path / "plan.tsv", "# label\tprefixes\n2020\t" + prefix + "/y2020\n2019\t" + prefix + "/y2019\n2018\t" +
                                 prefix + "/y2018\n2017\t" + prefix + "/y2017\n2016\t" + prefix + "/y2016\n");
  const auto pj = json::parse(cli(t.path / "data", {"--json", "project", "--snapshots", (t.path / "plan.tsv").string(),
                                                    "--target-pct", "50"})
                                  .out);
  REQUIRE(pj["points"].size() == 5);
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(pj["points"][i]["textCharacters"].get<double>() > pj["points"][i - 1]["textCharacters"].get<double>());
  }
  CHECK(pj["snapshots"][4]["documents"] == 50);
}

TEST_CASE("snapshot plan parsing") {
  std::istringstream in("# comment\nA\tx/,y/\n\nB\tz/\n");
  const auto plan = parse_snapshot_plan(in);
  REQUIRE(plan.size() == 2);
  CHECK(plan[0].prefixes == std::vector<std::string>{"x/", "y/"});
  std::istringstream bad("no tab here\n");
  CHECK_THROWS(parse_snapshot_plan(bad));
}
