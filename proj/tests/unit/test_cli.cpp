#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "tempdir.hpp"
#include "topicmine/corpus.hpp"
#include "topicmine/embed.hpp"
#include "topicmine/topic_set.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = topicmine::cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(TOPICMINE_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("compare happy path writes the report") {
    testutil::TempDir tmp;
    const auto r = run({"compare", "--corpus", fixture("mini.jsonl"), "--seed", "7", "--out-dir", tmp.path().string()});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(tmp / "report.json"));
    CHECK(std::filesystem::exists(tmp / "report.txt"));
    CHECK(r.out.find("COMPARISON SUMMARY") != std::string::npos);
  }

  TEST_CASE("plsa --k 0 is a usage error naming the constraint") {
    const auto r = run({"plsa", "--k", "0"});
    CHECK(r.code == 1);
    CHECK(r.err.find("k >= 1") != std::string::npos);
  }

  TEST_CASE("missing topics file is a data error naming the file") {
    const auto r = run({"coherence", "--topics", "missing.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("missing.json") != std::string::npos);
  }

  TEST_CASE("unknown subcommand or flag prints usage") {
    for (const auto& args : std::vector<std::vector<std::string>>{{"frobnicate"}, {"plsa", "--bogus"}, {}}) {
      const auto r = run(args);
      CHECK(r.code == 1);
      CHECK(r.err.find("Usage") != std::string::npos);
    }
  }

  TEST_CASE("config overrides") {
    CHECK(run({"plsa", "--config", "plsa.k=0"}).code == 1);
    CHECK(run({"plsa", "--config", "no.such.key=1"}).code == 1);
    CHECK(run({"plsa", "--config", "plsa.k=abc"}).code == 1);
    CHECK(run({"plsa", "--config", "missing-equals"}).code == 1);
    CHECK(run({"compare", "--corpus", fixture("mini.jsonl"), "--config", "coherence.top_n=1"}).code == 1);
  }

  TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("compare") != std::string::npos);
  }

  TEST_CASE("stage-by-stage workflow through the corpus cache") {
    testutil::TempDir tmp;
    const auto dir = tmp.path().string();
    REQUIRE(run({"ingest", "--input", fixture("mini.jsonl"), "--out-dir", dir}).code == 0);
    const auto cache = (tmp / "corpus.tmc").string();
    CHECK(topicmine::load_corpus(cache).n_docs() == 80);

    REQUIRE(run({"plsa", "--corpus", cache, "--k", "3", "--seed", "2", "--out-dir", dir}).code == 0);
    CHECK(topicmine::load_topic_set(tmp / "plsa_topics.json").topics.size() == 3);

    REQUIRE(run({"embed", "--corpus", cache, "--dim", "12", "--out-dir", dir}).code == 0);
    CHECK(topicmine::load_embeddings(tmp / "embeddings.emb1", 80).dim() == 12);

    REQUIRE(run({"cluster", "--corpus", cache, "--embeddings", (tmp / "embeddings.emb1").string(),
                 "--min-cluster-size", "5", "--out-dir", dir})
                .code == 0);
    CHECK(std::filesystem::exists(tmp / "labels.csv"));

    const auto scored = run({"coherence", "--topics", (tmp / "cluster_topics.json").string(), "--corpus", cache,
                             "--out-dir", dir});
    CHECK(scored.code == 0);
    CHECK(std::filesystem::exists(tmp / "coherence.json"));

    CHECK(run({"map", "--plsa-model", (tmp / "plsa.model").string(), "--out-dir", dir}).code == 0);
    CHECK(std::filesystem::exists(tmp / "intertopic.json"));
    CHECK(run({"map", "--corpus", cache, "--labels", (tmp / "labels.csv").string(), "--out-dir", dir}).code == 0);
    CHECK(run({"map", "--out-dir", dir}).code == 1);
  }

  TEST_CASE("global flags are accepted before and after the subcommand") {
    testutil::TempDir tmp;
    CHECK(run({"--threads", "2", "ingest", "--input", fixture("mini.jsonl"), "--out-dir", tmp.path().string()}).code == 0);
    CHECK(run({"ingest", "--input", fixture("mini.jsonl"), "--seed", "3", "--out-dir", tmp.path().string()}).code == 0);
  }

  TEST_CASE("data errors map to exit 2") {
    testutil::TempDir tmp;
    CHECK(run({"ingest", "--input", (tmp / "absent.jsonl").string(), "--out-dir", tmp.path().string()}).code == 2);
    const auto bad = tmp.write("bad.jsonl", "{\"id\":1\n");
    CHECK(run({"ingest", "--input", bad.string(), "--out-dir", tmp.path().string()}).code == 2);
    const auto r = run({"embed", "--corpus", fixture("mini.jsonl"), "--input", (tmp / "none.emb1").string()});
    CHECK(r.code == 2);
  }
}
