#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <revnet/io.hpp>
#include <revnet/synth.hpp>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct run_result {
  int code;
  std::string out;
};

run_result run(const std::string& args) {
  const auto log = fs::temp_directory_path() / "revnet_cli_stdout.txt";
  const std::string cmd = std::string(REVNET_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, revnet::read_file(log)};
}

struct workspace {
  fs::path dir = fs::temp_directory_path() / "revnet_cli_test";
  fs::path config = dir / "small.ini";
  workspace() {
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto cfg = support::small_config(2, 50);
    revnet::write_file_atomic(config, revnet::synth_config_to_ini(cfg));
  }
  ~workspace() { fs::remove_all(dir); }
  std::string p(const std::string& rel) const { return (dir / rel).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate, validate and exit codes") {
  workspace w;
  REQUIRE(run("generate --config " + w.config.string() + " --out " + w.p("g1")).code == 0);
  CHECK(run("generate --config " + w.config.string() + " --out " + w.p("g2")).code == 0);
  CHECK(run("generate --config " + w.config.string() + " --seed 3 --out " + w.p("g3")).code == 0);
  const auto d1 = revnet::file_sha256(w.p("g1/events.jsonl"));
  CHECK(d1 == revnet::file_sha256(w.p("g2/events.jsonl")));
  CHECK(d1 != revnet::file_sha256(w.p("g3/events.jsonl")));

  const auto manifest = nlohmann::json::parse(revnet::read_file(w.p("g1/manifest.json")));
  CHECK(manifest["command"] == "generate");
  CHECK(manifest["seed"] == 2);
  CHECK(manifest["outputs"].size() == 1);

  CHECK(run("validate " + w.p("g1/events.jsonl")).code == 0);

  auto text = revnet::read_file(w.p("g1/events.jsonl"));
  const auto at = text.rfind("\"date\":\"") + 8;  // last line has no dependents
  text.replace(at, 10, "2010-13-45");
  revnet::write_file_atomic(w.p("bad.jsonl"), text);
  const auto bad = run("validate " + w.p("bad.jsonl"));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("1 error(s)") != std::string::npos);

  CHECK(run("validate " + w.p("missing.jsonl")).code == 3);
  CHECK(run("features " + w.p("missing.jsonl") + " --out " + w.p("x")).code == 3);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("train").code == 2);
  CHECK(run("train " + w.p("missing.csv") + " --out " + w.p("t")).code == 3);
}

TEST_CASE("features, train, predict, analyze") {
  workspace w;
  REQUIRE(run("generate --config " + w.config.string() + " --out " + w.p("g")).code == 0);
  const auto log = w.p("g/events.jsonl");

  REQUIRE(run("features " + log + " --from 2009 --to 2012 --out " + w.p("f1")).code == 0);
  REQUIRE(run("features " + log + " --from 2009 --to 2012 --out " + w.p("f2")).code == 0);
  CHECK(revnet::file_sha256(w.p("f1/features.csv")) == revnet::file_sha256(w.p("f2/features.csv")));
  CHECK(revnet::file_sha256(w.p("f1/features.missing.csv")) == revnet::file_sha256(w.p("f2/features.missing.csv")));

  const auto empty = run("features " + log + " --from 1990 --to 1991 --out " + w.p("fe"));
  CHECK(empty.code == 0);
  CHECK(empty.out.find("warning") != std::string::npos);
  CHECK(revnet::read_file(w.p("fe/features.csv")) ==
        "paper_id,Deg,BC,CC,Clus,PR,RR,TS,RL,SNT,AR,AP,RAC,TA,DR,target,year\n");
  CHECK(run("features " + log + " --from 2012 --to 2009 --out " + w.p("fx")).code == 2);

  const auto t1 = run("train " + w.p("f1/features.csv") + " --folds 5 --out " + w.p("t1"));
  REQUIRE(t1.code == 0);
  CHECK(t1.out.find("gamma 0.02") != std::string::npos);
  CHECK(t1.out.find("C 100") != std::string::npos);
  CHECK(t1.out.find("DR") != std::string::npos);
  const auto t2 = run("train " + w.p("f1/features.csv") + " --folds 5 --out " + w.p("t2"));
  CHECK(revnet::file_sha256(w.p("t1/report.json")) == revnet::file_sha256(w.p("t2/report.json")));
  CHECK(revnet::file_sha256(w.p("t1/model.json")) == revnet::file_sha256(w.p("t2/model.json")));

  const auto net = run("train " + w.p("f1/features.csv") + " --folds 5 --network-only --out " + w.p("tn"));
  REQUIRE(net.code == 0);
  CHECK(net.out.find("gamma 0.01") != std::string::npos);
  CHECK(net.out.find("PR") != std::string::npos);
  CHECK(net.out.find("RR") == std::string::npos);
  const auto model = nlohmann::json::parse(revnet::read_file(w.p("tn/model.json")));
  CHECK(model["feature_names"].size() == 5);

  REQUIRE(run("predict --model " + w.p("t1/model.json") + " " + w.p("f1/features.csv") + " --out " + w.p("p")).code ==
          0);
  const auto preds = revnet::read_file(w.p("p/predictions.csv"));
  const auto rows = revnet::read_file(w.p("f1/features.csv"));
  CHECK(std::count(preds.begin(), preds.end(), '\n') == std::count(rows.begin(), rows.end(), '\n'));

  REQUIRE(run("analyze " + log + " --out " + w.p("a1")).code == 0);
  REQUIRE(run("analyze " + log + " --out " + w.p("a2")).code == 0);
  const auto manifest = revnet::read_file(w.p("a1/manifest.csv"));
  for (auto name : {"summary", "citation_buckets", "network_quartiles", "irregular_high_cited_rejected"})
    CHECK(manifest.find(name) != std::string::npos);
  for (const auto& entry : fs::directory_iterator(w.p("a1"))) {
    const auto name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    CHECK(revnet::file_sha256(entry.path()) == revnet::file_sha256(fs::path(w.p("a2")) / name));
  }

  REQUIRE(run("graph " + log + " --cutoff 2010-01-01 --out " + w.p("gr")).code == 0);
  CHECK(fs::exists(w.p("gr/centrality.csv")));
}

TEST_CASE("analyze handles a corpus without rejections") {
  workspace w;
  using namespace support;
  std::vector<revnet::review_event> ev{submit("P1", ymd(2009, 1, 1), {"a"}), assign("P1", ymd(2009, 1, 2), "E", "R"),
                                       report("P1", ymd(2009, 2, 1), "R"),
                                       decide("P1", ymd(2009, 3, 1), revnet::outcome::accept),
                                       cite("P1", ymd(2015, 12, 31), 3)};
  std::ostringstream out;
  revnet::write_events(out, ev);
  revnet::write_file_atomic(w.p("one.jsonl"), out.str());
  REQUIRE(run("analyze " + w.p("one.jsonl") + " --out " + w.p("a")).code == 0);
  const auto rejected = revnet::read_file(w.p("a/irregular_high_cited_rejected.csv"));
  CHECK(std::count(rejected.begin(), rejected.end(), '\n') == 1);
  const auto accepted = revnet::read_file(w.p("a/irregular_low_cited_accepted.csv"));
  CHECK(std::count(accepted.begin(), accepted.end(), '\n') == 2);
}

}
