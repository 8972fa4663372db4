#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "unimix/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "unimix_lt_cli_tests";

int run(const std::string& args, const std::string& log = "cli.log") {
  const std::string cmd = std::string(UNIMIX_LT_EXE) + " " + args + " > " + (kRoot / log).string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return unimix::read_file(p); }

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

struct Fresh {
  Fresh() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
  }
};

const std::string kSmallTrain = "--classes 4 --rho 10 --n-max 40 --dims 4 --t2 60 --batch-size 16";

}  // namespace

TEST_CASE("usage and errors") {
  Fresh f;
  CHECK(run("") == 1);
  CHECK(slurp(kRoot / "cli.log").find("gen-data") != std::string::npos);
  CHECK(run("no-such-command") == 1);
  CHECK(run("train") == 1);

  std::ofstream(kRoot / "bad.json") << R"({"classes": 4, "colour": "red"})";
  CHECK(run("train --out " + (kRoot / "r").string() + " --config " + (kRoot / "bad.json").string()) == 1);
  CHECK(slurp(kRoot / "cli.log").find("colour") != std::string::npos);

  std::ofstream(kRoot / "wrong_cmd.json") << R"({"command": "eval"})";
  CHECK(run("train --out " + (kRoot / "r").string() + " --config " + (kRoot / "wrong_cmd.json").string()) == 1);

  CHECK(run("eval --out " + (kRoot / "e").string() + " --model missing.json --data missing.csv") == 1);
  CHECK(run("train --out " + (kRoot / "r").string() + " --loss hinge") == 1);
}

TEST_CASE("divergence exits with code 2") {
  Fresh f;
  CHECK(run("train --out " + (kRoot / "boom").string() + " " + kSmallTrain + " --lr 1e200") == 2);
  CHECK(slurp(kRoot / "cli.log").find("invariant") != std::string::npos);
}

TEST_CASE("verify-dist artifacts") {
  Fresh f;
  const fs::path out = kRoot / "vd";
  REQUIRE(run("verify-dist --classes 100 --rho 200 --tau -1 --trials 20000 --seed 7 --out " + out.string()) == 0);
  CHECK(count_lines(out / "curves.csv") == 401);
  CHECK(slurp(out / "curves.csv").rfind("kind,y,density\n", 0) == 0);
  for (const char* m : {"mixup", "factor", "full"}) {
    const fs::path h = out / (std::string("histogram_") + m + ".csv");
    REQUIRE(fs::exists(h));
    CHECK(count_lines(h) == 101);
    CHECK(slurp(h).rfind("class,empirical_prob,closed_form_prob\n", 0) == 0);
  }
  REQUIRE(run("verify-dist --mode full --trials 1000 --out " + (kRoot / "vd1").string()) == 0);
  CHECK(fs::exists(kRoot / "vd1" / "histogram.csv"));
  const json cfg = unimix::read_json(out / "config.resolved.json");
  CHECK(cfg["command"] == "verify-dist");
  CHECK(cfg["trials"] == 20000);
}

TEST_CASE("gen-data, train, eval and report pipeline") {
  Fresh f;
  const fs::path test_csv = kRoot / "data" / "test.csv";
  REQUIRE(run("gen-data --classes 4 --rho 1 --n-max 30 --dims 4 --seed 99 --out " + test_csv.string()) == 0);
  CHECK(count_lines(test_csv) == 121);
  const json meta = unimix::read_json(test_csv.string() + ".meta.json");
  CHECK(meta["seed"] == 99);
  CHECK(meta["rho"] == 1.0);

  const fs::path runs = kRoot / "runs";
  REQUIRE(run("train --out " + (runs / "b_ce").string() + " " + kSmallTrain + " --loss ce --t1 0") == 0);
  REQUIRE(run("train --out " + (runs / "a_full").string() + " " + kSmallTrain) == 0);
  for (const char* name : {"a_full", "b_ce"}) {
    const fs::path dir = runs / name;
    CHECK(fs::exists(dir / "model.json"));
    CHECK(count_lines(dir / "train_log.csv") == 61);
    CHECK(slurp(dir / "train_log.csv").rfind("step,phase,loss,lr\n", 0) == 0);
    const json cfg = unimix::read_json(dir / "config.resolved.json");
    CHECK(cfg["t2_steps"] == 60);
    CHECK(cfg["warmup_steps"].is_number());
    CHECK(cfg["decay_steps"].is_array());
    REQUIRE(run("eval --model " + (dir / "model.json").string() + " --data " + test_csv.string() + " --out " +
                dir.string()) == 0);
    const json report = unimix::read_json(dir / "report.json");
    for (const char* m : {"accuracy", "ece", "mce", "ace", "tace", "sce", "brier"}) CHECK(report.contains(m));
    CHECK(report["ece"].get<double>() <= report["mce"].get<double>());
    CHECK(count_lines(dir / "reliability.csv") == 16);
    CHECK(count_lines(dir / "confusion.csv") == 17);
    CHECK(count_lines(dir / "density.csv") == 3);
    // eval keeps the train config intact.
    CHECK(unimix::read_json(dir / "config.resolved.json")["command"] == "train");
    CHECK(unimix::read_json(dir / "eval_config.resolved.json")["command"] == "eval");
  }
  CHECK(unimix::read_json(runs / "a_full" / "config.resolved.json")["t1_steps"] == 54);

  REQUIRE(run("report " + runs.string()) == 0);
  const json rows = unimix::read_json(runs / "summary.json");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["run"] == "a_full");
  CHECK(rows[1]["run"] == "b_ce");
  CHECK(rows[1]["loss"] == "ce");
  CHECK(count_lines(runs / "summary.csv") == 3);

  std::ofstream(runs / "b_ce" / "report.json") << "{ not json";
  REQUIRE(run("report " + runs.string(), "report.log") == 0);
  CHECK(slurp(kRoot / "report.log").find("warning") != std::string::npos);
  const json partial = unimix::read_json(runs / "summary.json");
  REQUIRE(partial.size() == 1);
  CHECK(partial[0]["run"] == "a_full");

  for (const auto& entry : fs::recursive_directory_iterator(kRoot)) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("replaying a resolved config reproduces outputs bitwise") {
  Fresh f;
  const fs::path first = kRoot / "first";
  const fs::path second = kRoot / "second";
  REQUIRE(run("train --out " + first.string() + " " + kSmallTrain + " --seed 5") == 0);
  REQUIRE(run("train --out " + second.string() + " --config " + (first / "config.resolved.json").string()) == 0);
  for (const char* file : {"model.json", "train_log.csv", "config.resolved.json"}) {
    CHECK(slurp(first / file) == slurp(second / file));
  }

  REQUIRE(run("circles-demo --steps 50 --out " + (kRoot / "c1").string()) == 0);
  REQUIRE(run("circles-demo --out " + (kRoot / "c2").string() + " --config " +
              (kRoot / "c1" / "config.resolved.json").string()) == 0);
  for (const char* file : {"boundary.csv", "points.csv"}) CHECK(slurp(kRoot / "c1" / file) == slurp(kRoot / "c2" / file));
  CHECK(count_lines(kRoot / "c1" / "boundary.csv") == 5);
}
