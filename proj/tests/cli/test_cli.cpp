#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "fairrep/cli/commands.hpp"
#include "fairrep/error.hpp"

using namespace fairrep;
using namespace fairrep::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(FAIRREP_FIXTURE_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "fairrep_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"fairrep"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json audit(const std::string& name) {
  const auto r = invoke({"audit", "--preds", fixture(name)});
  INFO(r.err);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

int cell(const json& doc, const char* ay, const char* yhat) {
  return doc["confusion"][ay][yhat].get<int>();
}

}  // namespace

TEST_CASE("audit: perfect predictions") {
  const auto d = audit("audit_perfect.csv");
  CHECK(d["n"] == 8);
  CHECK(cell(d, "a0_y0", "yhat0") == 3);
  CHECK(cell(d, "a0_y1", "yhat1") == 1);
  CHECK(cell(d, "a1_y0", "yhat0") == 1);
  CHECK(cell(d, "a1_y1", "yhat1") == 3);
  for (const char* ay : {"a0_y0", "a1_y0"}) CHECK(cell(d, ay, "yhat1") == 0);
  for (const char* ay : {"a0_y1", "a1_y1"}) CHECK(cell(d, ay, "yhat0") == 0);
  CHECK(d["err0"] == 0.0);
  CHECK(d["err1"] == 0.0);
  CHECK(d["err_gap"] == 0.0);
  CHECK(d["eo_gap"] == 0.0);
  // Perfect predictions inherit the base-rate gap: 1/4 vs 3/4.
  CHECK(d["dp_gap"] == 0.5);
  CHECK(d["delta_br"] == 0.5);
  CHECK(d["base_rate0"] == 0.25);
  CHECK(d["base_rate1"] == 0.75);
  CHECK(d["theorem_checks"].is_array());
}

TEST_CASE("audit: constant-1 predictor") {
  const auto d = audit("audit_constant1.csv");
  for (const char* ay : {"a0_y0", "a0_y1", "a1_y0", "a1_y1"}) CHECK(cell(d, ay, "yhat0") == 0);
  CHECK(cell(d, "a0_y0", "yhat1") == 3);
  CHECK(cell(d, "a1_y1", "yhat1") == 3);
  CHECK(d["err0"] == 0.75);
  CHECK(d["err1"] == 0.25);
  CHECK(d["err_gap"] == 0.5);
  CHECK(d["joint_err"] == 1.0);  // Err0 + Err1
  CHECK(d["fpr"] == 1.0);
  CHECK(d["fnr"] == 0.0);
  CHECK(d["ber"] == 1.0);
  CHECK(d["dp_gap"] == 0.0);
  CHECK(d["eo_gap"] == 0.0);
  CHECK(d["eo_gap_y0"] == 0.0);
  CHECK(d["eo_gap_y1"] == 0.0);
}

TEST_CASE("audit: ten-sample mixed fixture") {
  const auto d = audit("audit_mixed10.csv");
  CHECK(d["n"] == 10);
  CHECK(cell(d, "a0_y1", "yhat1") == 4);
  CHECK(cell(d, "a0_y1", "yhat0") == 1);
  CHECK(cell(d, "a0_y0", "yhat0") == 4);
  CHECK(cell(d, "a0_y0", "yhat1") == 1);
  CHECK(d["fnr"] == 0.2);
  CHECK(d["fpr"] == 0.2);
  CHECK(d["ber"] == 0.4);
  CHECK(d["err0"] == 0.2);
  CHECK(d["joint_err"].is_null());  // needs both groups
  // One group only: every gap is undefined and serialized as null.
  CHECK(d["err1"].is_null());
  CHECK(d["dp_gap"].is_null());
  CHECK(d["eo_gap"].is_null());
  CHECK(d["delta_br"].is_null());
}

TEST_CASE("audit: malformed input reports the line and fails") {
  const auto dir = scratch("audit_bad");
  std::ofstream(dir / "p.csv") << "score,label,group\n0.5,1,0\n0.5,2,0\n";
  const auto r = invoke({"audit", "--preds", (dir / "p.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("p.csv:3:") != std::string::npos);
  std::ofstream(dir / "h.csv") << "label,score,group\n1,0.5,0\n";
  CHECK(invoke({"audit", "--preds", (dir / "h.csv").string()}).code == 1);
  CHECK(invoke({"audit", "--preds", (dir / "absent.csv").string()}).code == 1);
}

TEST_CASE("audit: JSON file output matches stdout") {
  const auto dir = scratch("audit_out");
  const auto r = invoke({"audit", "--preds", fixture("audit_constant1.csv"), "--out",
                         (dir / "r.json").string()});
  REQUIRE(r.code == 0);
  CHECK(json::parse(slurp(dir / "r.json")) == audit("audit_constant1.csv"));
}

TEST_CASE("verify: zero trials is an empty success") {
  const auto r = invoke({"verify", "--trials", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") == std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(run_suite(theorem_suite(), 0, 0).empty());
}

TEST_CASE("verify: small run passes and is reproducible") {
  const auto dir = scratch("verify");
  const auto a = invoke({"verify", "--trials", "25", "--seed", "4", "--json", (dir / "a.json").string()});
  const auto b = invoke({"verify", "--trials", "25", "--seed", "4", "--json", (dir / "b.json").string()});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = json::parse(slurp(dir / "a.json"));
  CHECK(doc["pass"] == true);
  CHECK(doc["trials"] == 25);
  CHECK(doc["checks"].size() >= 6);
}

TEST_CASE("verify: a corrupted checker surfaces lhs and rhs") {
  auto suite = theorem_suite();
  suite.push_back({"corrupted", JointKind::random, [](const metrics::FiniteJoint&) {
                     return std::vector<metrics::TheoremCheck>{
                         metrics::make_check("corrupted", metrics::Relation::less_equal, 0.75, 0.25)};
                   }});
  const auto rows = run_suite(suite, 3, 0);
  const auto it = std::find_if(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.name == "corrupted"; });
  REQUIRE(it != rows.end());
  CHECK_FALSE(it->ok());
  CHECK(it->passed == 0);
  REQUIRE(it->first_failure.has_value());
  CHECK(*it->first_failure_trial == 0);

  std::ostringstream out;
  print_suite(rows, out);
  const std::string text = out.str();
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("lhs 0.75") != std::string::npos);
  CHECK(text.find("rhs 0.25") != std::string::npos);

  const auto doc = suite_json(rows, 3, 0);
  CHECK(doc["pass"] == false);
  bool found = false;
  for (const auto& c : doc["checks"])
    if (c["name"] == "corrupted") {
      found = true;
      CHECK(c["first_failure"]["lhs"] == 0.75);
      CHECK(c["first_failure"]["rhs"] == 0.25);
    }
  CHECK(found);
}

TEST_CASE("config: flags override the file, the file overrides the preset") {
  using models::Preset;
  const auto base = resolve_config(Preset::compas, 11, json(), {});
  CHECK(base.variant == models::Variant::no_debias);
  CHECK(base.epochs == 20);
  CHECK(base.arch.hidden == 10);

  const json file = {{"variant", "cfair"}, {"lambda", 2.0}, {"epochs", 7}, {"hidden", 6}};
  const auto from_file = resolve_config(Preset::compas, 11, file, {});
  CHECK(from_file.variant == models::Variant::cfair);
  CHECK(from_file.lambda == 2.0);
  CHECK(from_file.epochs == 7);
  CHECK(from_file.arch.hidden == 6);
  CHECK(from_file.batch_size == base.batch_size);

  ConfigOverrides flags;
  flags.lambda = 3.0;
  flags.variant = "laftr";
  const auto both = resolve_config(Preset::compas, 11, file, flags);
  CHECK(both.variant == models::Variant::laftr);
  CHECK(both.lambda == 3.0);
  CHECK(both.epochs == 7);

  CHECK_THROWS_AS(resolve_config(Preset::compas, 11, json{{"lamda", 1.0}}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config(Preset::compas, 11, json{{"lambda", "big"}}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config(Preset::compas, 11, json{{"lambda", -1.0}}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config(Preset::compas, 11, json::array(), {}), ConfigError);
}

TEST_CASE("usage errors exit nonzero") {
  const auto dir = scratch("usage");
  const std::string prefix = (dir / "s").string();
  REQUIRE(invoke({"synth", "--out", prefix, "--counts", "20,10,10,20"}).code == 0);
  const auto neg = invoke({"train", "--dataset", prefix, "--variant", "cfair", "--lambda", "-1"});
  CHECK(neg.code != 0);
  CHECK(neg.err.find("lambda") != std::string::npos);
  CHECK(invoke({"train", "--dataset", prefix, "--variant", "nope"}).code == 1);
  CHECK(invoke({}).code != 0);
  CHECK(invoke({"frobnicate"}).code != 0);
  CHECK(invoke({"synth", "--out", prefix, "--counts", "1,2,3"}).code != 0);
}

TEST_CASE("missing data files fail with a message") {
  const auto dir = scratch("missing");
  const auto r = invoke({"stats", "--dataset", "adult", "--data-dir", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error:", 0) == 0);
  CHECK(invoke({"stats", "--dataset", (dir / "nothing").string()}).code == 1);
  CHECK(invoke({"stats", "--dataset", "compas", "--data-dir", dir.string()}).code == 1);
}

TEST_CASE("synth and stats agree on the requested counts") {
  const auto dir = scratch("stats");
  const std::string prefix = (dir / "s").string();
  REQUIRE(invoke({"synth", "--out", prefix, "--counts", "30,10,15,45", "--test-counts", "5,5,5,5"}).code == 0);
  const auto r = invoke({"stats", "--dataset", prefix, "--out", (dir / "stats.json").string()});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(slurp(dir / "stats.json"));
  CHECK(doc["n_train"] == 100);
  CHECK(doc["n_test"] == 20);
  CHECK(doc["train"]["base_rate0"] == 0.25);
  CHECK(doc["train"]["base_rate1"] == 0.75);
  CHECK(doc["test"]["delta_br"] == 0.0);
}

TEST_CASE("train: identical seeds give identical artifacts") {
  const auto dir = scratch("determinism");
  const std::string prefix = (dir / "s").string();
  REQUIRE(invoke({"synth", "--out", prefix, "--counts", "60,40,30,70", "--seed", "3"}).code == 0);
  const auto train_into = [&](const std::string& sub, const std::string& seed) {
    return invoke({"train", "--dataset", prefix, "--variant", "cfair", "--lambda", "1", "--seed",
                   seed, "--epochs", "3", "--batch-size", "32", "--out", (dir / sub).string()});
  };
  const auto a = train_into("a", "5");
  INFO(a.err);
  REQUIRE(a.code == 0);
  REQUIRE(train_into("b", "5").code == 0);
  REQUIRE(train_into("c", "6").code == 0);
  for (const char* f : {"checkpoint.json", "report.json", "history.csv"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  CHECK(slurp(dir / "a" / "checkpoint.json") != slurp(dir / "c" / "checkpoint.json"));

  const auto report = json::parse(slurp(dir / "a" / "report.json"));
  CHECK(report["variant"] == "cfair");
  CHECK(report["steps"] == 3 * ((200 + 31) / 32));
  CHECK(report["test"]["theorem_checks"].is_array());
}
