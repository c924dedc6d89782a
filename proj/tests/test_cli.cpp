#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mplv/bmc.hpp"
#include "mplv/cli.hpp"
#include "mplv/model_io.hpp"

using namespace mplv;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempModel {
  fs::path path;
  explicit TempModel(const std::string& name, const std::string& text) {
    path = fs::temp_directory_path() / ("mplv_cli_" + name + ".json");
    std::ofstream(path) << text;
  }
  ~TempModel() { fs::remove(path); }
  std::string str() const { return path.string(); }
};

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("verify exit codes") {
  const TempModel rail("railway", R"j({"matrix":[[2,5],[3,3]],"spec":"F G (t1 <= 5)"})j");
  auto r = run({"verify", "-m", rail.str(), "--spec", "F (t1 <= 5)"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "verdict: holds"));

  r = run({"verify", "-m", rail.str(), "--spec", "F (t2 <= 2)"});
  CHECK(r.code == 1);
  CHECK(has(r.out, "reason: direct: contradiction"));

  r = run({"verify", "-m", rail.str()});
  CHECK(r.code == 0);
  CHECK(has(r.out, "refinements: 1"));

  r = run({"verify", "-m", rail.str(), "--explain"});
  CHECK(has(r.out, "k=2: spurious s1 (s0 s1)^w, pivot s1 split into {s1a, s1b}"));
  CHECK(has(r.out, "D3: x1 - x2 = 2"));

  r = run({"verify", "-m", rail.str(), "--spec", "G (t1 <= 4)", "--explain"});
  CHECK(r.code == 1);
  CHECK(has(r.out, "counterexample:"));
  CHECK(has(r.out, "trajectory violates the formula: yes"));

  const TempModel red("reducible", R"j({"matrix":[[1,null],[null,1]]})j");
  r = run({"verify", "-m", red.str(), "--spec", "G (t1 <= 1)"});
  CHECK(r.code == 0);
}

TEST_CASE("json verdicts agree with the library") {
  const TempModel rail("railway_json", R"j({"matrix":[[2,5],[3,3]]})j");
  const Model m = load_model(rail.str());
  for (const std::string spec : {"F (t1 <= 5)", "F G (t1 <= 5)", "F (t2 <= 2)", "(t1>=2) U (t2>=3)", "F G (t1>=5)",
                                 "G (t1 <= 4)", "G F (t2 > 3)", "X (t1 < 3)"}) {
    const auto r = run({"verify", "-m", rail.str(), "--spec", spec, "--json"});
    const auto j = nlohmann::json::parse(r.out);
    const Verdict v = verify(m.matrix, std::nullopt, ltl::parse(spec));
    CHECK(j["verdict"] == to_string(v.outcome));
    CHECK(j["reason"] == v.reason);
    CHECK(j["refinements"] == v.refinements.size());
    CHECK(r.code == (v.outcome == Outcome::Holds ? 0 : v.outcome == Outcome::Violated ? 1 : 2));
    if (v.trace) CHECK(j["trajectory"].size() == v.trace->points.size());
  }
}

TEST_CASE("other subcommands") {
  const TempModel rail("railway_other", R"j({"matrix":[[2,5],[3,3]]})j");
  auto r = run({"ct", "-m", rail.str()});
  CHECK(r.code == 0);
  CHECK(r.out == "λ=4, k0=2, c=2, CT=4\n");

  r = run({"abstract", "-m", rail.str(), "--spec", "F G (t1 <= 5)"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "p1 = (1,2,3,1)"));
  CHECK(has(r.out, "p2 = (1,2,0,1)"));

  r = run({"abstract", "-m", rail.str(), "--spec", "F G (t1 <= 5)", "--json"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["states"].size() == 3);

  r = run({"direct", "-m", rail.str(), "--spec", "(t1>=2) U (t2>=3)"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "direct: tautology"));
  r = run({"direct", "-m", rail.str(), "--spec", "F G (t1>=5)"});
  CHECK(r.code == 1);
  CHECK(has(r.out, "direct: eigenvalue"));
  r = run({"direct", "-m", rail.str(), "--spec", "F G (t1<=5)"});
  CHECK(r.code == 2);
  CHECK(has(r.out, "residual:"));

  r = run({"random", "-n", "4", "--seed", "9"});
  CHECK(r.code == 0);
  CHECK(parse_model(r.out).matrix == random_mpl(4, RandomConfig{}, 9));
  CHECK(run({"random", "-n", "4", "--seed", "9"}).out == r.out);
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({"verify"}).code == 3);
  CHECK(run({"verify", "-m", "/nonexistent.json", "--spec", "F (t1 <= 5)"}).code == 3);
  const TempModel bad("nonregular", R"j({"matrix":[[null,null],[1,2]]})j");
  auto r = run({"verify", "-m", bad.str(), "--spec", "F (t1 <= 5)"});
  CHECK(r.code == 3);
  CHECK(has(r.err, "row 1"));
  const TempModel rail("railway_err", R"j({"matrix":[[2,5],[3,3]]})j");
  r = run({"verify", "-m", rail.str(), "--spec", "F (t1 <= 5"});
  CHECK(r.code == 3);
  CHECK(has(r.err, "offset"));
  CHECK(run({"verify", "-m", rail.str(), "--spec", "F (t3 <= 5)"}).code == 3);
  CHECK(run({"verify", "-m", rail.str()}).code == 3);  // no spec anywhere
  CHECK(run({"random", "-n", "2", "--finite", "3"}).code == 3);
}

TEST_CASE("bench output") {
  auto r = run({"bench", "abstraction", "--dims", "3,4", "--trials", "2", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "n,trial,seed,phase,micros"));
  r = run({"bench", "abstraction", "--dims", "3", "--trials", "0"});
  CHECK(r.code == 0);
  r = run({"bench", "ct", "--dims", "3", "--trials", "3", "--spec", "F G (t1 <= 10)", "--seed", "2"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "n,trial,seed,ct_empirical,ct_lemma,verdict"));
  const auto csv = fs::temp_directory_path() / "mplv_bench.csv";
  r = run({"bench", "abstraction", "--dims", "3", "--trials", "1", "--csv", csv.string()});
  CHECK(r.code == 0);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "n,trial,seed,phase,micros");
  fs::remove(csv);
}
