#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "orlicz/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using orlicz::lab::RunOptions;
using orlicz::lab::ValidationError;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::out_of_range("no column " + name);
  }
  std::vector<double> numbers(const std::string& name) const {
    std::vector<double> out;
    const std::size_t c = col(name);
    for (const auto& r : rows) out.push_back(std::stod(r.at(c)));
    return out;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
      cells.back() += '"';
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  Table t;
  std::string line;
  std::getline(in, line);
  t.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "orlicz_experiments_test" / name;
  fs::remove_all(dir);
  return dir;
}

RunOptions options(const fs::path& dir, bool plots = false) {
  RunOptions o;
  o.out_dir = dir;
  o.plots = plots;
  return o;
}

json blowup_config() {
  return json{{"schema_version", 1},
              {"kind", "line-blowup"},
              {"seed", 7},
              {"params",
               {{"phi1", {{"family", "POWER"}, {"params", {2}}}},
                {"phi2", {{"family", "POWER"}, {"params", {2}}}},
                {"a_list", {11, 101, 1001}},
                {"cells_per_unit", 16}}}};
}

void check_provenance(const Table& t, const std::string& hash) {
  CHECK(t.header.at(t.header.size() - 2) == "config_hash");
  CHECK(t.header.back() == "version");
  for (const auto& r : t.rows) {
    CHECK(r.at(t.col("config_hash")) == hash);
    CHECK(r.at(t.col("version")) == orlicz::lab::kVersion);
  }
}

}  // namespace

TEST_CASE("line-blowup report") {
  const auto dir = scratch("blowup");
  const auto report = orlicz::lab::run_experiment(blowup_config(), options(dir, true));
  CHECK(report.kind == "line-blowup");
  CHECK(report.hash == orlicz::lab::config_hash(blowup_config(), 7));
  CHECK(report.hash.size() == 16);
  const auto t = read_csv(dir / "line_blowup.csv");
  REQUIRE(t.rows.size() == 3);
  const auto lb = t.numbers("lower_bound");
  const auto ratio = t.numbers("ratio");
  for (std::size_t i = 0; i < lb.size(); ++i) {
    CHECK(ratio[i] > lb[i]);
    if (i > 0) CHECK(lb[i] > lb[i - 1]);
  }
  check_provenance(t, report.hash);
  CHECK(fs::exists(dir / "line_blowup.svg"));
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["config_hash"] == report.hash);
  CHECK(summary["version"] == orlicz::lab::kVersion);
  CHECK(summary["kind"] == "line-blowup");
}

TEST_CASE("determinism and seed override") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  orlicz::lab::run_experiment(blowup_config(), options(a));
  orlicz::lab::run_experiment(blowup_config(), options(b));
  CHECK(slurp(a / "line_blowup.csv") == slurp(b / "line_blowup.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));

  const json complexes = json::parse(R"({
    "schema_version": 1, "kind": "complex-constants",
    "params": {"complexes": [{"name": "interval", "type": "interval", "lengths": [1, 2], "h": 0.25,
                              "nfunction": {"family": "POWER", "params": [3]}}]}})");
  const auto c = scratch("det_c");
  const auto d = scratch("det_d");
  orlicz::lab::run_experiment(complexes, options(c));
  orlicz::lab::run_experiment(complexes, options(d));
  CHECK(slurp(c / "complex_constants.csv") == slurp(d / "complex_constants.csv"));

  auto reseeded = options(scratch("det_e"));
  reseeded.seed = 99;
  const auto r = orlicz::lab::run_experiment(complexes, reseeded);
  CHECK(r.hash == orlicz::lab::config_hash(complexes, 99));
  CHECK(r.hash != orlicz::lab::config_hash(complexes, 7));
}

TEST_CASE("line-staircase report") {
  json config{{"schema_version", 1},
              {"kind", "line-staircase"},
              {"params", {{"m_list", {2, 4, 8, 16}}, {"omega", {{"type", "indicator"}, {"a", 0}, {"b", 1}}}}}};
  const auto dir = scratch("staircase");
  const auto report = orlicz::lab::run_experiment(config, options(dir, true));
  const auto t = read_csv(dir / "line_staircase.csv");
  const auto norms = t.numbers("lambda_norm");
  const std::vector<double> expected{0.5, 0.25, 0.125, 0.0625};
  REQUIRE(norms.size() == expected.size());
  for (std::size_t i = 0; i < norms.size(); ++i) CHECK(std::abs(norms[i] - expected[i]) < 1e-4);
  check_provenance(t, report.hash);
  CHECK(fs::exists(dir / "line_staircase.svg"));

  config["params"]["omega"] = {{"type", "bump"}};
  config["params"]["m_list"] = {2, 4, 8, 16, 32};
  const auto smooth = orlicz::lab::run_experiment(config, options(scratch("staircase_bump")));
  CHECK(smooth.summary["residual_nonincreasing"] == true);
  CHECK(smooth.summary["final_residual"].get<double>() <= 5e-2);
}

TEST_CASE("nfunc-report, hyperbolic-gram and ball-poincare") {
  json nf{{"schema_version", 1}, {"kind", "nfunc-report"}, {"params", json::object()}};
  const auto dn = scratch("nfunc");
  check_provenance(read_csv(dn / "nfunc_report.csv"), orlicz::lab::run_experiment(nf, options(dn)).hash);

  json hyp{{"schema_version", 1},
           {"kind", "hyperbolic-gram"},
           {"params", {{"J", 3}, {"shift", 2.0}, {"cells_per_unit", 16}, {"z_max", 6}, {"pairing_resolution", {128, 128}}}}};
  const auto dh = scratch("hyperbolic");
  const auto rh = orlicz::lab::run_experiment(hyp, options(dh));
  const auto gram = read_csv(dh / "hyperbolic_gram.csv");
  check_provenance(gram, rh.hash);
  CHECK(rh.summary["rank"] == 3);
  check_provenance(read_csv(dh / "hyperbolic_membership.csv"), rh.hash);

  json ball{{"schema_version", 1},
            {"kind", "ball-poincare"},
            {"params", {{"resolutions", {32, 64}}, {"nfunctions", {{{"family", "POWER"}, {"params", {2}}}}}}}};
  const auto db = scratch("ball");
  const auto rb = orlicz::lab::run_experiment(ball, options(db, true));
  const auto bt = read_csv(db / "ball_poincare.csv");
  check_provenance(bt, rb.hash);
  CHECK(bt.rows.size() == 20);
  const auto res = bt.numbers("residual");
  const auto ratio = bt.numbers("norm_ratio");
  const auto bound = bt.numbers("bound");
  for (std::size_t i = 0; i < res.size(); ++i) {
    CHECK(res[i] <= 5e-2);
    CHECK(ratio[i] <= bound[i]);
  }
}

TEST_CASE("complex-constants with a matrix complex") {
  const json config = json::parse(R"({
    "schema_version": 1, "kind": "complex-constants",
    "params": {"complexes": [{"name": "scaled", "type": "matrix", "level": 1,
                              "complex": {"dims": [2, 2], "boundaries": [[[0.1, 0.0], [0.0, 0.1]]]}}]}})");
  const auto dir = scratch("matrix");
  const auto r = orlicz::lab::run_experiment(config, options(dir));
  const auto t = read_csv(dir / "complex_constants.csv");
  check_provenance(t, r.hash);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.numbers("constant")[0] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("validation errors") {
  const auto dir = scratch("invalid");
  auto empty = blowup_config();
  empty["params"]["a_list"] = json::array();
  CHECK_THROWS_AS(orlicz::lab::run_experiment(empty, options(dir)), ValidationError);
  auto small = blowup_config();
  small["params"]["a_list"] = {0.5};
  CHECK_THROWS_AS(orlicz::lab::run_experiment(small, options(dir)), ValidationError);
  auto unknown = blowup_config();
  unknown["kind"] = "sphere-eversion";
  CHECK_THROWS_AS(orlicz::lab::run_experiment(unknown, options(dir)), ValidationError);
  auto bad_nf = blowup_config();
  bad_nf["params"]["phi1"] = {{"family", "CUBIC"}, {"params", {1}}};
  CHECK_THROWS_AS(orlicz::lab::run_experiment(bad_nf, options(dir)), ValidationError);
  auto bad_version = blowup_config();
  bad_version["schema_version"] = 2;
  CHECK_THROWS_AS(orlicz::lab::run_experiment(bad_version, options(dir)), ValidationError);
  auto mismatch = options(dir);
  mismatch.expected_kind = "line-staircase";
  CHECK_THROWS_AS(orlicz::lab::run_experiment(blowup_config(), mismatch), ValidationError);

  // A regular file where the output directory should be.
  const auto blocker = scratch("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(orlicz::lab::run_experiment(blowup_config(), options(blocker / "out")), ValidationError);
  fs::remove(blocker);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  fs::create_directories(dir);
  const auto write = [&dir](const std::string& name, const json& j) {
    std::ofstream(dir / name) << j.dump();
    return dir / name;
  };
  CHECK(orlicz::lab::run_and_report(write("ok.json", blowup_config()), options(dir / "ok")) == 0);
  auto empty = blowup_config();
  empty["params"]["a_list"] = json::array();
  CHECK(orlicz::lab::run_and_report(write("empty.json", empty), options(dir / "empty")) == 2);
  CHECK(orlicz::lab::run_and_report(dir / "missing.json", options(dir / "missing")) == 2);
  std::ofstream(dir / "garbage.json") << "{not json";
  CHECK(orlicz::lab::run_and_report(dir / "garbage.json", options(dir / "garbage")) == 2);
  CHECK(orlicz::lab::experiment_kinds().size() == 6);
  auto negative = blowup_config();
  negative["seed"] = -1;
  CHECK(orlicz::lab::run_and_report(write("negative.json", negative), options(dir / "negative")) == 2);
}
