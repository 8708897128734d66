#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "szo_cli/commands.hpp"
#include "szo_cli/config.hpp"
#include "szo_cli/verify.hpp"

using namespace szo;
using namespace szo::cli;
using szo::test::kind_of;
namespace fs = std::filesystem;

namespace {

const fs::path config_dir{SZO_CONFIG_DIR};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("szo_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig small(const std::string& config, const fs::path& out, std::size_t trials, std::int64_t iters) {
  Overrides o;
  o.out = out.string();
  o.trials = trials;
  o.iters = iters;
  o.workers = 1;
  return resolve(load_config(config_dir / (config + ".json")), o);
}

const char* minimal_config = R"({
  "case": "tiny",
  "objective": {"kind": "matyas"},
  "methods": [{"method": "hlf_szo", "eta": 0.007, "r": 0.01, "alpha": 0.9, "beta": 1.0}],
  "T": 50, "n_trials": 2, "x0": [-5, -5]
})";

}  // namespace

TEST_CASE("every shipped config parses and round-trips") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    CAPTURE(entry.path().string());
    const RunConfig cfg = load_config(entry.path());
    CHECK(cfg.case_label == entry.path().stem().string());
    const RunConfig back = parse_config_text(serialize_config(cfg));
    CHECK(back == cfg);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(serialize_config(back) == serialize_config(cfg));
  }
  CHECK(count >= 9);
}

TEST_CASE("case 1.1a step sizes") {
  const RunConfig cfg = load_config(config_dir / "case_1_1a.json");
  REQUIRE(cfg.spec.methods.size() == 4);
  const double etas[] = {5e-4, 0.3, 5e-5, 0.05};
  for (std::size_t i = 0; i < 4; ++i) CHECK(cfg.spec.methods[i].hp.eta == etas[i]);
}

TEST_CASE("case 2.2b step sizes") {
  const RunConfig cfg = load_config(config_dir / "case_2_2b.json");
  REQUIRE(cfg.spec.methods.size() == 3);
  CHECK(cfg.spec.methods[0].method == Method::hlf_szo);
  CHECK(cfg.spec.methods[0].hp.eta == 7e-3);
  CHECK(cfg.spec.methods[1].method == Method::hf_szo);
  CHECK(cfg.spec.methods[1].hp.eta == 2e-2);
  CHECK(cfg.spec.methods[2].method == Method::two_point_sym);
  CHECK(cfg.spec.methods[2].hp.eta == 0.5);
}

TEST_CASE("invalid configs name the offending key") {
  std::string text = minimal_config;
  const std::string bad_alpha = std::string(text).replace(text.find("\"alpha\": 0.9"), 12, "\"alpha\": 1.5");
  CHECK(kind_of([&] { parse_config_text(bad_alpha); }) == ErrorKind::config);
  CHECK(error_message([&] { parse_config_text(bad_alpha); }).find("alpha") != std::string::npos);

  const std::string unknown = std::string(text).replace(text.find("\"T\""), 3, "\"momenta\": 1, \"T\"");
  CHECK(error_message([&] { parse_config_text(unknown); }).find("momenta") != std::string::npos);

  const std::string no_methods = std::string(text).replace(text.find("\"methods\""), 9, "\"unused\"");
  CHECK(kind_of([&] { parse_config_text(no_methods); }) == ErrorKind::config);

  nlohmann::json doc = nlohmann::json::parse(text);
  doc["methods"] = nlohmann::json::array();
  CHECK(kind_of([&] { parse_config(doc); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config_text("{not json"); }) == ErrorKind::config);
  CHECK(kind_of([] { load_config("/nonexistent/szo.json"); }) == ErrorKind::io);
}

TEST_CASE("hash ignores output location and workers") {
  RunConfig a = parse_config_text(minimal_config);
  RunConfig b = a;
  b.out_dir = "/elsewhere";
  b.workers = 7;
  CHECK(config_hash(a) == config_hash(b));
  b.spec.base_seed = 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("resolve applies overrides") {
  Overrides o;
  o.seed = 99;
  o.trials = 3;
  o.iters = 10;
  const RunConfig cfg = resolve(parse_config_text(minimal_config), o);
  CHECK(cfg.spec.base_seed == 99);
  CHECK(cfg.spec.n_trials == 3);
  CHECK(cfg.spec.T == 10);
  CHECK(cfg.out_dir == "runs/tiny");
  CHECK(cfg.spec.workers >= 1);
}

TEST_CASE("run writes outputs and reruns are byte-identical") {
  const fs::path out1 = scratch("run1");
  const fs::path out2 = scratch("run2");
  std::ostringstream log;
  cmd_run(small("case_2_2b", out1, 3, 200), log);
  RunConfig second = small("case_2_2b", out2, 3, 200);
  second.spec.workers = 2;
  cmd_run(second, log);
  for (const char* name : {"traces.csv", "aggregate.csv"}) {
    CHECK(fs::exists(out1 / name));
    CHECK(read_file(out1 / name) == read_file(out2 / name));
  }
  const std::string agg = read_file(out1 / "aggregate.csv");
  CHECK(agg.find("\nhlf,") != std::string::npos);
  CHECK(agg.find("\nhf,") != std::string::npos);
  CHECK(agg.find("\ntwo_point,") != std::string::npos);
  const auto meta = nlohmann::json::parse(read_file(out1 / "metadata.json"));
  CHECK(meta["T"] == 200);
  CHECK(meta["n_trials"] == 3);
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("failed run removes partial output") {
  const fs::path out = scratch("partial");
  fs::create_directories(out / "metadata.json");
  std::ostringstream log;
  CHECK_THROWS_AS(cmd_run(small("case_2_2b", out, 2, 20), log), Error);
  CHECK_FALSE(fs::exists(out / "traces.csv"));
  CHECK_FALSE(fs::exists(out / "aggregate.csv"));
  fs::remove_all(out);

  const fs::path fresh = scratch("fresh") / "nested";
  RunConfig cfg = small("case_2_2b", fresh, 2, 20);
  cfg.spec.methods.clear();
  CHECK_THROWS_AS(cmd_run(cfg, log), Error);
  CHECK_FALSE(fs::exists(fresh));
}

TEST_CASE("singleton beta sweep matches a plain run") {
  const fs::path run_dir = scratch("sweep_run");
  const fs::path sweep_dir = scratch("sweep");
  std::ostringstream log;
  std::ostringstream warn;
  RunConfig cfg = small("case_1_1b", run_dir, 3, 300);
  cmd_run(cfg, log);
  cfg.out_dir = sweep_dir.string();
  cmd_sweep_beta(cfg, {1.0}, log, warn);
  CHECK(warn.str().empty());
  CHECK(read_file(sweep_dir / "aggregate_beta_1.csv") == read_file(run_dir / "aggregate.csv"));
  const std::string summary = read_file(sweep_dir / "summary.csv");
  CHECK(summary.rfind("beta,method,final_iter,final_mean_gap,final_std_gap,n_alive,diverged_trials\n1,hlf,300,", 0) ==
        0);
  fs::remove_all(run_dir);
  fs::remove_all(sweep_dir);
}

TEST_CASE("beta outside (0, 2) warns and still runs") {
  const fs::path out = scratch("sweep_warn");
  std::ostringstream log;
  std::ostringstream warn;
  cmd_sweep_beta(small("case_1_1b", out, 2, 50), {0.6, 2.5}, log, warn);
  CHECK(warn.str().find("beta = 2.5") != std::string::npos);
  CHECK(fs::exists(out / "aggregate_beta_0.6.csv"));
  CHECK(fs::exists(out / "aggregate_beta_2.5.csv"));
  fs::remove_all(out);
}

TEST_CASE("theorem command output") {
  TheoremInputs in;
  in.d = 2.0;
  in.T = 1000.0;
  std::ostringstream text;
  cmd_theorem(in, false, text);
  CHECK(text.str().find("eta_max   0.002\n") != std::string::npos);
  CHECK(text.str().find("r window  [0.016, 0.1]") != std::string::npos);
  std::ostringstream js;
  cmd_theorem(in, true, js);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["eta_max"].get<double>() == doctest::Approx(0.002));
}

TEST_CASE("verify suites") {
  CHECK(verify_suites().size() == 6);
  CHECK(run_verify("reductions").passed());
  CHECK(run_verify("theorem_arith").passed());
  CHECK(kind_of([] { run_verify("nope"); }) == ErrorKind::invalid_argument);
}

TEST_CASE("dataset export round-trips through a config") {
  const fs::path dir = scratch("export");
  fs::create_directories(dir);
  std::ostringstream log;
  const RunConfig cfg = load_config(config_dir / "case_1_2a.json");
  cmd_dataset_export(cfg, dir / "ridge.txt", log);
  nlohmann::json doc = to_json(cfg);
  doc["objective"]["dataset_file"] = (dir / "ridge.txt").string();
  const RunConfig imported = parse_config(doc);
  const Problem a = build_problem(cfg.spec.objective);
  const Problem b = build_problem(imported.spec.objective);
  CHECK(a.certificate.f_star == b.certificate.f_star);
  fs::remove_all(dir);
}

TEST_CASE("es-sim writes a trajectory") {
  EsSimOptions o;
  o.horizon = 0.01;
  std::ostringstream csv;
  cmd_es_sim(o, csv);
  CHECK(csv.str().rfind("method,trial,t,f_value,gap,queries\n", 0) == 0);
}
