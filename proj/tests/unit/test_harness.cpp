#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nashsg/error.hpp"
#include "nashsg/harness.hpp"

using namespace nashsg;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nashsg_harness_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string error_of(const std::string& text) {
  try {
    validate(parse_config(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config("game = cournot6\nsolver = rs-rsg\neta = 0.5\nM = 1000000\nseed = 42\npaths = 2\n");
  validate(c);
  CHECK(c.game == "cournot6");
  CHECK(c.solver == SolverKind::rs_rsg);
  CHECK(c.eta_sweep == std::vector<double>{0.5});
  CHECK(c.budget == 1000000);
  CHECK(c.paths == 2);
  CHECK(c.thresholds == std::vector<double>{1e-2});
  CHECK_FALSE(c.batch);
  CHECK_FALSE(c.gamma);
  const auto echo = config_echo(c);
  CHECK(echo.at("batch") == "auto");
  CHECK(echo.at("stride") == "auto");
  CHECK(echo.at("follower") == "sa");
  CHECK(echo.count("lower.Gamma") == 1);
}

TEST_CASE("default solver follows the game") {
  CHECK(parse_config("game = hier4\neta = 0.5").solver == SolverKind::b_rs_rsg);
  CHECK(parse_config("game = cournot6-smooth").solver == SolverKind::rsg);
  CHECK(parse_config("game = cournot6\neta = 0.5").solver == SolverKind::rs_rsg);
}

TEST_CASE("config errors") {
  CHECK(error_of("game = cournot6\neta = 0.5\nthresholds = 1e-2, 1e-1").find("thresholds") != std::string::npos);
  const auto unknown = error_of("game = cournot9\neta = 0.5");
  CHECK(unknown.find("cournot6") != std::string::npos);
  CHECK(unknown.find("hier4") != std::string::npos);
  CHECK(error_of("game = cournot6\neta = 0.5\n\nbogus = 1").find(":4:") != std::string::npos);
  CHECK(error_of("game = cournot6\neta = 0.5\neta = 0.3").find("twice") != std::string::npos);
  CHECK(error_of("game = cournot6\nnot a pair").find(":2:") != std::string::npos);
  CHECK(error_of("game = cournot6\neta = 0.5\npaths = x").find("paths") != std::string::npos);
  CHECK(error_of("game = hier4\neta = 1.2").find("eta") != std::string::npos);
  CHECK(error_of("game = cournot6\neta = 0.5\nx0 = 13").find("x0") != std::string::npos);
  CHECK(error_of("game = cournot6\nsolver = b-rs-rsg\neta = 0.5").find("solver") != std::string::npos);
  CHECK(error_of("eta = 0.5").find("game") != std::string::npos);
  CHECK(error_of("game = cournot6 # trailing comment\neta = 0.5\n# whole line") == "");
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("first crossing and number formatting") {
  CHECK(first_crossing({3.0, 2.0, 1.0, 0.5}, 1.0) == 2);
  CHECK(first_crossing({3.0, 2.0}, 10.0) == 0);
  CHECK_FALSE(first_crossing({3.0, 2.0}, 1.0));
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(solver_name(SolverKind::b_rs_rsg) == "b-rs-rsg");
}

TEST_CASE("one path, one iteration: one trace row per eta") {
  auto c = parse_config("name = tiny\ngame = cournot6\neta = 0.3, 0.8\npaths = 1\nmax_iters = 1\nbatch = 2\nthresholds = 1e6, 1e-30");
  c.out_dir = scratch("tiny");
  const auto r = run_experiment(c);
  REQUIRE(r.trace.size() == 2);
  CHECK(r.trace[0].k == 1);
  CHECK(r.trace[0].fo == 12);
  CHECK(r.trace[0].zo == 24);
  REQUIRE(r.table.size() == 4);
  CHECK(r.table[0].iters == 0);  // above the initial residual
  CHECK_FALSE(r.table[1].iters);
  const auto trace = slurp(r.trace_file);
  CHECK(trace.rfind("eta,path,k,zo_samples,fo_samples,ll_samples,residual_sq\n", 0) == 0);
  const auto table = slurp(r.table_file);
  CHECK(table.rfind("eta,threshold,iters,zo_samples,fo_samples,ll_samples\n", 0) == 0);
  CHECK(table.find("NA,NA,NA,NA") != std::string::npos);
  CHECK(slurp(r.meta_file).find("\"stride\"") != std::string::npos);
}

TEST_CASE("trace rows increase in k and output ignores the job count") {
  auto c = parse_config("name = det\ngame = hier4\neta = 0.5, 0.9\npaths = 3\nmax_iters = 30\nbatch = 2\nstride = 4\nM = 100000");
  c.out_dir = scratch("det1");
  const auto a = run_experiment(c);
  for (std::size_t j = 1; j < a.trace.size(); ++j) {
    const auto& p = a.trace[j - 1];
    const auto& q = a.trace[j];
    if (p.eta == q.eta && p.path == q.path) CHECK(q.k > p.k);
  }
  // ll column follows the per-iteration formula 2 N S t_k.
  for (const auto& row : a.trace) {
    std::uint64_t ll = 0;
    for (std::size_t k = 0; k < row.k; ++k) ll += 2 * 4 * 2 * lower_iterations(c.lower, k);
    CHECK(row.ll == ll);
    CHECK(row.fo == 4 * 2 * row.k);
  }
  auto c2 = c;
  c2.jobs = 3;
  c2.out_dir = scratch("det2");
  const auto b = run_experiment(c2);
  CHECK(slurp(a.trace_file) == slurp(b.trace_file));
  CHECK(slurp(a.table_file) == slurp(b.table_file));
}

TEST_CASE("rsg experiments run on the smooth game") {
  auto c = parse_config("name = smooth\ngame = cournot6-smooth\npaths = 2\nmax_iters = 200\nbatch = 5\nthresholds = 1, 1e-3");
  c.out_dir = scratch("smooth");
  const auto r = run_experiment(c);
  CHECK(r.failures.empty());
  CHECK(r.mean_curve[0].back() < r.mean_curve[0].front());
}
