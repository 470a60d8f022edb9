#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "ffde/experiment.hpp"
#include "ffde/io.hpp"

using namespace ffde;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
  std::string dir = (fs::temp_directory_path() / ("ffde_test_" + tag)).string();
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* solve_cfg_text =
    "m = 0.5\n"
    "[operator]\n"
    "kind = sfl\n"
    "s = 0.5\n"
    "[grid]\n"
    "dim = 1\n"
    "n = 24\n"
    "[initial]\n"
    "kind = separable\n"
    "scale = 1.0\n"
    "[solver]\n"
    "adapt_c = 4e-3\n"
    "[checks]\n"
    "extinction = p:2;alpha:1\n"
    "time_monotonicity = tol:1e-8\n"
    "rayleigh = tol:1e-6\n"
    "energy = tol:0.01\n"
    "pointwise = tol:0.01\n"
    "strong_derivative = tol:0.01\n"
    "kato = trials:20;seed:5\n"
    "stroock_varopoulos = q:1.5,2;trials:20;seed:6\n"
    "smoothing = p:2;kind:lp\n"
    "boundary = p:2\n";

}  // namespace

TEST_CASE("config parsing: sections, comments, overrides") {
  ConfigMap cfg = parse_config_text(
      "# comment\n"
      "m = 0.5\n"
      "[operator]\n"
      "kind = rfl\n"
      "s = 0.75\n"
      "\n"
      "[grid]\n"
      "n = 64\n");
  CHECK(cfg.get("m") == "0.5");
  CHECK(cfg.get("operator.kind") == "rfl");
  CHECK(cfg.get_double("operator.s", 0) == doctest::Approx(0.75));
  CHECK(cfg.get_int("grid.n", 0) == 64);
  CHECK(cfg.get_int("grid.dim", 7) == 7);
  CHECK_THROWS_AS(parse_config_text("[unterminated\n"), Error);
  CHECK_THROWS_AS(parse_config_text("no equals sign\n"), Error);
  CHECK_THROWS_AS(cfg.get_double("operator.kind", 0), Error);
}

TEST_CASE("parameter list helpers") {
  auto xs = parse_double_list("1, 2.5,4");
  REQUIRE(xs.size() == 3);
  CHECK(xs[1] == doctest::Approx(2.5));
  auto params = parse_param_string("p:1,2; kind:lp");
  CHECK(params.at("p") == "1,2");
  CHECK(params.at("kind") == "lp");
  CHECK_THROWS_AS(parse_param_string("novalue"), Error);
}

TEST_CASE("content hash is stable and order-insensitive") {
  ConfigMap a = parse_config_text("x = 1\ny = 2\n");
  ConfigMap b = parse_config_text("y = 2\nx = 1\n");
  CHECK(content_hash(a) == content_hash(b));
  ConfigMap c = parse_config_text("x = 1\ny = 3\n");
  CHECK(content_hash(a) != content_hash(c));
  CHECK(content_hash(a).size() == 16);
}

TEST_CASE("g17 round trip") {
  for (double x : {1.0 / 3.0, 2.0e-13, 123456.789, 5.5511151231257827e-17}) {
    CHECK(std::stod(io::format_g17(x)) == x);
  }
}

TEST_CASE("solve writes a loadable run with byte-identical reruns") {
  std::string out = temp_dir("solve");
  ConfigMap cfg = parse_config_text(solve_cfg_text);
  std::string run_dir;
  REQUIRE(experiment::cmd_solve(cfg, out, &run_dir) == experiment::exit_ok);
  REQUIRE(fs::exists(run_dir + "/manifest.json"));
  REQUIRE(fs::exists(run_dir + "/trajectory.csv"));
  CHECK_FALSE(fs::exists(run_dir + "/.partial"));

  std::string traj_csv = io::read_text_file(run_dir + "/trajectory.csv");
  CHECK(traj_csv.rfind("t,norm_L1,norm_Lp,norm_Linf,norm_L1phi,norm_L1pm,norm_Hstar,Q,Qstar\n",
                       0) == 0);
  std::string manifest = io::read_text_file(run_dir + "/manifest.json");

  // deterministic rerun: byte-identical outputs
  std::string out2 = temp_dir("solve2");
  std::string run_dir2;
  REQUIRE(experiment::cmd_solve(cfg, out2, &run_dir2) == experiment::exit_ok);
  CHECK(io::read_text_file(run_dir2 + "/trajectory.csv") == traj_csv);
  CHECK(io::read_text_file(run_dir2 + "/manifest.json") == manifest);
  CHECK(fs::path(run_dir).filename() == fs::path(run_dir2).filename());

  // loaded trajectory reproduces the stored norm series
  Trajectory traj = io::load_trajectory(run_dir);
  CHECK(io::trajectory_csv(traj) == traj_csv);
  REQUIRE(traj.extinction.has_value());
  CHECK(traj.extinction->t_fit == doctest::Approx(1.0).epsilon(0.02));

  fs::remove_all(out);
  fs::remove_all(out2);
}

TEST_CASE("verify runs the configured checks and writes reports") {
  std::string out = temp_dir("verify");
  ConfigMap cfg = parse_config_text(solve_cfg_text);
  std::string run_dir;
  REQUIRE(experiment::cmd_solve(cfg, out, &run_dir) == experiment::exit_ok);
  REQUIRE(experiment::cmd_verify(ConfigMap{}, run_dir) == experiment::exit_ok);
  CHECK(fs::exists(run_dir + "/reports/rollup.csv"));
  CHECK(fs::exists(run_dir + "/reports/extinction_bounds.json"));
  CHECK(fs::exists(run_dir + "/reports/time_monotonicity.csv"));
  std::string rollup = io::read_text_file(run_dir + "/reports/rollup.csv");
  CHECK(rollup.find("violated") == std::string::npos);
  // verify without a manifest is a file error
  CHECK(experiment::cmd_verify(ConfigMap{}, out + "/nonexistent") == experiment::exit_io);
  fs::remove_all(out);
}

TEST_CASE("operator command emits the summary record") {
  ConfigMap cfg = parse_config_text(
      "[operator]\nkind = rfl\ns = 0.25\n[grid]\nn = 48\n[constants]\nstarts = 8\n");
  std::string json;
  REQUIRE(experiment::cmd_operator(cfg, "", &json) == experiment::exit_ok);
  CHECK(json.find("\"kind\": \"rfl\"") != std::string::npos);
  CHECK(json.find("\"gamma_hat\"") != std::string::npos);
  CHECK(json.find("\"sobolev_S\"") != std::string::npos);
  CHECK(json.find("\"lambda1\"") != std::string::npos);

  // invalid operator parameters surface as usage errors
  ConfigMap bad = parse_config_text("[operator]\nkind = cfl\ns = 0.4\n[grid]\nn = 16\n");
  CHECK(experiment::cmd_operator(bad, "", nullptr) == experiment::exit_usage);
}

TEST_CASE("solver fatality leaves a partial marker and a nonzero exit") {
  std::string out = temp_dir("partial");
  ConfigMap cfg = parse_config_text(
      "m = 0.5\n"
      "[operator]\nkind = rfl\ns = 0.5\n"
      "[grid]\nn = 4\n"
      "[initial]\nkind = eigenfunction\n"
      "[solver]\nnewton_max_iter = 1\nnewton_tol = 1e-30\n");
  std::string run_dir;
  CHECK(experiment::cmd_solve(cfg, out, &run_dir) == experiment::exit_solver);
  CHECK(fs::exists(run_dir + "/.partial"));
  CHECK_FALSE(fs::exists(run_dir + "/manifest.json"));
  fs::remove_all(out);
}

TEST_CASE("unknown checks are rejected before running") {
  ConfigMap cfg = parse_config_text(solve_cfg_text);
  cfg.set("checks.bogus", "p:1");
  std::string out = temp_dir("badcheck");
  CHECK(experiment::cmd_solve(cfg, out, nullptr) == experiment::exit_usage);
  fs::remove_all(out);
}

TEST_CASE("custom csv initial data round trip") {
  auto g = make_grid(1, 5);
  Eigen::VectorXd v(5);
  v << 0.1, 0.5, 1.25, 0.5, 0.1;
  std::string dir = temp_dir("csv");
  io::write_text_file(dir + "/u0.csv", io::snapshot_csv(Field(g, v)));
  Field loaded = io::load_custom_field(dir + "/u0.csv", g);
  CHECK((loaded.values - v).cwiseAbs().maxCoeff() == 0.0);
  // wrong grid size is a file-format error
  auto g2 = make_grid(1, 7);
  CHECK_THROWS_AS(io::load_custom_field(dir + "/u0.csv", g2), Error);
  // corrupted csv
  io::write_text_file(dir + "/bad.csv", "x,u\n0.5,notanumber\n");
  CHECK_THROWS_AS(io::load_custom_field(dir + "/bad.csv", g), Error);
  fs::remove_all(dir);
}

TEST_CASE("FFDE_SEED env var overrides the config seed") {
  ConfigMap cfg = parse_config_text("seed = 7\n[grid]\nn = 4\n");
  setenv("FFDE_SEED", "12345", 1);
  auto in = experiment::prepare_run(cfg);
  CHECK(in.seed == 12345ull);
  unsetenv("FFDE_SEED");
  auto in2 = experiment::prepare_run(cfg);
  CHECK(in2.seed == 7ull);
}

TEST_CASE("sweep validation and aggregation") {
  std::string out = temp_dir("sweep");
  // empty axes
  ConfigMap none = parse_config_text("sweep.mode = cartesian\n");
  CHECK(experiment::cmd_sweep(none, out, false) == experiment::exit_usage);
  // zip with unequal lengths
  ConfigMap zip = parse_config_text(
      "sweep.axes.m = 0.5,0.6\nsweep.axes.p = 1\nsweep.mode = zip\n");
  CHECK(experiment::cmd_sweep(zip, out, false) == experiment::exit_usage);
  // cartesian cap
  ConfigMap cap = parse_config_text(
      "sweep.axes.m = 0.4,0.5\nsweep.axes.p = 1,2\nsweep.cap = 3\n");
  CHECK(experiment::cmd_sweep(cap, out, false) == experiment::exit_usage);

  // a small real sweep
  ConfigMap cfg = parse_config_text(
      "[operator]\nkind = rfl\ns = 0.25\n"
      "[grid]\nn = 16\n"
      "[initial]\nkind = point_mass\n"
      "[solver]\ndt_policy = fixed\ndt_init = 5e-3\nt_max = 10\n"
      "[sweep]\nparallelism = 2\n");
  cfg.set("sweep.axes.m", "0.55,0.7");
  cfg.set("sweep.axes.p", "1,2");
  REQUIRE(experiment::cmd_sweep(cfg, out, false) == experiment::exit_ok);
  std::string table = io::read_text_file(out + "/phase_diagram.csv");
  CHECK(table.rfind("m,s,p,kind,n,verdict,kappa_hat,T_fit", 0) == 0);
  // 4 cells + header
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(table.find("error") == std::string::npos);

  // resume skips completed cells and reproduces the same table
  REQUIRE(experiment::cmd_sweep(cfg, out, true) == experiment::exit_ok);
  CHECK(io::read_text_file(out + "/phase_diagram.csv") == table);

  // fatally failing cells are recorded and flip the exit once over 10%
  ConfigMap broken = cfg;
  broken.set("operator.kind", "cfl");
  broken.set("operator.s", "0.4");  // rejected at construction
  std::string out2 = temp_dir("sweep_fatal");
  CHECK(experiment::cmd_sweep(broken, out2, false) == experiment::exit_solver);
  CHECK(io::read_text_file(out2 + "/phase_diagram.csv").find("error") != std::string::npos);
  fs::remove_all(out2);
  fs::remove_all(out);
}

TEST_CASE("constants command output") {
  std::string json = experiment::constants_json(2, 0.5, 0.5, 0.5);
  CHECK(json.find("\"m_c\": 0.5") != std::string::npos);
  CHECK(json.find("\"p_c\": 1.0") != std::string::npos);
  std::string table = experiment::constants_table(2, 0.5, 0.5, 0.5);
  CHECK(table.find("m_c") != std::string::npos);
  CHECK(table.find("very_fast_diffusion") != std::string::npos);
}

TEST_CASE("report serialization includes the worst record") {
  verify::InequalityReport rep;
  rep.name = "demo";
  rep.verdict = verify::Verdict::holds;
  rep.records.push_back({0.1, 0.2, 3, 1.0, 2.0, 0.5, "a"});
  rep.records.push_back({0.2, 0.3, 4, 3.0, 2.0, 1.5, "b"});
  rep.empirical_constant = 1.5;
  std::string j = io::report_json(rep);
  CHECK(j.find("\"ratio\": 1.5") != std::string::npos);
  CHECK(j.find("\"label\": \"b\"") != std::string::npos);
  std::string c = io::report_csv(rep);
  CHECK(std::count(c.begin(), c.end(), '\n') == 3);
}
