#ifndef FFDE_EXPERIMENT_HPP
#define FFDE_EXPERIMENT_HPP

#include <string>

#include "ffde/config.hpp"
#include "ffde/flow.hpp"

namespace ffde {
namespace experiment {

// Exit codes shared by the command layer, the C API and the CLI.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_construction = 2;
inline constexpr int exit_solver = 3;
inline constexpr int exit_io = 4;
inline constexpr int exit_violated = 5;

struct RunInputs {
  GridPtr grid;
  OperatorBundle bundle;
  Field u0;
  double m = 0.5;
  SolverConfig solver;
  std::vector<double> lp_probes;
  unsigned long long seed = 0;
};

// Validates the config (operator kind, check names, solver fields) and
// builds everything needed for a run. FFDE_SEED overrides the config seed.
RunInputs prepare_run(const ConfigMap& cfg);
SolverConfig solver_from_config(const ConfigMap& cfg);

int cmd_operator(const ConfigMap& cfg, const std::string& out_dir, std::string* json_out = nullptr);
int cmd_solve(const ConfigMap& cfg, const std::string& out_dir, std::string* run_dir_out = nullptr);
int cmd_verify(const ConfigMap& cfg, const std::string& run_dir);
int cmd_sweep(const ConfigMap& cfg, const std::string& out_dir, bool resume);

std::string constants_json(int N, double s, double m, double gamma);
std::string constants_table(int N, double s, double m, double gamma);

}  // namespace experiment
}  // namespace ffde

#endif
