#ifndef FFDE_IO_HPP
#define FFDE_IO_HPP

#include <string>

#include "ffde/config.hpp"
#include "ffde/flow.hpp"
#include "ffde/verify.hpp"

namespace ffde {
namespace io {

std::string format_g17(double x);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_dir(const std::string& path);

// Trajectory CSV with the fixed header
// t,norm_L1,norm_Lp,norm_Linf,norm_L1phi,norm_L1pm,norm_Hstar,Q,Qstar
std::string trajectory_csv(const Trajectory& traj);
// Snapshot CSV: x[,y],u
std::string snapshot_csv(const Field& f);
Eigen::VectorXd read_snapshot_csv(const std::string& path, const Grid& grid);

std::string manifest_json(const Trajectory& traj, const ConfigMap& cfg,
                          const std::vector<std::string>& snapshot_files);
// Rebuilds the operator named in the manifest and reloads the snapshots;
// norm rows are recomputed (full-precision round trip keeps them bit-exact).
Trajectory load_trajectory(const std::string& run_dir);
ConfigMap manifest_config(const std::string& run_dir);

std::string report_json(const verify::InequalityReport& rep);
std::string report_csv(const verify::InequalityReport& rep);

// Reads a nonnegative field from a CSV of x[,y],u rows matching the grid.
Field load_custom_field(const std::string& path, GridPtr grid);

}  // namespace io
}  // namespace ffde

#endif
