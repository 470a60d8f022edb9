#include "ffde/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ffde {
namespace io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::file_format, "cannot write file: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::file_format, "cannot read file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  require(!ec, ErrorCode::file_format, "cannot create directory: " + path);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,norm_L1,norm_Lp,norm_Linf,norm_L1phi,norm_L1pm,norm_Hstar,Q,Qstar\n";
  for (const auto& r : traj.norm_series) {
    out << format_g17(r.t) << ',' << format_g17(r.l1) << ',' << format_g17(r.lp) << ','
        << format_g17(r.linf) << ',' << format_g17(r.l1phi) << ',' << format_g17(r.l1pm) << ','
        << format_g17(r.hstar) << ',' << format_g17(r.q) << ',' << format_g17(r.qstar) << '\n';
  }
  return out.str();
}

std::string snapshot_csv(const Field& f) {
  std::ostringstream out;
  out << (f.grid->dim == 1 ? "x,u\n" : "x,y,u\n");
  for (int i = 0; i < f.size(); ++i) {
    out << format_g17(f.grid->nodes[i][0]) << ',';
    if (f.grid->dim == 2) out << format_g17(f.grid->nodes[i][1]) << ',';
    out << format_g17(f.values[i]) << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::vector<double>> read_csv_rows(const std::string& path, size_t min_cols) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::file_format, "cannot read csv: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;  // header row
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (...) {
        fail(ErrorCode::file_format, "bad csv cell '" + cell + "' in " + path);
      }
    }
    require(row.size() >= min_cols, ErrorCode::file_format, "short csv row in " + path);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Eigen::VectorXd read_snapshot_csv(const std::string& path, const Grid& grid) {
  auto rows = read_csv_rows(path, grid.dim == 1 ? 2 : 3);
  require(static_cast<int>(rows.size()) == grid.size(), ErrorCode::file_format,
          "snapshot size does not match grid: " + path);
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = rows[i].back();
  return v;
}

Field load_custom_field(const std::string& path, GridPtr grid) {
  return Field(grid, read_snapshot_csv(path, *grid));
}

std::string manifest_json(const Trajectory& traj, const ConfigMap& cfg,
                          const std::vector<std::string>& snapshot_files) {
  json j;
  j["config_hash"] = content_hash(cfg);
  json jc = json::object();
  for (const auto& [k, v] : cfg.values) jc[k] = v;
  j["config"] = jc;
  const auto& spec = traj.bundle.op->spec;
  j["operator"] = {{"kind", kind_name(spec.kind)},
                   {"s", spec.s},
                   {"gamma", spec.gamma},
                   {"dim", traj.bundle.grid().dim},
                   {"n", traj.bundle.grid().n_per_axis}};
  j["m"] = traj.m;
  j["signed_input"] = traj.signed_input;
  j["u0_linf"] = traj.u0_linf;
  j["extinction_eps"] = traj.extinction_eps;
  j["lp_probes"] = traj.lp_probes;
  if (traj.extinction)
    j["extinction"] = {{"t_hat", traj.extinction->t_hat}, {"t_fit", traj.extinction->t_fit}};
  else
    j["extinction"] = nullptr;
  json snaps = json::array();
  for (int i = 0; i < traj.size(); ++i)
    snaps.push_back({{"t", traj.times[i]}, {"file", snapshot_files[i]}});
  j["snapshots"] = snaps;
  return j.dump(2) + "\n";
}

ConfigMap manifest_config(const std::string& run_dir) {
  json j = json::parse(read_text_file(run_dir + "/manifest.json"));
  ConfigMap cfg;
  for (auto it = j["config"].begin(); it != j["config"].end(); ++it)
    cfg.values[it.key()] = it.value().get<std::string>();
  return cfg;
}

Trajectory load_trajectory(const std::string& run_dir) {
  json j;
  try {
    j = json::parse(read_text_file(run_dir + "/manifest.json"));
  } catch (const json::exception& e) {
    fail(ErrorCode::file_format, std::string("bad manifest: ") + e.what());
  }
  const auto& jop = j.at("operator");
  GridPtr grid = make_grid(jop.at("dim").get<int>(), jop.at("n").get<int>());
  OperatorKind kind = kind_from_name(jop.at("kind").get<std::string>());
  OperatorBundle bundle =
      make_bundle(build_operator(grid, kind, jop.at("s").get<double>(), /*allow_2d=*/true));

  Trajectory traj;
  traj.bundle = bundle;
  traj.m = j.at("m").get<double>();
  traj.signed_input = j.value("signed_input", false);
  traj.u0_linf = j.value("u0_linf", 0.0);
  traj.extinction_eps = j.value("extinction_eps", 0.0);
  traj.lp_probes = j.value("lp_probes", std::vector<double>{2.0});
  if (!j.at("extinction").is_null())
    traj.extinction = ExtinctionEstimate{j["extinction"]["t_hat"].get<double>(),
                                         j["extinction"]["t_fit"].get<double>()};
  for (const auto& snap : j.at("snapshots")) {
    double t = snap.at("t").get<double>();
    std::string file = snap.at("file").get<std::string>();
    Field f(grid, read_snapshot_csv(run_dir + "/" + file, *grid));
    traj.times.push_back(t);
    traj.snapshots.push_back(std::move(f));
  }
  require(!traj.times.empty(), ErrorCode::file_format, "manifest lists no snapshots");
  // norm rows are recomputed from the reloaded fields
  for (int i = 0; i < traj.size(); ++i) {
    const Field& u = traj.snapshots[i];
    NormRow row;
    row.t = traj.times[i];
    row.l1 = lp_norm(u, 1.0);
    row.linf = lp_norm(u, infinity);
    row.l1phi = lp_phi_norm(u, 1.0, bundle.spectral->phi1);
    row.l1pm = lp_norm(u, 1.0 + traj.m);
    row.hstar = hstar_norm(u, *bundle.green);
    Field um(u.grid, signed_pow(u.values, traj.m));
    row.h_of_um = h_norm(um, *bundle.op);
    if (row.linf > 0.0) {
      row.q = rayleigh_q(u, *bundle.op, traj.m);
      row.qstar = rayleigh_qstar(u, *bundle.green, traj.m);
    }
    row.lp = lp_norm(u, traj.lp_probes.empty() ? 2.0 : traj.lp_probes.front());
    for (size_t k = 1; k < traj.lp_probes.size(); ++k)
      row.lp_extra.push_back(lp_norm(u, traj.lp_probes[k]));
    traj.norm_series.push_back(std::move(row));
  }
  return traj;
}

std::string report_json(const verify::InequalityReport& rep) {
  json j;
  j["name"] = rep.name;
  j["hypothesis_note"] = rep.hypothesis_note;
  j["verdict"] = verify::verdict_name(rep.verdict);
  j["empirical_constant"] = rep.empirical_constant;
  if (rep.theoretical_constant)
    j["theoretical_constant"] = *rep.theoretical_constant;
  else
    j["theoretical_constant"] = nullptr;
  j["tolerance"] = rep.tolerance;
  j["explicit_constant"] = rep.explicit_constant;
  j["n_records"] = rep.records.size();
  if (const auto* w = rep.worst()) {
    j["worst_record"] = {{"t0", w->t0},   {"t1", w->t1},       {"node", w->node}, {"lhs", w->lhs},
                         {"rhs", w->rhs}, {"ratio", w->ratio}, {"label", w->label}};
  } else {
    j["worst_record"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string report_csv(const verify::InequalityReport& rep) {
  std::ostringstream out;
  out << "t0,t1,node,lhs,rhs,ratio,label\n";
  for (const auto& r : rep.records) {
    out << format_g17(r.t0) << ',' << format_g17(r.t1) << ',' << r.node << ','
        << format_g17(r.lhs) << ',' << format_g17(r.rhs) << ',' << format_g17(r.ratio) << ','
        << r.label << '\n';
  }
  return out.str();
}

}  // namespace io
}  // namespace ffde
