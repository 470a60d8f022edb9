#include "ffde.h"

#include <cstring>
#include <string>

#include "ffde/experiment.hpp"
#include "ffde/io.hpp"

using namespace ffde;

namespace {

thread_local std::string g_last_error;

ffde_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_argument: return FFDE_ERR_INVALID_ARGUMENT;
    case ErrorCode::construction: return FFDE_ERR_CONSTRUCTION;
    case ErrorCode::newton_divergence:
    case ErrorCode::profile_not_found:
    case ErrorCode::insufficient_data:
    case ErrorCode::mismatched_trajectories: return FFDE_ERR_SOLVER;
    case ErrorCode::file_format: return FFDE_ERR_IO;
    case ErrorCode::internal: return FFDE_ERR_INTERNAL;
  }
  return FFDE_ERR_INTERNAL;
}

template <typename Fn>
ffde_status guarded(Fn&& fn) {
  try {
    fn();
    return FFDE_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FFDE_ERR_INTERNAL;
  }
}

ffde_status copy_out(const std::string& text, char* buf, size_t len) {
  if (!buf || len == 0) {
    g_last_error = "output buffer is null or empty";
    return FFDE_ERR_INVALID_ARGUMENT;
  }
  if (text.size() + 1 > len) {
    g_last_error = "output buffer too small (" + std::to_string(text.size() + 1) + " bytes needed)";
    return FFDE_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return FFDE_OK;
}

}  // namespace

struct ffde_grid {
  GridPtr grid;
};
struct ffde_operator {
  OperatorBundle bundle;
};
struct ffde_field {
  Field field;
};
struct ffde_trajectory {
  Trajectory traj;
};

extern "C" {

void ffde_last_error(char* buf, size_t len) {
  if (!buf || len == 0) return;
  std::snprintf(buf, len, "%s", g_last_error.c_str());
}

ffde_status ffde_grid_create(int dim, int n_per_axis, ffde_grid** out) {
  return guarded([&] {
    require(out != nullptr, ErrorCode::invalid_argument, "null output pointer");
    *out = new ffde_grid{make_grid(dim, n_per_axis)};
  });
}

void ffde_grid_free(ffde_grid* g) { delete g; }

ffde_status ffde_grid_size(const ffde_grid* g, int* out) {
  return guarded([&] {
    require(g && out, ErrorCode::invalid_argument, "null argument");
    *out = g->grid->size();
  });
}

ffde_status ffde_grid_spacing(const ffde_grid* g, double* out) {
  return guarded([&] {
    require(g && out, ErrorCode::invalid_argument, "null argument");
    *out = g->grid->h;
  });
}

ffde_status ffde_operator_create(const ffde_grid* g, const char* kind, double s, int allow_2d,
                                 ffde_operator** out) {
  return guarded([&] {
    require(g && kind && out, ErrorCode::invalid_argument, "null argument");
    OperatorKind k = kind_from_name(kind);
    *out = new ffde_operator{make_bundle(build_operator(g->grid, k, s, allow_2d != 0))};
  });
}

void ffde_operator_free(ffde_operator* op) { delete op; }

ffde_status ffde_operator_lambda1(const ffde_operator* op, double* out) {
  return guarded([&] {
    require(op && out, ErrorCode::invalid_argument, "null argument");
    *out = op->bundle.spectral->lambda1;
  });
}

ffde_status ffde_operator_gamma(const ffde_operator* op, double* out) {
  return guarded([&] {
    require(op && out, ErrorCode::invalid_argument, "null argument");
    *out = op->bundle.op->spec.gamma;
  });
}

ffde_status ffde_operator_offdiag_nonpositive(const ffde_operator* op, int* out) {
  return guarded([&] {
    require(op && out, ErrorCode::invalid_argument, "null argument");
    *out = op->bundle.op->offdiag_nonpositive ? 1 : 0;
  });
}

ffde_status ffde_operator_phi1(const ffde_operator* op, double* buf, size_t len) {
  return guarded([&] {
    require(op && buf, ErrorCode::invalid_argument, "null argument");
    const auto& phi = op->bundle.spectral->phi1.values;
    require(len >= static_cast<size_t>(phi.size()), ErrorCode::invalid_argument,
            "phi1 buffer too small");
    std::memcpy(buf, phi.data(), sizeof(double) * phi.size());
  });
}

ffde_status ffde_field_create(const ffde_grid* g, const double* values, size_t len,
                              ffde_field** out) {
  return guarded([&] {
    require(g && values && out, ErrorCode::invalid_argument, "null argument");
    require(len == static_cast<size_t>(g->grid->size()), ErrorCode::invalid_argument,
            "field length does not match grid");
    Eigen::VectorXd v(len);
    std::memcpy(v.data(), values, sizeof(double) * len);
    *out = new ffde_field{Field(g->grid, std::move(v))};
  });
}

void ffde_field_free(ffde_field* f) { delete f; }

ffde_status ffde_field_values(const ffde_field* f, double* buf, size_t len) {
  return guarded([&] {
    require(f && buf, ErrorCode::invalid_argument, "null argument");
    require(len >= static_cast<size_t>(f->field.size()), ErrorCode::invalid_argument,
            "values buffer too small");
    std::memcpy(buf, f->field.values.data(), sizeof(double) * f->field.size());
  });
}

ffde_status ffde_field_lp_norm(const ffde_field* f, double p, double* out) {
  return guarded([&] {
    require(f && out, ErrorCode::invalid_argument, "null argument");
    *out = lp_norm(f->field, p);
  });
}

ffde_status ffde_proximal_step(const ffde_operator* op, const ffde_field* u, double m, double dt,
                               ffde_field** out) {
  return guarded([&] {
    require(op && u && out, ErrorCode::invalid_argument, "null argument");
    SolverConfig cfg;
    *out = new ffde_field{proximal_step(*op->bundle.op, u->field, m, dt, cfg)};
  });
}

ffde_status ffde_separable_profile(const ffde_operator* op, double m, ffde_field** out) {
  return guarded([&] {
    require(op && out, ErrorCode::invalid_argument, "null argument");
    *out = new ffde_field{solve_separable_profile(op->bundle, m)};
  });
}

ffde_status ffde_run_flow(const ffde_operator* op, const ffde_field* u0, double m,
                          const char* config_text, double* t_hat, double* t_fit,
                          ffde_trajectory** out) {
  return guarded([&] {
    require(op && u0 && out, ErrorCode::invalid_argument, "null argument");
    ConfigMap cfg = parse_config_text(config_text ? config_text : "");
    SolverConfig sc = experiment::solver_from_config(cfg);
    std::vector<double> probes = parse_double_list(cfg.get("probes.p", "2"));
    Trajectory traj = run_flow(op->bundle, u0->field, m, sc, probes);
    if (t_hat) *t_hat = traj.extinction ? traj.extinction->t_hat : -1.0;
    if (t_fit) *t_fit = traj.extinction ? traj.extinction->t_fit : -1.0;
    *out = new ffde_trajectory{std::move(traj)};
  });
}

void ffde_trajectory_free(ffde_trajectory* t) { delete t; }

ffde_status ffde_trajectory_size(const ffde_trajectory* t, int* out) {
  return guarded([&] {
    require(t && out, ErrorCode::invalid_argument, "null argument");
    *out = t->traj.size();
  });
}

ffde_status ffde_trajectory_time(const ffde_trajectory* t, int idx, double* out) {
  return guarded([&] {
    require(t && out, ErrorCode::invalid_argument, "null argument");
    require(idx >= 0 && idx < t->traj.size(), ErrorCode::invalid_argument,
            "snapshot index out of range");
    *out = t->traj.times[idx];
  });
}

ffde_status ffde_constants_json(int N, double s, double m, double gamma, char* buf, size_t len) {
  std::string text;
  ffde_status st = guarded([&] { text = experiment::constants_json(N, s, m, gamma); });
  if (st != FFDE_OK) return st;
  return copy_out(text, buf, len);
}

int ffde_cmd_operator(const char* config_text, const char* out_dir, char* json_buf, size_t len) {
  try {
    ConfigMap cfg = parse_config_text(config_text ? config_text : "");
    std::string json;
    int rc = experiment::cmd_operator(cfg, out_dir ? out_dir : "", &json);
    if (rc == experiment::exit_ok && json_buf && len > 0)
      if (copy_out(json, json_buf, len) != FFDE_OK) return experiment::exit_io;
    return rc;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return experiment::exit_usage;
  }
}

int ffde_cmd_solve(const char* config_text, const char* out_dir, char* run_dir_buf, size_t len) {
  try {
    ConfigMap cfg = parse_config_text(config_text ? config_text : "");
    require(out_dir != nullptr, ErrorCode::invalid_argument, "null output directory");
    std::string run_dir;
    int rc = experiment::cmd_solve(cfg, out_dir, &run_dir);
    if (run_dir_buf && len > 0)
      std::snprintf(run_dir_buf, len, "%s", run_dir.c_str());
    return rc;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return experiment::exit_usage;
  }
}

int ffde_cmd_verify(const char* config_text, const char* run_dir) {
  try {
    ConfigMap cfg = parse_config_text(config_text ? config_text : "");
    require(run_dir != nullptr, ErrorCode::invalid_argument, "null run directory");
    return experiment::cmd_verify(cfg, run_dir);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return experiment::exit_usage;
  }
}

int ffde_cmd_sweep(const char* config_text, const char* out_dir, int resume) {
  try {
    ConfigMap cfg = parse_config_text(config_text ? config_text : "");
    require(out_dir != nullptr, ErrorCode::invalid_argument, "null output directory");
    return experiment::cmd_sweep(cfg, out_dir, resume != 0);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return experiment::exit_usage;
  }
}

int ffde_cmd_constants(int N, double s, double m, double gamma, int as_json, char* buf,
                       size_t len) {
  try {
    std::string text = as_json ? experiment::constants_json(N, s, m, gamma)
                               : experiment::constants_table(N, s, m, gamma);
    if (buf && len > 0 && copy_out(text, buf, len) != FFDE_OK) return experiment::exit_io;
    return experiment::exit_ok;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return experiment::exit_usage;
  }
}

}  // extern "C"
