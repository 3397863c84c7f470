#include "supgmg/supgmg.h"

#include <exception>
#include <fstream>
#include <iostream>
#include <new>
#include <string>

#include "supgmg/bench.hpp"
#include "supgmg/error.hpp"

struct supgmg_config {
  supgmg::RunConfig cfg;
};

struct supgmg_report {
  supgmg::RunReport report;
};

namespace {

thread_local std::string g_last_error;

supgmg_status to_status(supgmg::ErrorCode c) {
  switch (c) {
    case supgmg::ErrorCode::kInvalidArgument: return SUPGMG_ERR_INVALID_ARGUMENT;
    case supgmg::ErrorCode::kDegenerateCell: return SUPGMG_ERR_DEGENERATE_CELL;
    case supgmg::ErrorCode::kSingularMatrix: return SUPGMG_ERR_SINGULAR_MATRIX;
    case supgmg::ErrorCode::kNoAnalyticSolution: return SUPGMG_ERR_NO_ANALYTIC_SOLUTION;
    case supgmg::ErrorCode::kIo: return SUPGMG_ERR_IO;
  }
  return SUPGMG_ERR_INTERNAL;
}

template <class F>
supgmg_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SUPGMG_OK;
  } catch (const supgmg::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return SUPGMG_ERR_INTERNAL;
}

supgmg_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return SUPGMG_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* supgmg_version(void) { return "0.1.0"; }

const char* supgmg_last_error(void) { return g_last_error.c_str(); }

supgmg_status supgmg_config_create(supgmg_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new supgmg_config(); });
}

void supgmg_config_destroy(supgmg_config* cfg) { delete cfg; }

supgmg_status supgmg_config_set(supgmg_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_argument("cfg, key or value");
  return guarded([&] { supgmg::set_config_value(cfg->cfg, key, value); });
}

supgmg_status supgmg_config_load_file(supgmg_config* cfg, const char* path) {
  if (!cfg || !path) return null_argument("cfg or path");
  return guarded([&] { supgmg::load_config_file(cfg->cfg, path); });
}

const char* supgmg_config_output_path(const supgmg_config* cfg) {
  return cfg ? cfg->cfg.out.c_str() : "";
}

supgmg_status supgmg_run(const supgmg_config* cfg, supgmg_report** out) {
  if (!cfg || !out) return null_argument("cfg or out");
  *out = nullptr;
  return guarded([&] {
    auto r = new supgmg_report();
    try {
      r->report = supgmg::run_benchmark(cfg->cfg);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void supgmg_report_destroy(supgmg_report* report) { delete report; }

size_t supgmg_report_num_cells(const supgmg_report* report) {
  return report ? report->report.cells.size() : 0;
}

supgmg_status supgmg_report_cell(const supgmg_report* report, size_t index,
                                 supgmg_cell* out) {
  if (!report || !out) return null_argument("report or out");
  if (index >= report->report.cells.size()) {
    g_last_error = "cell index out of range";
    return SUPGMG_ERR_INVALID_ARGUMENT;
  }
  const supgmg::CellResult& c = report->report.cells[index];
  *out = supgmg_cell{c.eps,           c.n,
                     c.dofs,          c.levels,
                     c.iterations,    c.converged ? 1 : 0,
                     c.tolerance,     c.setup_seconds,
                     c.solve_seconds, c.max_error,
                     c.energy_error,  c.sd_error};
  return SUPGMG_OK;
}

const char* supgmg_report_cell_failure(const supgmg_report* report, size_t index) {
  if (!report || index >= report->report.cells.size()) return "";
  return report->report.cells[index].failure.c_str();
}

int supgmg_report_all_converged(const supgmg_report* report) {
  return report && report->report.all_converged() ? 1 : 0;
}

supgmg_status supgmg_report_write_csv(const supgmg_report* report, const char* path) {
  if (!report || !path) return null_argument("report or path");
  return guarded([&] {
    if (std::string(path) == "-") supgmg::emit_csv(report->report, std::cout);
    else supgmg::emit_csv(report->report, std::string(path));
  });
}

supgmg_status supgmg_report_write_residual_csv(const supgmg_report* report,
                                               const char* path) {
  if (!report || !path) return null_argument("report or path");
  return guarded([&] {
    std::ofstream f(path);
    if (!f) supgmg::fail(supgmg::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    supgmg::emit_residual_csv(report->report, f);
  });
}

supgmg_status supgmg_report_write_json(const supgmg_report* report, const char* path) {
  if (!report || !path) return null_argument("report or path");
  return guarded([&] {
    std::ofstream f(path);
    if (!f) supgmg::fail(supgmg::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    f << supgmg::report_json(report->report) << '\n';
    if (!f) supgmg::fail(supgmg::ErrorCode::kIo, std::string("failed writing '") + path + "'");
  });
}

}  // extern "C"
