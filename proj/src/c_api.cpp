#include "fermigas/fermigas.h"

#include <algorithm>
#include <new>
#include <string>

#include "fermigas/config.hpp"
#include "fermigas/runner.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/thomas_fermi.hpp"

struct fg_potential {
  fermigas::Potential value;
};
struct fg_tf_solution {
  fermigas::TFSolution value;
};
struct fg_interaction {
  fermigas::Interaction value;
};
struct fg_run_result {
  fermigas::RunResult value;
};

namespace {

thread_local std::string last_error;

template <class F>
fg_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FG_OK;
  } catch (const fermigas::UnsupportedError& e) {
    last_error = e.what();
    return FG_ERR_UNSUPPORTED;
  } catch (const fermigas::Error& e) {
    last_error = e.what();
    switch (e.kind()) {
      case fermigas::ErrorKind::Config: return FG_ERR_CONFIG;
      case fermigas::ErrorKind::Numerical: return FG_ERR_NUMERIC;
      case fermigas::ErrorKind::Io: return FG_ERR_IO;
    }
    return FG_ERR_INTERNAL;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FG_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return FG_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw fermigas::ConfigError(std::string(what) + " is NULL");
}

fg_status run_config(fermigas::RunConfig cfg, const char* out_dir, int jobs, int seedless, fg_run_result** out) {
  if (out_dir) cfg.output_directory = out_dir;
  cfg.seedless = seedless != 0;
  auto result = fermigas::run(cfg, jobs);
  *out = new fg_run_result{std::move(result)};
  return FG_OK;
}

}  // namespace

extern "C" {

const char* fg_version(void) {
  static const std::string v = fermigas::version_string();
  return v.c_str();
}

const char* fg_last_error(void) { return last_error.c_str(); }

fg_status fg_potential_create(const char* spec_json, fg_potential** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "out");
    *out = new fg_potential{fermigas::Potential(fermigas::parse_potential_spec(spec_json))};
  });
}

void fg_potential_destroy(fg_potential* potential) { delete potential; }

fg_status fg_potential_value(const fg_potential* potential, const double x[3], double* out) {
  return guarded([&] {
    require(potential, "potential");
    require(x, "x");
    require(out, "out");
    *out = potential->value(fermigas::Vec3{x[0], x[1], x[2]});
  });
}

fg_status fg_tf_solve(const fg_potential* potential, fg_tf_solution** out) {
  return guarded([&] {
    require(potential, "potential");
    require(out, "out");
    *out = new fg_tf_solution{fermigas::tf_solve(potential->value)};
  });
}

void fg_tf_destroy(fg_tf_solution* solution) { delete solution; }

fg_status fg_tf_summary_get(const fg_tf_solution* solution, fg_tf_summary* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    const auto& tf = solution->value;
    *out = fg_tf_summary{tf.lambda(), tf.energy(),           tf.kinetic_integral(),        tf.interaction_integral(),
                         tf.mass(),   tf.max_lagrange_residual(), tf.support_radius()};
  });
}

fg_status fg_tf_density(const fg_tf_solution* solution, const double x[3], double* out) {
  return guarded([&] {
    require(solution, "solution");
    require(x, "x");
    require(out, "out");
    *out = solution->value.density(fermigas::Vec3{x[0], x[1], x[2]});
  });
}

fg_status fg_interaction_create(const char* spec_json, fg_interaction** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "out");
    *out = new fg_interaction{fermigas::Interaction(fermigas::parse_interaction_spec(spec_json))};
  });
}

void fg_interaction_destroy(fg_interaction* interaction) { delete interaction; }

fg_status fg_scattering_solve(const fg_interaction* interaction, double r_max, fg_scattering_summary* out) {
  return guarded([&] {
    require(interaction, "interaction");
    require(out, "out");
    const auto& w = interaction->value;
    const double reach = r_max > 0.0 ? r_max : std::max(4.0 * w.range(), 1.0);
    const auto s = fermigas::zero_energy_solve(w, reach);
    *out = fg_scattering_summary{s.scattering_length, s.range, s.fit_residual, s.scattering_energy};
  });
}

fg_status fg_validate_config(const char* config_json) {
  return guarded([&] {
    require(config_json, "config_json");
    (void)fermigas::parse_run_config(config_json);
  });
}

fg_status fg_run(const char* config_json, const char* out_dir, int jobs, int seedless, fg_run_result** out) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out, "out");
    run_config(fermigas::parse_run_config(config_json), out_dir, jobs, seedless, out);
  });
}

fg_status fg_run_command(const char* command, const char* out_dir, int jobs, int seedless, fg_run_result** out) {
  return guarded([&] {
    require(command, "command");
    require(out, "out");
    run_config(fermigas::default_run_config(command), out_dir, jobs, seedless, out);
  });
}

void fg_run_result_destroy(fg_run_result* result) { delete result; }

const char* fg_run_result_summary(const fg_run_result* result) {
  return result ? result->value.summary.c_str() : "";
}

int fg_run_result_failures(const fg_run_result* result) { return result ? result->value.failures : 0; }

size_t fg_run_result_table_count(const fg_run_result* result) { return result ? result->value.tables.size() : 0; }

const char* fg_run_result_table_name(const fg_run_result* result, size_t index) {
  if (!result || index >= result->value.tables.size()) return nullptr;
  return result->value.tables[index].name.c_str();
}

}  // extern "C"
