// C binding for the simulator core: opaque handles around the C++ objects,
// exceptions translated to status codes, messages parked in a thread-local
// buffer.
#include "ricemele.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/floquet.hpp"
#include "core/runner.hpp"
#include "core/spectral.hpp"
#include "core/topology.hpp"
#include "core/types.hpp"

extern "C" {
struct rml_config {
  rml::ExperimentConfig rep;
};
}  // extern "C"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
rml_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RML_OK;
  } catch (const rml::ConfigError& e) {
    g_last_error = e.what();
    return RML_ERR_CONFIG;
  } catch (const rml::QualityError& e) {
    g_last_error = e.what();
    return RML_ERR_QUALITY;
  } catch (const rml::NumericError& e) {
    g_last_error = e.what();
    return RML_ERR_QUALITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RML_ERR_QUALITY;
  }
}

rml_status invalid(const char* what) {
  g_last_error = what;
  return RML_ERR_INVALID;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* rml_version(void) { return rml::kVersion; }

const char* rml_last_error(void) { return g_last_error.c_str(); }

rml_config* rml_config_create(void) { return new rml_config{}; }

rml_status rml_config_parse_file(const char* path, rml_config** out) {
  if (path == nullptr || out == nullptr)
    return invalid("rml_config_parse_file: null argument");
  *out = nullptr;
  return guarded([&] { *out = new rml_config{rml::parse_config(path)}; });
}

rml_status rml_config_parse_text(const char* text, rml_config** out) {
  if (text == nullptr || out == nullptr)
    return invalid("rml_config_parse_text: null argument");
  *out = nullptr;
  return guarded([&] { *out = new rml_config{rml::parse_config_text(text)}; });
}

rml_status rml_config_set(rml_config* cfg, const char* assignment) {
  if (cfg == nullptr || assignment == nullptr)
    return invalid("rml_config_set: null argument");
  return guarded([&] { rml::apply_override(cfg->rep, assignment); });
}

rml_status rml_config_validate(const rml_config* cfg) {
  if (cfg == nullptr) return invalid("rml_config_validate: null handle");
  return guarded([&] { cfg->rep.validate(); });
}

rml_status rml_config_serialize(const rml_config* cfg, char** out) {
  if (cfg == nullptr || out == nullptr)
    return invalid("rml_config_serialize: null argument");
  *out = nullptr;
  return guarded([&] {
    char* s = copy_string(rml::canonical_serialization(cfg->rep));
    if (s == nullptr) throw std::bad_alloc();
    *out = s;
  });
}

rml_status rml_config_hash(const rml_config* cfg, uint64_t* out) {
  if (cfg == nullptr || out == nullptr)
    return invalid("rml_config_hash: null argument");
  return guarded([&] { *out = rml::config_hash(cfg->rep); });
}

void rml_config_free(rml_config* cfg) { delete cfg; }

void rml_string_free(char* s) { std::free(s); }

rml_status rml_run_pump(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_pump: null argument");
  return guarded([&] { rml::run_pump(cfg->rep, out_dir); });
}

rml_status rml_run_sweep(const rml_config* cfg, const char* out_dir,
                         int threads) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_sweep: null argument");
  return guarded([&] { rml::run_sweep_cmd(cfg->rep, out_dir, threads); });
}

rml_status rml_run_chern(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_chern: null argument");
  return guarded([&] { rml::run_chern_cmd(cfg->rep, out_dir); });
}

rml_status rml_run_bands(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_bands: null argument");
  return guarded([&] { rml::run_bands_cmd(cfg->rep, out_dir); });
}

rml_status rml_run_gap(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_gap: null argument");
  return guarded([&] { rml::run_gap_cmd(cfg->rep, out_dir); });
}

rml_status rml_run_ipr(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_ipr: null argument");
  return guarded([&] { rml::run_ipr_cmd(cfg->rep, out_dir); });
}

rml_status rml_run_pulse(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_pulse: null argument");
  return guarded([&] { rml::run_pulse_cmd(cfg->rep, out_dir); });
}

rml_status rml_run_floquet_check(const rml_config* cfg, const char* out_dir) {
  if (cfg == nullptr || out_dir == nullptr)
    return invalid("rml_run_floquet_check: null argument");
  return guarded([&] { rml::run_floquet_check_cmd(cfg->rep, out_dir); });
}

rml_status rml_chern_number(const rml_config* cfg, int* out) {
  if (cfg == nullptr || out == nullptr)
    return invalid("rml_chern_number: null argument");
  return guarded([&] {
    cfg->rep.validate();
    *out = rml::chern_number(rml::make_trajectory(cfg->rep), cfg->rep.J,
                             cfg->rep.n_k, cfg->rep.n_t);
  });
}

rml_status rml_polarization_drift(const rml_config* cfg, double* out) {
  if (cfg == nullptr || out == nullptr)
    return invalid("rml_polarization_drift: null argument");
  return guarded([&] {
    cfg->rep.validate();
    *out = rml::delta_polarization(rml::make_trajectory(cfg->rep), cfg->rep.J,
                                   cfg->rep.n_t, cfg->rep.n_k);
  });
}

rml_status rml_min_gap(const rml_config* cfg, double* out) {
  if (cfg == nullptr || out == nullptr)
    return invalid("rml_min_gap: null argument");
  return guarded([&] {
    cfg->rep.validate();
    const rml::ChainSpec chain = rml::make_chain(cfg->rep);
    const rml::GapReport report = rml::min_instantaneous_gap(
        chain, rml::make_trajectory(cfg->rep),
        rml::DisorderRealization::clean(chain), cfg->rep.n_time);
    *out = report.minimum;
  });
}

rml_status rml_realize_observable(const rml_config* cfg, uint64_t index,
                                  double* out) {
  if (cfg == nullptr || out == nullptr)
    return invalid("rml_realize_observable: null argument");
  return guarded([&] {
    cfg->rep.validate();
    *out = rml::realize_observable(cfg->rep, index);
  });
}

rml_status rml_effective_coupling(double g, double amp_a, double amp_b,
                                  double eta_a, double eta_b, double mu,
                                  double* out) {
  if (out == nullptr) return invalid("rml_effective_coupling: null output");
  return guarded(
      [&] { *out = rml::effective_coupling(g, amp_a, amp_b, eta_a, eta_b, mu); });
}

}  // extern "C"
