/* C interface to the Rice-Mele pump simulator.
 *
 * Every fallible call returns an rml_status; on failure a thread-local
 * message is available through rml_last_error() until the next call on the
 * same thread. Handles are opaque and must be released with the matching
 * _free function. Status values double as the CLI exit codes.
 */
#ifndef RICEMELE_H
#define RICEMELE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rml_status {
  RML_OK = 0,
  RML_ERR_INVALID = 1, /* null handle or output pointer */
  RML_ERR_CONFIG = 2,  /* unparseable or out-of-domain configuration */
  RML_ERR_QUALITY = 3  /* simulation ran but failed a quality gate */
} rml_status;

/* Library version, static storage. */
const char* rml_version(void);

/* Message for the most recent failure on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next API call. */
const char* rml_last_error(void);

/* ------------------------------------------------------------------ */
/* Configuration                                                       */

typedef struct rml_config rml_config;

/* Fresh configuration with built-in defaults. Never fails. */
rml_config* rml_config_create(void);

/* Parse an INI-style campaign file / in-memory text. On success *out owns a
 * validated configuration. */
rml_status rml_config_parse_file(const char* path, rml_config** out);
rml_status rml_config_parse_text(const char* text, rml_config** out);

/* Apply one "section.key=value" override (same paths as the sweep axis). */
rml_status rml_config_set(rml_config* cfg, const char* assignment);

/* Re-check cross-field constraints after a series of overrides. */
rml_status rml_config_validate(const rml_config* cfg);

/* Canonical round-trippable rendering; free with rml_string_free. */
rml_status rml_config_serialize(const rml_config* cfg, char** out);

/* Stable 64-bit hash of the canonical rendering. */
rml_status rml_config_hash(const rml_config* cfg, uint64_t* out);

void rml_config_free(rml_config* cfg);
void rml_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Command drivers                                                     */
/*                                                                     */
/* Each driver validates cfg, runs one campaign, and writes its result */
/* files under out_dir (created if absent). A summary goes to stdout,  */
/* progress to stderr. RML_ERR_QUALITY means the outputs were written  */
/* but a quality gate failed.                                          */

rml_status rml_run_pump(const rml_config* cfg, const char* out_dir);
rml_status rml_run_sweep(const rml_config* cfg, const char* out_dir,
                         int threads);
rml_status rml_run_chern(const rml_config* cfg, const char* out_dir);
rml_status rml_run_bands(const rml_config* cfg, const char* out_dir);
rml_status rml_run_gap(const rml_config* cfg, const char* out_dir);
rml_status rml_run_ipr(const rml_config* cfg, const char* out_dir);
rml_status rml_run_pulse(const rml_config* cfg, const char* out_dir);
rml_status rml_run_floquet_check(const rml_config* cfg, const char* out_dir);

/* ------------------------------------------------------------------ */
/* Value-level queries (no files written)                              */

/* Band Chern number of the configured drive cycle. */
rml_status rml_chern_number(const rml_config* cfg, int* out);

/* Polarization drift over one cycle in units of the lattice constant. */
rml_status rml_polarization_drift(const rml_config* cfg, double* out);

/* Minimum instantaneous single-particle gap over the cycle [MHz]. */
rml_status rml_min_gap(const rml_config* cfg, double* out);

/* Observable of disorder realization `index` under the configured run:
 * pumped charge per cycle, or per-cycle center-of-mass shift. */
rml_status rml_realize_observable(const rml_config* cfg, uint64_t index,
                                  double* out);

/* Carrier-averaged coupling between two sites modulated with amplitudes
 * amp_a, amp_b [MHz], conversion factors eta_a, eta_b, carrier mu [MHz]. */
rml_status rml_effective_coupling(double g, double amp_a, double amp_b,
                                  double eta_a, double eta_b, double mu,
                                  double* out);

#ifdef __cplusplus
}
#endif

#endif /* RICEMELE_H */
