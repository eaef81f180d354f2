/* Compiled as plain C to prove the public header needs no C++ compiler.
 * Exercises the handle lifecycle and a value query end to end. */
#include <stdio.h>
#include <stdint.h>
#include <string.h>

#include "ricemele.h"

static int failures = 0;

static void expect(int ok, const char* what) {
  if (!ok) {
    fprintf(stderr, "c_compat: FAILED %s (%s)\n", what, rml_last_error());
    ++failures;
  }
}

int main(void) {
  expect(rml_version() != NULL && strlen(rml_version()) > 0, "version");

  rml_config* cfg = rml_config_create();
  expect(cfg != NULL, "create");
  expect(rml_config_set(cfg, "chain.L=12") == RML_OK, "set L");
  expect(rml_config_set(cfg, "chain.oops=1") == RML_ERR_CONFIG, "bad key");
  expect(rml_config_validate(cfg) == RML_OK, "validate");

  uint64_t hash = 0;
  expect(rml_config_hash(cfg, &hash) == RML_OK && hash != 0, "hash");

  char* text = NULL;
  expect(rml_config_serialize(cfg, &text) == RML_OK && text != NULL,
         "serialize");
  rml_config* back = NULL;
  expect(rml_config_parse_text(text, &back) == RML_OK, "reparse");
  uint64_t hash2 = 0;
  expect(rml_config_hash(back, &hash2) == RML_OK && hash2 == hash,
         "hash round trip");

  double g_eff = 0.0;
  expect(rml_effective_coupling(7.2, 10.0, 10.0, 1.0, 1.0, 80.0, &g_eff) ==
                 RML_OK &&
             g_eff > 7.19 && g_eff < 7.21,
         "effective coupling");

  int nu = 0;
  expect(rml_chern_number(cfg, &nu) == RML_OK && nu == 1, "chern");

  rml_string_free(text);
  rml_config_free(back);
  rml_config_free(cfg);

  if (failures == 0) printf("c_compat: all checks passed\n");
  return failures;
}
