// Exercises the shared-library binding: status codes, error messages,
// handle lifecycle, and that value-level queries agree with the core.
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "ricemele.h"

namespace {

std::string scratch_dir(const char* leaf) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("version string is present") {
  const char* v = rml_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) > 0);
}

TEST_CASE("null arguments are rejected up front") {
  rml_config* cfg = nullptr;
  CHECK(rml_config_parse_file(nullptr, &cfg) == RML_ERR_INVALID);
  CHECK(rml_config_parse_text("x", nullptr) == RML_ERR_INVALID);
  CHECK(rml_config_set(nullptr, "chain.L=10") == RML_ERR_INVALID);
  CHECK(rml_config_validate(nullptr) == RML_ERR_INVALID);
  CHECK(rml_config_hash(nullptr, nullptr) == RML_ERR_INVALID);
  CHECK(rml_run_pump(nullptr, "/tmp") == RML_ERR_INVALID);
  CHECK(rml_chern_number(nullptr, nullptr) == RML_ERR_INVALID);
  CHECK(rml_effective_coupling(1, 0, 0, 1, 1, 80, nullptr) ==
        RML_ERR_INVALID);
  CHECK(std::strlen(rml_last_error()) > 0);
}

TEST_CASE("parse failure reports the offending line") {
  rml_config* cfg = reinterpret_cast<rml_config*>(0x1);
  rml_status st = rml_config_parse_text("[chain]\nL: 10\n", &cfg);
  CHECK(st == RML_ERR_CONFIG);
  CHECK(cfg == nullptr);
  std::string msg = rml_last_error();
  CHECK(msg.find(":2") != std::string::npos);
}

TEST_CASE("set, validate, serialize, and hash round trip") {
  rml_config* cfg = rml_config_create();
  REQUIRE(cfg != nullptr);
  CHECK(rml_config_set(cfg, "chain.L = 14") == RML_OK);
  CHECK(rml_config_set(cfg, "run.seed=77") == RML_OK);
  CHECK(rml_config_validate(cfg) == RML_OK);
  CHECK(std::strlen(rml_last_error()) == 0);

  char* text = nullptr;
  REQUIRE(rml_config_serialize(cfg, &text) == RML_OK);
  REQUIRE(text != nullptr);

  rml_config* reparsed = nullptr;
  REQUIRE(rml_config_parse_text(text, &reparsed) == RML_OK);
  uint64_t h1 = 0, h2 = 1;
  CHECK(rml_config_hash(cfg, &h1) == RML_OK);
  CHECK(rml_config_hash(reparsed, &h2) == RML_OK);
  CHECK(h1 == h2);

  CHECK(rml_config_set(cfg, "run.seed=78") == RML_OK);
  uint64_t h3 = 0;
  CHECK(rml_config_hash(cfg, &h3) == RML_OK);
  CHECK(h3 != h1);

  rml_string_free(text);
  rml_config_free(reparsed);
  rml_config_free(cfg);
}

TEST_CASE("bad overrides and bad domains come back as config errors") {
  rml_config* cfg = rml_config_create();
  CHECK(rml_config_set(cfg, "chain.bogus=1") == RML_ERR_CONFIG);
  CHECK(std::string(rml_last_error()).find("chain.bogus") !=
        std::string::npos);
  CHECK(rml_config_set(cfg, "no-equals") == RML_ERR_CONFIG);
  CHECK(rml_config_set(cfg, "chain.L=-4") == RML_OK);
  CHECK(rml_config_validate(cfg) == RML_ERR_CONFIG);
  CHECK(std::strlen(rml_last_error()) > 0);
  rml_config_free(cfg);
}

TEST_CASE("band invariant of the default cycle is one") {
  rml_config* cfg = rml_config_create();
  int nu = 0;
  REQUIRE(rml_chern_number(cfg, &nu) == RML_OK);
  CHECK(nu == 1);
  double drift = 0.0;
  REQUIRE(rml_polarization_drift(cfg, &drift) == RML_OK);
  CHECK(drift == doctest::Approx(1.0).epsilon(1e-6));
  rml_config_free(cfg);
}

TEST_CASE("minimum gap of the default ring hits the band edge") {
  rml_config* cfg = rml_config_create();
  double gap = 0.0;
  REQUIRE(rml_min_gap(cfg, &gap) == RML_OK);
  CHECK(gap == doctest::Approx(4.0).epsilon(1e-9));
  rml_config_free(cfg);
}

TEST_CASE("effective coupling matches the zero-argument limit") {
  double out = 0.0;
  REQUIRE(rml_effective_coupling(7.2, 30.0, 30.0, 1.0, 1.0, 80.0, &out) ==
          RML_OK);
  CHECK(out == doctest::Approx(7.2));
  CHECK(rml_effective_coupling(7.2, 30.0, 30.0, 1.0, 1.0, 0.0, &out) ==
        RML_ERR_CONFIG);
}

TEST_CASE("realizations are deterministic in (config, index)") {
  rml_config* cfg = rml_config_create();
  REQUIRE(rml_config_set(cfg, "chain.L=10") == RML_OK);
  REQUIRE(rml_config_set(cfg, "trajectory.period=2") == RML_OK);
  REQUIRE(rml_config_set(cfg, "disorder.kind=onsite") == RML_OK);
  REQUIRE(rml_config_set(cfg, "disorder.strength=4") == RML_OK);
  REQUIRE(rml_config_set(cfg, "stepper.steps_per_period=64") == RML_OK);
  double a = 0.0, b = 0.0, c = 0.0;
  REQUIRE(rml_realize_observable(cfg, 3, &a) == RML_OK);
  REQUIRE(rml_realize_observable(cfg, 3, &b) == RML_OK);
  REQUIRE(rml_realize_observable(cfg, 4, &c) == RML_OK);
  CHECK(a == b);
  CHECK(a != c);
  rml_config_free(cfg);
}

TEST_CASE("drivers write stamped outputs") {
  rml_config* cfg = rml_config_create();
  std::string dir = scratch_dir("rml_capi_gap");
  REQUIRE(rml_run_gap(cfg, dir.c_str()) == RML_OK);
  std::ifstream in(dir + "/gap.csv");
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# config ", 0) == 0);
  rml_config_free(cfg);
}
