#include "core/runner.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

using namespace rml;

namespace {

const char* kCampaign = R"(# onsite-disorder charge pump, small and fast
[chain]
L = 10
J = 2
boundary = periodic

[trajectory]
kind = ellipse
Delta0 = 10
delta0 = 2.5
period = 0.5

[disorder]
kind = onsite
strength = 4

[stepper]
steps_per_period = 64

[run]
observable = pumped-charge
ensemble = 3
seed = 99

[sweep]
key = disorder.strength
values = 0:4:3
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

std::string expected_stamp(const ExperimentConfig& cfg) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "# config %016llx seed %llu",
                static_cast<unsigned long long>(config_hash(cfg)),
                static_cast<unsigned long long>(cfg.seed));
  return buf;
}

}  // namespace

TEST_CASE("campaign file parses to the documented fields") {
  const ExperimentConfig cfg = parse_config_text(kCampaign, "campaign.ini");
  CHECK(cfg.L == 10);
  CHECK(cfg.J == doctest::Approx(2.0));
  CHECK(cfg.boundary == "periodic");
  CHECK(cfg.disorder == "onsite");
  CHECK(cfg.strength == doctest::Approx(4.0));
  CHECK(cfg.ensemble == 3);
  CHECK(cfg.seed == 99);
  CHECK(cfg.sweep_key == "disorder.strength");
  REQUIRE(cfg.sweep_values.size() == 3);
  CHECK(cfg.sweep_values[0] == doctest::Approx(0.0));
  CHECK(cfg.sweep_values[1] == doctest::Approx(2.0));
  CHECK(cfg.sweep_values[2] == doctest::Approx(4.0));
}

TEST_CASE("serialize -> parse -> serialize is the identity") {
  const ExperimentConfig cfg = parse_config_text(kCampaign);
  const std::string s1 = canonical_serialization(cfg);
  const ExperimentConfig back = parse_config_text(s1, "round-trip");
  CHECK(canonical_serialization(back) == s1);

  ExperimentConfig plain = cfg;
  plain.sweep_key.clear();
  plain.sweep_values.clear();
  const std::string p1 = canonical_serialization(plain);
  CHECK(canonical_serialization(parse_config_text(p1)) == p1);
}

TEST_CASE("config hash is stable and value-sensitive") {
  const ExperimentConfig a = parse_config_text(kCampaign);
  const ExperimentConfig b = parse_config_text(kCampaign);
  CHECK(config_hash(a) == config_hash(b));

  ExperimentConfig c = a;
  c.seed = 100;
  CHECK(config_hash(c) != config_hash(a));
  ExperimentConfig d = a;
  d.strength = 4.0000001;
  CHECK(config_hash(d) != config_hash(a));
}

TEST_CASE("parse errors carry origin and line number") {
  const char* broken =
      "[chain]\n"
      "L = 10\n"
      "J\n";
  try {
    parse_config_text(broken, "myfile.ini");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("myfile.ini:3") != std::string::npos);
    CHECK(msg.find("key = value") != std::string::npos);
  }
}

TEST_CASE("duplicate keys are rejected by name") {
  const char* dup =
      "[chain]\n"
      "L = 10\n"
      "L = 12\n";
  try {
    parse_config_text(dup, "dup.ini");
    FAIL("expected a duplicate-key error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("dup.ini:3") != std::string::npos);
    CHECK(msg.find("chain.L") != std::string::npos);
  }
}

TEST_CASE("negative disorder strength is refused naming the field") {
  std::string text = kCampaign;
  const auto pos = text.find("strength = 4");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "strength = -1");
  try {
    parse_config_text(text, "neg.ini");
    FAIL("expected a validation error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("disorder.strength") !=
          std::string::npos);
  }
}

TEST_CASE("overrides reject unknown paths and malformed assignments") {
  ExperimentConfig cfg = parse_config_text(kCampaign);
  try {
    apply_override(cfg, "chain.bogus=1");
    FAIL("expected an unknown-key error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("chain.bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_override(cfg, "no-equals-sign"), ConfigError);

  apply_override(cfg, "chain.L = 14");
  CHECK(cfg.L == 14);
}

TEST_CASE("sweep output is bit-identical across worker counts") {
  const ExperimentConfig cfg = parse_config_text(kCampaign);
  const SweepResult r1 = run_sweep(cfg, 1);
  const SweepResult r4 = run_sweep(cfg, 4);

  REQUIRE(r1.points.size() == 3);
  REQUIRE(r4.points.size() == 3);
  for (std::size_t i = 0; i < r1.points.size(); ++i) {
    CHECK(r1.points[i].mean == r4.points[i].mean);
    CHECK(r1.points[i].stderr_mean == r4.points[i].stderr_mean);
  }

  const std::string d1 = fresh_dir("rml_sweep_t1");
  const std::string d4 = fresh_dir("rml_sweep_t4");
  emit_sweep(r1, d1);
  emit_sweep(r4, d4);
  for (const char* name : {"summary.csv", "raw.csv", "config_resolved.ini"})
    CHECK(slurp(std::filesystem::path(d1) / name) ==
          slurp(std::filesystem::path(d4) / name));
}

TEST_CASE("re-emission of the same result is byte-identical") {
  const ExperimentConfig cfg = parse_config_text(kCampaign);
  const SweepResult r = run_sweep(cfg, 2);
  const std::string da = fresh_dir("rml_emit_a");
  const std::string db = fresh_dir("rml_emit_b");
  emit_sweep(r, da);
  emit_sweep(r, db);
  for (const char* name :
       {"summary.csv", "raw.csv", "config_resolved.ini", "manifest.json"})
    CHECK(slurp(std::filesystem::path(da) / name) ==
          slurp(std::filesystem::path(db) / name));
}

TEST_CASE("every emitted file opens with the config hash and seed") {
  const ExperimentConfig cfg = parse_config_text(kCampaign);
  const SweepResult r = run_sweep(cfg, 1);
  const std::string dir = fresh_dir("rml_stamp");
  emit_sweep(r, dir);
  const std::string want = expected_stamp(cfg);
  for (const char* name : {"summary.csv", "raw.csv", "config_resolved.ini"})
    CHECK(first_line(slurp(std::filesystem::path(dir) / name)) == want);
  const std::string manifest = slurp(std::filesystem::path(dir) / "manifest.json");
  CHECK(manifest.find(expected_stamp(cfg).substr(9, 16)) != std::string::npos);
  CHECK(manifest.find("\"seed\": 99") != std::string::npos);
}

TEST_CASE("stamped config_resolved.ini still parses to the same config") {
  const ExperimentConfig cfg = parse_config_text(kCampaign);
  const SweepResult r = run_sweep(cfg, 1);
  const std::string dir = fresh_dir("rml_reload");
  emit_sweep(r, dir);
  const ExperimentConfig back =
      parse_config((std::filesystem::path(dir) / "config_resolved.ini").string());
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("single-realization points report zero stderr with a flag") {
  ExperimentConfig cfg = parse_config_text(kCampaign);
  cfg.ensemble = 1;
  const SweepResult r = run_sweep(cfg, 1);
  for (const auto& p : r.points) {
    CHECK(p.n_ok == 1);
    CHECK(p.stderr_mean == 0.0);
    CHECK(p.single_sample);
  }
  const std::string dir = fresh_dir("rml_single");
  emit_sweep(r, dir);
  CHECK(slurp(std::filesystem::path(dir) / "manifest.json")
            .find("\"single_sample\": true") != std::string::npos);
}

TEST_CASE("a result with no points emits a header-only table") {
  SweepResult r;
  r.config = parse_config_text(kCampaign);
  const std::string dir = fresh_dir("rml_empty");
  emit_sweep(r, dir);
  const std::string text = slurp(std::filesystem::path(dir) / "summary.csv");
  std::istringstream in(text);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);
  CHECK(text.find("sweep_value,mean,stderr,n,L,T,seed\n") != std::string::npos);
}

TEST_CASE("realization observable is a pure function of config and index") {
  ExperimentConfig cfg = parse_config_text(kCampaign);
  cfg.sweep_key.clear();
  cfg.sweep_values.clear();
  const double a = realize_observable(cfg, 2);
  const double b = realize_observable(cfg, 2);
  CHECK(a == b);
  const double c = realize_observable(cfg, 3);
  CHECK(a != c);
}

TEST_CASE("quality gate tolerates at most 10% failures") {
  SweepResult r;
  r.total_realizations = 10;
  r.failed_realizations = 1;
  CHECK(sweep_quality_ok(r));
  r.failed_realizations = 2;
  CHECK(!sweep_quality_ok(r));
  r.total_realizations = 0;
  r.failed_realizations = 0;
  CHECK(sweep_quality_ok(r));
}

TEST_CASE("failed realizations are recorded, not fatal, and land in raw.csv") {
  ExperimentConfig cfg = parse_config_text(kCampaign);
  cfg.sweep_key.clear();
  cfg.sweep_values.clear();
  cfg.L = 7;
  cfg.boundary = "open";
  cfg.observable = "cycle-shift";
  cfg.cycles = 3;
  cfg.period = 0.65;
  cfg.disorder = "none";
  cfg.strength = 0.0;
  cfg.ensemble = 3;
  cfg.validate();

  const SweepResult r = run_sweep(cfg, 2);
  CHECK(r.failed_realizations == 3);
  CHECK(!sweep_quality_ok(r));
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].n_ok == 0);
  for (const auto& out : r.points[0].raw) CHECK(!out.error.empty());

  const std::string dir = fresh_dir("rml_failed");
  emit_sweep(r, dir);
  const std::string raw = slurp(std::filesystem::path(dir) / "raw.csv");
  CHECK(raw.find("edge contamination") != std::string::npos);
  CHECK(raw.find(",ok\n") == std::string::npos);
}

TEST_CASE("pump driver writes time-series population rows") {
  ExperimentConfig cfg = parse_config_text(kCampaign);
  cfg.sweep_key.clear();
  cfg.sweep_values.clear();
  cfg.L = 21;
  cfg.boundary = "open";
  cfg.observable = "cycle-shift";
  cfg.cycles = 1;
  cfg.period = 0.65;
  cfg.disorder = "none";
  cfg.strength = 0.0;
  cfg.validate();

  const std::string dir = fresh_dir("rml_pump");
  run_pump(cfg, dir);

  const std::string pops = slurp(std::filesystem::path(dir) / "populations.csv");
  CHECK(first_line(pops) == expected_stamp(cfg));
  CHECK(pops.find("t_us,site,population\n") != std::string::npos);
  CHECK(pops.find("\n0,1,") != std::string::npos);

  const std::string com = slurp(std::filesystem::path(dir) / "com.csv");
  CHECK(com.find("t_us,com\n") != std::string::npos);
  CHECK(com.find("\n0,11\n") != std::string::npos);

  const std::string cycles = slurp(std::filesystem::path(dir) / "cycles.csv");
  CHECK(cycles.find("cycle,shift\n") != std::string::npos);
  CHECK(cycles.find("\n1,1.9") != std::string::npos);
}

TEST_CASE("sweep driver refuses a config with no sweep axis") {
  ExperimentConfig cfg = parse_config_text(kCampaign);
  cfg.sweep_key.clear();
  cfg.sweep_values.clear();
  CHECK_THROWS_AS(run_sweep_cmd(cfg, fresh_dir("rml_noaxis"), 1), ConfigError);
}
