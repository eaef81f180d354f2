// Command-line front end. All simulation work happens behind the C API; this
// file only parses flags, forwards overrides, and maps statuses to exit codes.
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ricemele.h"

namespace {

struct Invocation {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common_options(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "campaign configuration file")
      ->required();
  sub->add_option("--set", inv.overrides,
                  "override one key, e.g. --set disorder.strength=10");
  sub->add_option("--out", inv.out_dir, "output directory (default: out)");
  sub->add_option("--seed", inv.seed, "replace the master seed")
      ->each([&inv](const std::string&) { inv.seed_given = true; });
}

int fail(rml_status status) {
  std::fprintf(stderr, "error: %s\n", rml_last_error());
  return static_cast<int>(status);
}

int run(const Invocation& inv) {
  rml_config* cfg = nullptr;
  rml_status status = rml_config_parse_file(inv.config_path.c_str(), &cfg);
  if (status != RML_OK) return fail(status);

  for (const std::string& assignment : inv.overrides) {
    status = rml_config_set(cfg, assignment.c_str());
    if (status != RML_OK) {
      rml_config_free(cfg);
      return fail(status);
    }
  }
  if (inv.seed_given) {
    const std::string assignment = "run.seed=" + std::to_string(inv.seed);
    status = rml_config_set(cfg, assignment.c_str());
    if (status != RML_OK) {
      rml_config_free(cfg);
      return fail(status);
    }
  }
  status = rml_config_validate(cfg);
  if (status != RML_OK) {
    rml_config_free(cfg);
    return fail(status);
  }

  const char* out = inv.out_dir.c_str();
  if (inv.command == "pump") {
    status = rml_run_pump(cfg, out);
  } else if (inv.command == "sweep") {
    status = rml_run_sweep(cfg, out, inv.threads);
  } else if (inv.command == "chern") {
    status = rml_run_chern(cfg, out);
  } else if (inv.command == "bands") {
    status = rml_run_bands(cfg, out);
  } else if (inv.command == "gap") {
    status = rml_run_gap(cfg, out);
  } else if (inv.command == "ipr") {
    status = rml_run_ipr(cfg, out);
  } else if (inv.command == "pulse") {
    status = rml_run_pulse(cfg, out);
  } else {
    status = rml_run_floquet_check(cfg, out);
  }
  rml_config_free(cfg);
  if (status != RML_OK) return fail(status);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rice-Mele pump simulator"};
  app.set_version_flag("--version", std::string(rml_version()));
  app.require_subcommand(1);

  Invocation inv;

  struct Command {
    const char* name;
    const char* help;
    bool threaded;
  };
  const Command commands[] = {
      {"pump", "evolve one excitation and record its transport", false},
      {"sweep", "disorder-strength sweep of the configured observable", true},
      {"chern", "band invariant of the drive cycle", false},
      {"bands", "instantaneous spectrum over one cycle", false},
      {"gap", "minimum instantaneous gap over one cycle", false},
      {"ipr", "eigenstate inverse participation ratios", false},
      {"pulse", "synthesize modulation waveforms for the cycle", false},
      {"floquet-check", "compare lab-frame and target-frame transport", false},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common_options(sub, inv);
    if (c.threaded)
      sub->add_option("--threads", inv.threads, "worker threads (default: 1)")
          ->check(CLI::PositiveNumber);
    sub->callback([&inv, name = std::string(c.name)] { inv.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  return run(inv);
}
