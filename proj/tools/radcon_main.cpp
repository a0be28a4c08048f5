// Command-line front end: run a configured scenario, validate a
// configuration, or execute one of the scripted suites.

#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "radcon/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"radcon: coupled radiative-conductive heat transfer solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* run = app.add_subcommand("run", "solve a scenario and write diagnostics");
  run->add_option("config", config_path, "scenario configuration (JSON)")->required();
  run->add_option("--output", output_dir, "output directory");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "override the configured seed")
      ->each([&](const std::string&) { seed_set = true; });

  std::string check_path;
  auto* check = app.add_subcommand("check", "parse and validate a configuration");
  check->add_option("config", check_path, "scenario configuration (JSON)")->required();

  std::string suite_name;
  int suite_threads = 1;
  std::uint64_t suite_seed = 12345;
  auto* suite = app.add_subcommand("suite", "run a named verification suite");
  suite->add_option("name", suite_name,
                    "one of: estimates, mms, contraction, positivity")
      ->required();
  suite->add_option("--threads", suite_threads, "worker threads")
      ->check(CLI::PositiveNumber);
  suite->add_option("--seed", suite_seed, "battery seed");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::optional<std::string> out =
        output_dir.empty() ? std::nullopt : std::optional<std::string>(output_dir);
    std::optional<std::uint64_t> s =
        seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt;
    return radcon::run_command(config_path, out, threads, s);
  }
  if (check->parsed()) return radcon::check_command(check_path);
  return radcon::suite_command(suite_name, suite_seed, suite_threads);
}
