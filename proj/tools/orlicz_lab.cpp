#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "orlicz/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool plots = false;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "JSON experiment config")->required();
  cmd->add_option("--out-dir", flags.out_dir, "Output directory (ORLICZ_LAB_OUT takes precedence)");
  cmd->add_option("--seed", flags.seed, "Override the config seed");
  cmd->add_flag("--plots", flags.plots, "Also write SVG plots");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-space cohomology experiments"};
  app.set_version_flag("--version", orlicz::lab::kVersion);
  app.require_subcommand(1);

  Flags flags;
  std::optional<std::string> expected;
  add_flags(app.add_subcommand("run", "Run the experiment named by the config's kind"), flags);
  for (const auto& kind : orlicz::lab::experiment_kinds()) {
    auto* cmd = app.add_subcommand(kind, "Run a " + kind + " experiment");
    add_flags(cmd, flags);
    cmd->callback([&expected, kind] { expected = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  orlicz::lab::RunOptions options;
  options.out_dir = flags.out_dir;
  if (const char* env = std::getenv("ORLICZ_LAB_OUT"); env != nullptr && *env != '\0') options.out_dir = env;
  options.seed = flags.seed;
  options.plots = flags.plots;
  options.expected_kind = expected;
  return orlicz::lab::run_and_report(flags.config, options);
}
