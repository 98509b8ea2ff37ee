#include <iostream>

#include <CLI11.hpp>

#include "radwave/runs.hpp"

namespace rr = radwave::runs;

int main(int argc, char** argv) {
  CLI::App app{"Radial exterior NLW experiments"};
  app.set_version_flag("--version", rr::version());
  app.require_subcommand(1);

  std::string config_path, out;
  rr::RunOptions opts;
  std::int64_t stop_after = 0;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("-c,--config", config_path, "JSON run config");
    if (needs_config) c->required();
    c->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out, "output directory (overrides config)");
    sub->add_flag("-f,--force", opts.force, "overwrite an existing run");
  };

  add_common(app.add_subcommand("selftest", "transform and linear flow checks"),
             false);
  add_common(app.add_subcommand("simulate", "single NLW evolution"), true);
  auto* trunc = app.add_subcommand("truncation", "Fourier truncation experiment");
  add_common(trunc, true);
  trunc->add_flag("--resume", opts.resume, "continue from stored checkpoints");
  trunc->add_option("--stop-after", stop_after,
                    "checkpoint and stop after this many steps per J")
      ->check(CLI::NonNegativeNumber);
  add_common(app.add_subcommand("inequalities", "radial Sobolev and Bernstein"),
             true);
  add_common(app.add_subcommand("decay", "dispersive decay fits"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rr::kSuccess : rr::kConfigError;
  }
  opts.stop_after = stop_after;

  const std::string command = app.get_subcommands().front()->get_name();
  rr::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = rr::load_config(config_path);
    } else {
      cfg = rr::default_config();
      cfg.out = "runs/" + command;
    }
  } catch (const radwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rr::kConfigError;
  }
  if (!out.empty()) cfg.out = out;
  return rr::run_command(command, cfg, opts);
}
