#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using quartet::cli::RunConfig;

int run(int argc, char** argv) {
  CLI::App app{"Pulse-ODMR simulator for duplex spin-3/2 quantum sensing"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path, recipe_name, out, engine, mode, readout;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", out, "CSV output path (default: stdout)");
  app.add_option("--engine", engine, "block|numeric");
  app.add_option("--mode", mode, "simplex+|simplex-|duplex");
  app.add_option("--readout", readout, "x|y|commony");
  app.add_option("--recipe", recipe_name, "Figure recipe; without a subcommand prints its config");

  for (std::string_view name : quartet::cli::command_names())
    app.add_subcommand(std::string(name));

  CLI11_PARSE(app, argc, argv);

  const auto chosen = app.get_subcommands();
  const std::string command = chosen.empty() ? "" : chosen.front()->get_name();

  RunConfig config;
  if (!recipe_name.empty()) {
    const auto& recipe = quartet::cli::find_recipe(recipe_name);
    if (!command.empty() && command != recipe.command)
      throw quartet::cli::ConfigError("recipe " + recipe.name + " belongs to '" + recipe.command +
                                      "', not '" + command + "'");
    config = quartet::cli::parse_config(recipe.config);
    if (command.empty()) {
      std::cout << "# " << recipe.name << ": " << recipe.description << "\n# run: quartet-sim "
                << recipe.command << " --recipe " << recipe.name << '\n'
                << quartet::cli::to_text(config);
      return 0;
    }
  }
  if (command.empty()) {
    std::cerr << app.help();
    return 2;
  }
  if (!config_path.empty()) config = quartet::cli::load_config(config_path, config);
  if (seed) config.settings.seed = *seed;
  if (!out.empty()) config.out = out;
  if (!engine.empty()) config.settings.run.engine = quartet::parse_engine(engine);
  if (!mode.empty()) config.mode = quartet::parse_mode(mode);
  if (!readout.empty()) config.readout = quartet::parse_readout(readout);
  config.validate();

  std::ostream& report = config.out.empty() ? std::cerr : std::cout;
  const quartet::ScanResult scan = quartet::cli::run_command(command, config, report);
  if (config.out.empty()) {
    quartet::write_csv(scan, std::cout);
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + config.out + "'");
    quartet::write_csv(scan, file);
    file.close();
    if (!file) throw std::runtime_error("failed writing '" + config.out + "'");
    report << "wrote " << scan.axis.size() << " rows to " << config.out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
