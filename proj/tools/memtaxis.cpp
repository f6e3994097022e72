#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "memtaxis/commands.hpp"
#include "memtaxis/kernels/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hopf bifurcation analysis and simulation for a predator-prey model with "
               "memory-based diffusion and predator-taxis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  const char* names[] = {"analyze", "normal-form", "simulate", "sweep"};
  const char* help[] = {
      "steady state, mode window, critical delays and the stability regime",
      "analyze plus the third-order normal form at the first Hopf point",
      "integrate the delayed PDE and classify the long-term behavior",
      "analyze over a tau grid (and optional ell values)",
  };
  for (int i = 0; i < 4; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides MEMTAXIS_OUT and [output] dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : memtaxis::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  memtaxis::RunConfig cfg;
  try {
    cfg = memtaxis::load_config(config_path);
  } catch (const memtaxis::Error& e) {
    std::cerr << e.what() << '\n';
    return memtaxis::exit_code_for(e);
  }
  const auto out = memtaxis::resolve_output_dir(
      out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir), cfg);
  if (command == "simulate") {
    std::cerr << "kernels: " << memtaxis::kernels::active_table().name << '\n';
  }
  return memtaxis::run_command(command, cfg, out, std::cout, std::cerr);
}
