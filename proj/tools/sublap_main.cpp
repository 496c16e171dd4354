#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "sublap/errors.hpp"
#include "sublap/runner.hpp"
#include "sublap/version.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "configuration document")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output-dir", opts.output_dir,
                  "override the [output] dir of the config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first eigenpair of the subelliptic p-Laplacian for "
               "Hörmander vector-field frames, with the associated "
               "Carnot-Carathéodory geometry and verification checks"};
  app.set_version_flag("--version", std::string("sublap ") + sublap::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  const std::pair<const char*, const char*> specs[] = {
      {"solve", "first eigenpair on the configured frame and grid"},
      {"sweep", "one solve per p in solver.p_list, single CSV"},
      {"distance", "control-distance field from the configured source"},
      {"dimension", "homogeneous dimension Q and the per-node Q(x) table"},
      {"verify", "qualitative-theorem check suite"},
  };
  for (const auto& [name, desc] : specs) add_common(app.add_subcommand(name, desc), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sublap::kExitUsage;
  }

  try {
    sublap::RunConfig cfg = sublap::load_config_file(opts.config_path);
    if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
    const auto* sub = app.get_subcommands().front();
    const sublap::Command cmd = sublap::command_from_string(sub->get_name());
    return sublap::run_command(cmd, cfg, std::cout, std::cerr);
  } catch (const sublap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sublap::kExitUsage;
  }
}
