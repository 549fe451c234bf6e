#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "vortexdom/errors.hpp"
#include "vortexdom/report.hpp"

namespace {

vortexdom::RunConfig load(const std::string& config_path,
                          const std::string& out_override) {
  vortexdom::RunConfig cfg = vortexdom::RunConfig::from_file(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traveling vortex domain analysis"};
  app.set_version_flag("--version", vortexdom::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir, seed_csv;

  CLI::App* analyze =
      app.add_subcommand("analyze", "extract and classify the vortex domain");
  analyze->add_option("--config", config_path, "JSON config file")
      ->required();
  analyze->add_option("--out", out_dir, "output directory override");

  CLI::App* sweep =
      app.add_subcommand("sweep", "parameter sweep with regime table");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--out", out_dir, "output directory override");

  CLI::App* trace_cmd =
      app.add_subcommand("trace", "trace co-moving-frame streamlines");
  trace_cmd->add_option("--config", config_path, "JSON config file")
      ->required();
  trace_cmd->add_option("--seeds", seed_csv, "CSV of seed points");
  trace_cmd->add_option("--out", out_dir, "output directory override");

  CLI::App* validate =
      app.add_subcommand("validate", "run the property suite");
  validate->add_option("--config", config_path, "JSON config file")
      ->required();
  validate->add_option("--out", out_dir, "output directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const auto rep = vortexdom::run_analyze(load(config_path, out_dir));
      std::printf("topology: %s\n",
                  rep.at("classification").at("topology").dump().c_str());
    } else if (sweep->parsed()) {
      const auto rep = vortexdom::run_sweep(load(config_path, out_dir));
      std::printf("transition: %s\n", rep.at("transition").dump().c_str());
    } else if (trace_cmd->parsed()) {
      vortexdom::RunConfig cfg = load(config_path, out_dir);
      if (!seed_csv.empty()) cfg.seeds = vortexdom::load_seed_csv(seed_csv);
      const auto rep = vortexdom::run_trace(cfg);
      std::printf("traces: %zu\n", rep.at("traces").size());
    } else if (validate->parsed()) {
      const auto rep = vortexdom::run_validate(load(config_path, out_dir));
      for (const auto& p : rep.at("properties"))
        std::printf("%-32s %s\n", p.at("property").get<std::string>().c_str(),
                    p.at("pass").get<bool>() ? "pass" : "FAIL");
      if (!rep.at("all_pass").get<bool>()) return 1;
    }
  } catch (const vortexdom::precondition_error& e) {
    std::fprintf(stderr, "precondition failure: %s\n", e.what());
    return 2;
  } catch (const vortexdom::numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const vortexdom::io_error& e) {
    std::fprintf(stderr, "i/o failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
