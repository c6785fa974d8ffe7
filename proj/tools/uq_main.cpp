#include "uq/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

// Exit codes: 0 success, 1 domain/runtime failure, 2 configuration error.
int main(int argc, char** argv) {
  CLI::App app{"Low-rank tensor and sparse polynomial-chaos surrogates for "
               "uncertainty propagation and reliability analysis"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", run_config, "experiment config (JSON)")->required();

  std::string cmp_a, cmp_b, cmp_out = ".";
  CLI::App* cmp = app.add_subcommand("compare", "compare two run summaries");
  cmp->add_option("a", cmp_a, "first summary.json")->required();
  cmp->add_option("b", cmp_b, "second summary.json")->required();
  cmp->add_option("-o,--output", cmp_out, "output directory for compare.{md,csv}");

  std::string val_config;
  CLI::App* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("config", val_config, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const uq::RunOutcome outcome = uq::run_experiment(run_config);
      if (outcome.exit_code != 0)
        std::fprintf(stderr, "error in stage '%s': %s\n", outcome.stage.c_str(),
                     outcome.error.c_str());
      else
        for (const std::string& artifact : outcome.artifacts)
          std::printf("wrote %s\n", artifact.c_str());
      return outcome.exit_code;
    }
    if (cmp->parsed()) {
      uq::compare_report(cmp_a, cmp_b, cmp_out);
      std::printf("wrote %s/compare.md and %s/compare.csv\n", cmp_out.c_str(), cmp_out.c_str());
      return 0;
    }
    if (val->parsed()) {
      uq::load_config(val_config);
      std::printf("config ok\n");
      return 0;
    }
  } catch (const uq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
