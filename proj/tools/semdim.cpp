// semdim: measure social dimensions in word embeddings and score them against surveys.
//
// Exit status: 0 ok, 1 domain error, 2 usage or configuration error.

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "semdim/config.hpp"
#include "semdim/error.hpp"
#include "semdim/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  bool no_sign_align = false;
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("-c,--config", opts.config, "run configuration (JSON, comments allowed)")->required();
  cmd->add_option("--seed", opts.seed, "override the configured seed");
  cmd->add_option("-o,--out", opts.out, "override the output directory");
  cmd->add_option("-j,--jobs", opts.jobs, "worker threads for the measurement grid")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-sign-align", opts.no_sign_align, "rank beliefs without flipping negatively correlated runs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure social dimensions in word embeddings and score them against survey data"};
  app.set_version_flag("--version", std::string(semdim::tool_version()));
  app.require_subcommand(1);

  Options opts;
  auto* measure = app.add_subcommand("measure", "score identities on every dimension x measure x embedding");
  auto* evaluate = app.add_subcommand("evaluate", "correlate scores with surveys and rank beliefs");
  auto* salience = app.add_subcommand("salience", "fit IsA/SeenWith salience regressions");
  auto* all = app.add_subcommand("all", "measure, evaluate, then salience when labeling data is configured");
  for (auto* cmd : {measure, evaluate, salience, all}) add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    semdim::RunConfig config = semdim::load_config(opts.config);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.out) config.output_dir = *opts.out;
    if (opts.jobs) config.jobs = *opts.jobs;
    if (opts.no_sign_align) config.sign_align = false;
    config.finalize();

    semdim::CommandResult result;
    if (measure->parsed()) result = semdim::cmd_measure(config);
    if (evaluate->parsed()) result = semdim::cmd_evaluate(config);
    if (salience->parsed()) result = semdim::cmd_salience(config);
    if (all->parsed()) result = semdim::cmd_all(config);

    std::cout << "wrote " << result.written.size() << " files to " << config.output_dir.string() << " ("
              << result.warnings << " warnings, config " << config.hash() << ", seed " << config.seed << ")\n";
    if (result.had_errors) {
      std::cerr << "error: some runs failed; see warnings.json\n";
      return 1;
    }
    return 0;
  } catch (const semdim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
