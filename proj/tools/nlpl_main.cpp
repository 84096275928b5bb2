// nlpl: runs experiment configs.
//
//   nlpl run --config exp.json [--out DIR] [--threads N] [--seed N]
//   nlpl verify --config exp.json    (only the verify tasks, or a default one)

#include "nlpl/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal p-Laplacian experiment runner"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  nlpl::RunOptions opts;

  struct Sub {
    const char* name;
    const char* help;
    std::optional<nlpl::Task::Kind> kind;
  };
  const Sub subs[] = {
      {"run", "run every task of the config", std::nullopt},
      {"check-kernel", "Dini and scaling checks of the kernel", nlpl::Task::Kind::CheckKernel},
      {"solve", "solve the exterior Dirichlet problem", nlpl::Task::Kind::Solve},
      {"tail", "nonlocal tail of the data", nlpl::Task::Kind::Tail},
      {"verify", "inequality reports on solutions", nlpl::Task::Kind::Verify},
      {"stability", "energies as s goes to 1", nlpl::Task::Kind::Stability},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory, overrides output.directory");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::Range(1, 1024));
    sub->add_option("--seed", opts.seed, "seed for random test functions");
    const auto kind = s.kind;
    sub->callback([&opts, kind] { opts.only = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nlpl::kExitConfig;
  }
  if (!out.empty()) opts.out = out;
  return nlpl::run_config_file(config, opts, std::cout, std::cerr);
}
