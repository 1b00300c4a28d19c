// transhyp <scan|family|ode|identities|sym> --config <path> [--out-dir <path>] [--threads <k>] [--seed <u64>]

#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "transhyp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"S_r curvature checks for translation hypersurfaces"};
  app.require_subcommand(0, 1);
  app.allow_extras();  // unknown subcommands are reported below with status 2

  transhyp::cli::Options opt;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string chosen;

  const std::pair<const char*, const char*> subs[] = {
      {"scan", "grid evaluation of S_r with oracle cross-checks"},
      {"family", "build a cylinder or Enneper family and print its derived constants"},
      {"ode", "integrate the log-cos ODE and compare with the closed form"},
      {"identities", "finite-difference checks of the W^{r+2} and G_r derivative identities"},
      {"sym", "Newton / Maclaurin / zero-propagation checks on a value list"},
  };
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--out-dir", out_dir, "directory for CSV/JSON output");
    sub->add_option("--threads", opt.threads, "worker threads for grid evaluation")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "override the config seed");
    sub->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : transhyp::cli::kParseError;
  }
  if (chosen.empty()) {
    const auto stray = app.remaining();
    std::cerr << "error: " << (stray.empty() ? "missing subcommand" : "unknown subcommand \"" + stray.front() + "\"")
              << "\n" << app.help();
    return transhyp::cli::kParseError;
  }
  if (app.get_subcommand(chosen)->count("--seed")) opt.seed = seed;
  opt.out_dir = out_dir;
  return transhyp::cli::run(chosen, opt, std::cout, std::cerr);
}
