#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "enscribe/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"enscribe: enscription feasibility and cloning procedures for quantum texts"};
  app.require_subcommand(1);

  enscribe::cli::RunConfig config;
  std::string output, certificate;
  double q = 0.0;

  const std::map<std::string, std::string> about = {
      {"classify", "classical / fully quantum / efficient flags and illegibility screen"},
      {"gram", "Gram matrix of the text"},
      {"solve", "find a certified enscription (tablet, q, phases)"},
      {"qrange", "admissible Q intervals"},
      {"build-procedure", "unitary cloning procedure from a certificate"},
      {"clone", "run the probabilistic cloning machine on every state"},
      {"verify-theorems", "run the acceptance criteria"},
  };

  for (const auto& name : enscribe::cli::commands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--input", config.input_path, "text JSON file");
    sub->add_option("--output", output, "write the report here instead of stdout");
    sub->add_option("--certificate", certificate, "certificate JSON file");
    sub->add_option("--tolerance", config.tolerance, "accept tolerance")->capture_default_str();
    sub->add_option("--seed", config.seed, "search seed")->capture_default_str();
    sub->add_option("--starts", config.starts, "multi-start count")->capture_default_str();
    sub->add_option("--q", q, "fixed real q");
    sub->add_option("--q-grid", config.q_grid, "Q step of numeric range sweeps")->capture_default_str();
    sub->add_option("--only", config.only, "run a single acceptance criterion");
    sub->add_flag("--search", config.search, "force the numerical search path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : enscribe::cli::kExitError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  config.command = chosen->get_name();
  if (chosen->count("--output")) config.output_path = output;
  if (chosen->count("--certificate")) config.certificate_path = certificate;
  if (chosen->count("--q")) config.q = q;
  return enscribe::cli::run_command(config, std::cout, std::cerr);
}
