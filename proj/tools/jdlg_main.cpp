#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jdlg/io.hpp"

namespace {

std::vector<int> parse_mixing(const std::string& s) {
  std::vector<int> result;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) result.push_back(std::stoi(item));
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JDLG decomposition of completely positive dynamics on "
               "finite-dimensional W*-algebras"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  jdlg::io::AnalysisOptions opts;
  std::string input_path, out_path;
  int jobs = 1;

  auto add_analysis_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tol-peripheral", opts.tolerances.peripheral,
                    "peripheral band |lambda| >= 1 - tol")
        ->each([&](const std::string&) { opts.peripheral_overridden = true; });
    cmd->add_option("--tol-hypothesis", opts.tolerances.hypothesis,
                    "contraction norm tolerance")
        ->each([&](const std::string&) { opts.hypothesis_overridden = true; });
    cmd->add_option("--tol-faithful", opts.tolerances.faithful,
                    "faithfulness tolerance")
        ->each([&](const std::string&) { opts.faithful_overridden = true; });
    cmd->add_option("--nmax", opts.n_max, "power iterations for convergence");
    cmd->add_option("--oracle-iters", opts.oracle_iters,
                    "averaging-oracle window length");
    cmd->add_option("--probes", opts.probes, "convergence probe pairs");
    cmd->add_option("--seed", opts.seed, "PRNG seed for sampled checks");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "analyze a channel spec");
  analyze->add_option("input", input_path, "channel spec JSON")->required();
  analyze->add_option("--out", out_path, "report path (default stdout)");
  analyze->add_option("--format", opts.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  add_analysis_flags(analyze);

  std::string preset;
  jdlg::corpus::PresetParams params;
  int cycle_h = 3;
  std::string mixing_arg;
  CLI::App* generate =
      app.add_subcommand("generate", "write a preset channel spec");
  generate->set_help_flag("--help", "print help");
  generate->add_option("preset", preset, "preset name or classical_cycle")
      ->required();
  generate->add_option("--h", cycle_h, "cycle length for classical_cycle");
  generate->add_option("--mixing", mixing_arg,
                       "comma-separated mixing block sizes");
  generate->add_option("--p", params.p, "dephasing weight");
  generate->add_option("--n", params.n, "matrix block dimension");
  generate->add_option("--theta", params.theta, "unitary_conj rotation angle");
  generate->add_option("--seed", params.seed, "generator seed");
  generate->add_option("--out", out_path, "spec path (default stdout)");

  CLI::App* verify =
      app.add_subcommand("verify", "analyze and compare to the expected block");
  verify->add_option("input", input_path, "spec file or directory")->required();
  verify->add_option("--jobs", jobs, "parallel verifications for a directory");
  add_analysis_flags(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze))
      return jdlg::io::cmd_analyze(input_path, opts, out_path, std::cout,
                                   std::cerr);
    if (app.got_subcommand(generate))
      return jdlg::io::cmd_generate(preset, params, cycle_h,
                                    parse_mixing(mixing_arg), out_path,
                                    std::cout, std::cerr);
    if (app.got_subcommand(verify))
      return jdlg::io::cmd_verify(input_path, opts, jobs, std::cout, std::cerr);
  } catch (const jdlg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jdlg::io::kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jdlg::io::kExitSchema;
  }
  return 0;
}
