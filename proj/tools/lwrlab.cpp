#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "lwr/cli/commands.hpp"
#include "lwr/errors.hpp"

using namespace lwr;
using namespace lwr::cli;

namespace {

struct Args {
  std::string config;
  std::string out;
  unsigned jobs = 0;
  std::string l_variant;
  std::size_t mu_grid = 0;
  std::string trace;
  bool run_inline = false;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--config", a.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", a.out, "output directory (must exist)");
  sub->add_option("--l-variant", a.l_variant, "initial L definition")
      ->check(CLI::IsMember({"proof", "intro"}));
  sub->add_option("--mu-grid", a.mu_grid, "number of mu grid points")->check(CLI::PositiveNumber);
}

CommandOptions to_options(const Args& a) {
  CommandOptions o;
  o.out_dir = a.out;
  o.jobs = a.jobs;
  if (!a.l_variant.empty()) o.l_variant = parse_l_variant(a.l_variant);
  if (a.mu_grid > 0) o.mu_grid = a.mu_grid;
  if (!a.trace.empty()) o.trace = a.trace;
  o.run_inline = a.run_inline;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal traffic flow: simulation and shock-formation certificates"};
  app.require_subcommand(1);
  Args a;

  auto* sim = app.add_subcommand("simulate", "run the finite-volume solver");
  auto* ana = app.add_subcommand("analyze", "compute the blow-up certificate for the initial datum");
  auto* ver = app.add_subcommand("verify", "check analytic bounds on a trace or an inline run");
  auto* swp = app.add_subcommand("sweep", "certificate (and optional run) over a parameter grid");
  for (auto* s : {sim, ana, ver, swp}) add_common(s, a);
  ver->add_option("--trace", a.trace, "trace.csv from a previous simulate");
  ver->add_flag("--run-inline", a.run_inline, "simulate and check every state");
  swp->add_option("--jobs", a.jobs, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const auto cfg = load_config(a.config);
    const auto opts = to_options(a);
    if (*sim) return cmd_simulate(cfg, opts, std::cout);
    if (*ana) return cmd_analyze(cfg, opts, std::cout);
    if (*ver) return cmd_verify(cfg, opts, std::cout);
    return cmd_sweep(cfg, opts, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "lwrlab: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lwrlab: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "lwrlab: " << e.what() << '\n';
    return kRuntimeAbort;
  }
}
