#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rys/commands.hpp"

namespace {

using rys::app::RunConfig;

void add_params(CLI::App* cmd, RunConfig& cfg) {
  auto opt = [cmd](const char* flag, std::optional<double>& slot, const char* help) {
    cmd->add_option_function<double>(flag, [&slot](double v) { slot = v; }, help);
  };
  opt("--alpha", cfg.params.alpha, "alpha (Ricci weight)");
  opt("--beta", cfg.params.beta, "beta (scalar curvature weight)");
  opt("--lambda", cfg.params.lambda, "lambda; balanced cases solve for it when omitted");
  opt("--mu", cfg.params.mu, "mu (df (x) df weight)");
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--case", cfg.cases, "case or entry name, repeatable; 'all' for every case");
  add_params(cmd, cfg);
  cmd->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  cmd->add_option("--resolution", cfg.resolution, "Gauss-Legendre nodes per axis and panel")->capture_default_str();
  cmd->add_option_function<std::string>("--output,-o", [&cfg](const std::string& p) { cfg.output = p; },
                                        "write the report here (atomically) instead of stdout");
  cmd->add_flag("--timing", cfg.timing, "include wall time in the report");
}

void add_tolerances(CLI::App* cmd, RunConfig& cfg) {
  auto& t = cfg.tolerances;
  cmd->add_option("--tol-soliton", t.soliton, "defining residual, max-abs")->capture_default_str();
  cmd->add_option("--tol-order2", t.order2, "identities using second derivatives")->capture_default_str();
  cmd->add_option("--tol-order3", t.order3, "identities using third derivatives")->capture_default_str();
  cmd->add_option("--tol-order4", t.order4, "identities using fourth derivatives")->capture_default_str();
  cmd->add_option("--tol-splitting", t.splitting, "Bochner splitting identity")->capture_default_str();
  cmd->add_option("--tol-flags", t.flags, "flag checks (Hessian, gradient length, Ricci-flat)")->capture_default_str();
}

int emit(const rys::app::CommandResult& r, bool to_stdout) {
  if (to_stdout && !r.output.empty()) std::fwrite(r.output.data(), 1, r.output.size(), stdout);
  if (!r.message.empty()) std::cerr << r.message << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Ricci-Yamabe solitons"};
  app.set_version_flag("--version", std::string(rys::app::tool_version()));
  app.require_subcommand(1);

  RunConfig cfg;

  auto* verify = app.add_subcommand("verify", "check the identity suite on catalog cases");
  add_common(verify, cfg);
  verify->add_option("--points", cfg.points, "sample points per case")->capture_default_str();
  add_tolerances(verify, cfg);

  auto* integrate = app.add_subcommand("integrate", "volume, divergence theorem and integral identities");
  add_common(integrate, cfg);
  integrate->add_option_function<double>("--radius", [&cfg](double v) { cfg.radius = v; }, "sphere radius");

  auto* solve = app.add_subcommand("solve", "radial potential on a space form, CSV of r, f, residual");
  add_params(solve, cfg);
  solve->add_option("--background", cfg.background, "flat, sphere or hyperbolic")->capture_default_str();
  solve->add_option_function<double>("--radius", [&cfg](double v) { cfg.radius = v; }, "background scale");
  solve->add_option("--grid", cfg.grid, "radial nodes")->capture_default_str();
  solve->add_option_function<double>("--rmax", [&cfg](double v) { cfg.r_max = v; }, "outer radius");
  solve->add_option("--ansatz", cfg.ansatz, "free or constant")->capture_default_str();
  solve->add_option_function<std::string>("--output,-o", [&cfg](const std::string& p) { cfg.output = p; },
                                          "write the CSV here (atomically) instead of stdout");

  auto* catalog = app.add_subcommand("catalog", "list entries and cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rys::app::kExitUsage;
  }

  const bool to_stdout = !cfg.output;
  if (verify->parsed()) return emit(rys::app::run_verify(cfg), to_stdout);
  if (integrate->parsed()) return emit(rys::app::run_integrate(cfg), to_stdout);
  if (solve->parsed()) return emit(rys::app::run_solve(cfg), to_stdout);
  if (catalog->parsed()) return emit(rys::app::run_catalog(), true);
  return rys::app::kExitUsage;
}
