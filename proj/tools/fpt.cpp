// Command-line front end; all numerics go through the C API in fpt/fpt.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csv_format.hpp"
#include "fpt/fpt.h"

namespace {

int exit_code(fpt_status s) {
  if (s == FPT_OK) return 0;
  return s == FPT_ERR_NUMERIC ? 1 : 2;
}

struct ConfigGuard {
  fpt_run_config cfg{};
  ~ConfigGuard() { fpt_run_config_free(&cfg); }
};

int report(fpt_status s) {
  if (s != FPT_OK) std::cerr << "error: " << fpt_last_error() << "\n";
  return exit_code(s);
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << out_path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

std::vector<double> time_grid(const fpt_run_config& cfg) {
  std::vector<double> grid;
  grid.reserve(cfg.steps);
  for (int k = 1; k <= cfg.steps; ++k)
    grid.push_back(cfg.t_max * k / cfg.steps);
  return grid;
}

int cmd_laplace(const fpt_run_config& cfg, double re, double im,
                const std::string& out_path) {
  if (!(re > 0.0)) {
    std::cerr << "error: --lambda must have positive real part\n";
    return 2;
  }
  double vr = 0.0, vi = 0.0;
  fpt_status s = fpt_laplace_transform(cfg.drift, cfg.x0, cfg.barrier, re, im,
                                       &vr, &vi);
  if (s != FPT_OK) return report(s);
  std::string text = im == 0.0
                         ? fpt_cli::csv_cell(vr) + "\n"
                         : fpt_cli::csv_cell(vr) + "," + fpt_cli::csv_cell(vi) +
                               "\n";
  return write_output(text, out_path);
}

int cmd_curve(const fpt_run_config& cfg, bool with_survival, bool with_density,
              const std::string& out_path) {
  std::vector<double> grid = time_grid(cfg);
  std::vector<double> survival(grid.size()), density(grid.size());
  fpt_status s = fpt_survival_curve(cfg.drift, cfg.x0, cfg.barrier,
                                    grid.data(), grid.size(), &cfg.inversion,
                                    survival.data(),
                                    with_density ? density.data() : nullptr);
  if (s != FPT_OK) return report(s);
  std::vector<std::string> names{"t"};
  if (with_survival) names.push_back("survival");
  if (with_density) names.push_back("density");
  std::string text = fpt_cli::csv_header(names);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    if (with_survival) row.push_back(survival[i]);
    if (with_density) row.push_back(density[i]);
    text += fpt_cli::csv_row(row);
  }
  return write_output(text, out_path);
}

int cmd_bound(const fpt_run_config& cfg, const std::string& out_path) {
  std::vector<double> grid = time_grid(cfg);
  std::string text = fpt_cli::csv_header({"t", "density_bound"});
  for (double t : grid) {
    double b = 0.0;
    fpt_status s = fpt_density_bound(cfg.drift, cfg.x0, cfg.barrier, t, &b);
    if (s != FPT_OK) return report(s);
    text += fpt_cli::csv_row({t, b});
  }
  return write_output(text, out_path);
}

int cmd_approx(const fpt_run_config& cfg, int n, const std::string& out_path) {
  if (n < 1) {
    std::cerr << "error: --n must be >= 1\n";
    return 2;
  }
  double eps = cfg.m2 / n;
  double bound = 0.0, integral = 0.0;
  fpt_status s = fpt_crossing_diff_bound(cfg.m1, cfg.m2, cfg.x0, cfg.barrier,
                                         cfg.t_max, eps, &bound, &integral);
  if (s != FPT_OK) return report(s);
  std::string text = fpt_cli::csv_header({"n", "sup_error", "crossing_bound"});
  text += fpt_cli::csv_row({double(n), eps, bound});
  return write_output(text, out_path);
}

int cmd_mc(const fpt_run_config& cfg, bool antithetic,
           const std::string& out_path) {
  if (!cfg.has_mc) {
    std::cerr << "error: config has no [mc] section\n";
    return 2;
  }
  fpt_mc_options opts = cfg.mc;
  opts.antithetic = antithetic ? 1 : 0;
  double p = 0.0, se = 0.0;
  fpt_status s = fpt_mc_crossing(cfg.drift, cfg.x0, cfg.barrier, &opts, &p, &se);
  if (s != FPT_OK) return report(s);
  std::string text = fpt_cli::csv_header({"p_hat", "std_err"});
  text += fpt_cli::csv_row({p, se});
  return write_output(text, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-passage-time engine for diffusions with piecewise "
               "linear drift"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  app.add_option("-c,--config", config_path, "run configuration file")
      ->required();
  app.add_option("-o,--out", out_path, "write output to this file");

  double lambda_re = 0.0, lambda_im = 0.0;
  auto* laplace = app.add_subcommand(
      "laplace", "Laplace transform of the first-passage density");
  laplace->add_option("--lambda", lambda_re, "real part, must be > 0")
      ->required();
  laplace->add_option("--lambda-im", lambda_im, "imaginary part");

  bool with_density = false;
  auto* survival =
      app.add_subcommand("survival", "survival curve P(tau_c > t) as CSV");
  survival->add_flag("--with-density", with_density,
                     "append a density column");

  auto* density =
      app.add_subcommand("density", "first-passage density curve as CSV");

  auto* bound =
      app.add_subcommand("bound", "pointwise density upper bound as CSV");

  int approx_n = 0;
  auto* approx = app.add_subcommand(
      "approx", "linearization error budget at a given resolution");
  approx->add_option("--n", approx_n, "nodes per unit length")->required();

  bool antithetic = false;
  auto* mc = app.add_subcommand("mc", "Monte Carlo crossing estimate");
  mc->add_flag("--antithetic", antithetic, "use antithetic pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ConfigGuard guard;
  fpt_status s = fpt_config_load(config_path.c_str(), &guard.cfg);
  if (s != FPT_OK) return report(s);
  const fpt_run_config& cfg = guard.cfg;

  if (laplace->parsed()) return cmd_laplace(cfg, lambda_re, lambda_im, out_path);
  if (survival->parsed())
    return cmd_curve(cfg, /*with_survival=*/true, with_density, out_path);
  if (density->parsed())
    return cmd_curve(cfg, /*with_survival=*/false, /*with_density=*/true,
                     out_path);
  if (bound->parsed()) return cmd_bound(cfg, out_path);
  if (approx->parsed()) return cmd_approx(cfg, approx_n, out_path);
  if (mc->parsed()) return cmd_mc(cfg, antithetic, out_path);
  return 2;
}
