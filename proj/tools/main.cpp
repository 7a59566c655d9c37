// slabtrans: run the diffusion-approximation experiments from a config file
// and/or flags, writing CSV tables (and optional SVG plots) to --out.

#include "slabtrans_app/config.hpp"
#include "slabtrans_app/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int
main(int argc, char** argv)
{
  CLI::App cli{"Slab transport: kinetic reference vs. diffusion and coupled approximations"};
  std::string config_path, cases, eps, out;
  bool plots = false;
  int threads = 0;
  cli.add_option("--config", config_path, "Configuration file (sectioned key = value)");
  cli.add_option("--case", cases, "Comma-separated case ids (pure1..pure6, coupled1..coupled3, stability)");
  cli.add_option("--eps", eps, "Comma-separated epsilon values, e.g. 1/32,1/64");
  cli.add_option("--out", out, "Output directory");
  cli.add_flag("--plots", plots, "Also write SVG plots");
  cli.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  try
  {
    cli.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  slabtrans::app::RunConfig config;
  try
  {
    config = config_path.empty() ? slabtrans::app::default_config()
                                 : slabtrans::app::parse_config_file(config_path);
    if (!cases.empty())
      slabtrans::app::set_cases(config, cases, "--case");
    if (!eps.empty())
      slabtrans::app::set_eps(config, eps, "--eps");
    if (!out.empty())
      config.out_dir = out;
    if (plots)
      config.plots = true;
    if (threads > 0)
      config.threads = threads;
    slabtrans::app::validate(config);
  }
  catch (const slabtrans::app::ConfigError& e)
  {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  try
  {
    return slabtrans::app::run(config, std::cerr);
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
