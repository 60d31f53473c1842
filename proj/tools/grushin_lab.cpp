#include "grushin/lab.hpp"
#include "grushin/parallel.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace grushin;

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on Grushin spaces"};
  app.require_subcommand(1);
  std::string out_dir;
  int threads = 1;
  std::vector<std::string> overrides;
  app.add_option("--out", out_dir, "output directory (overrides out_dir in the config)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "dot-path config override, key=value")->allow_extra_args(false);

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  std::string config_path;
  run->add_option("config", config_path, "config.toml")->required();
  auto* list = app.add_subcommand("list", "list experiments and the claims they cover");
  run->fallthrough();
  list->fallthrough();
  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("GRUSHIN_LAB_THREADS")) {
    try {
      threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "GRUSHIN_LAB_THREADS: expected a positive integer\n";
      return 2;
    }
    if (threads < 1) {
      std::cerr << "GRUSHIN_LAB_THREADS: expected a positive integer\n";
      return 2;
    }
  }
  set_thread_count(threads);

  if (*list) {
    std::cout << lab::list_text();
    return 0;
  }

  lab::Config config;
  try {
    config = lab::load_config(config_path);
    for (const auto& o : overrides) config.apply_override(o);
    if (!out_dir.empty()) config.set("out_dir", out_dir);
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  const std::string dir = config.has("out_dir") ? config.string("out_dir", "") : "results";

  lab::ExperimentReport report;
  try {
    report = lab::run_experiment(config);
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  lab::write_outputs(report, config, dir);

  int failed = 0;
  for (const auto& r : report.rows) {
    if (!r.pass) {
      ++failed;
      std::cout << "FAIL " << r.group << " | " << r.check << " | " << r.parameters << " | measured "
                << lab::format_number(r.measured) << " target " << lab::format_number(r.target) << "\n";
    }
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << report.id << ": " << report.rows.size() - failed << "/" << report.rows.size() << " checks passed, output in "
            << dir << "\n";
  return failed == 0 ? 0 : 1;
}
