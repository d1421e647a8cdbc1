#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magq_cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Magnetic Weyl and Berezin quantization experiments"};
  std::string config_path, out_dir, format;
  std::vector<double> hbar;
  unsigned seed = 0;
  int threads = 0;
  std::vector<std::string> words;
  app.add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--hbar", hbar, "Override hbar_list (strictly decreasing)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("command", words, "fields verify | quantize weyl|berezin | husimi | bargmann check | "
                                   "sweep rieffel|vonneumann|dirac|semiclassical|sigma|phaselemma | spectrum")
      ->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    magq::cli::Json j = magq::cli::Json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      j = magq::cli::Json::parse(is);
    }
    if (!out_dir.empty()) j["output"]["dir"] = out_dir;
    if (!format.empty()) j["output"]["format"] = format;
    if (!hbar.empty()) j["hbar_list"] = hbar;
    if (*seed_opt) j["seed"] = seed;
    if (threads > 0) j["threads"] = threads;
    const magq::cli::ExperimentConfig cfg = magq::cli::parse_config(j);
    const magq::cli::RunResult r = magq::cli::run(words, cfg);
    for (const auto& f : r.files) std::cout << f << '\n';
    return r.exit_code;
  } catch (const magq::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const magq::cli::Json::parse_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
