#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace magq::cli {

using Json = nlohmann::ordered_json;

struct GridConfig {
  std::string policy = "fixed";  // fixed | scaled | sqrt_box
  double box_half_width = 3.0;
  int points_per_axis = 16;
  double m_times_hbar = 2.0;
  int m_min = 8;
  double l_times_sqrt_hbar = 5.0;
};

struct ExperimentConfig {
  int dim = 1;
  std::string field = "zero";
  std::string gauge = "symmetric";
  std::string gauge_function = "zero";
  std::string fiducial = "gaussian";
  std::string quantization = "weyl";
  GridConfig grid;
  std::vector<double> hbar_list{0.25, 0.125, 0.0625, 0.03125};
  std::vector<double> phase_lemma_hbar_list{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625};
  std::string symbol_f = "gaussian:1";
  std::string symbol_g = "gaussian:1";
  std::string state = "coherent";
  unsigned seed = 1;
  int threads = 1;
  std::string out_dir = "magq_out";
  std::string format = "json";
  double tol_potential = 1e-9;
  double tol_bargmann = 1e-6;
  double tol_sigma = 1e-8;
  double tol_phase_lemma = 1e-3;
  int phase_lemma_configs = 5;
  int sigma_kernels = 2;

  Json to_json() const;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Parses and validates; unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

// Locale-free JSON text with numbers in fixed scientific notation, 17 significant digits.
std::string dump_json(const Json& j);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;
};

// Runs one subcommand; `args` are the positional words after the program name
// (e.g. {"sweep", "rieffel"}). Throws ConfigError for invalid configurations.
RunResult run(const std::vector<std::string>& args, const ExperimentConfig& cfg);

}  // namespace magq::cli
