#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dqlin/errors.hpp"
#include "dqlin/types.hpp"

namespace dqlin::cli {

/// Bad config file, unknown key, wrong type or invalid value.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct RunConfig {
  std::string model = "damped_oscillator";
  std::map<std::string, double> parameters;  // scalar model parameters, defaults filled in
  std::optional<Mat> generic_A;
  std::optional<Vec> generic_J;

  int n = 1;
  int l = 0;

  double t_max = 10.0;
  int samples = 101;
  std::vector<std::string> observables{"H"};

  double flow_tolerance = 1e-10;
  double residual_tolerance = 1e-8;
  std::string flow_method = "automatic";
  double fixed_step = 0.01;
  std::string route = "transported";

  std::string out_dir = "out";
  std::string format = "csv";

  std::vector<double> wigner_times;
  double wigner_extent = 4.0;
  int wigner_points = 41;
  std::array<int, 2> wigner_axes{0, 1};

  double omega0_scale = 1.0;
  std::optional<Mat> omega0;

  int spectrum_n_min = 0, spectrum_n_max = 3;
  int spectrum_l_min = 0, spectrum_l_max = 3;

  std::uint64_t seed = 20240601;
  int verify_samples = 20;

  double star_hbar_scale = 1.0;

  /// Fully resolved config tree (defaults + file + overrides), for manifests.
  nlohmann::json resolved;

  std::vector<double> time_grid() const;
  double hbar() const { return parameters.at("hbar"); }
};

/// Default config tree; its shape and leaf types are the schema.
nlohmann::json default_config_tree();

/// Parse `text` (may be empty), apply `overrides` ("a.b.c=JSON"), validate.
RunConfig load_config(const std::string& text, const std::vector<std::string>& overrides);
RunConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace dqlin::cli
