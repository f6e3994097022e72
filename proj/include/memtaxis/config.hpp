#pragma once

// Run configuration: flat `key = value` text grouped under `[section]`
// headers. '#' and ';' start comments. Unknown sections or keys are errors.

#include <optional>
#include <string>
#include <vector>

#include "memtaxis/diagnostics.hpp"
#include "memtaxis/model.hpp"

namespace memtaxis {

struct DelaySpec {
  std::optional<double> tau;
  std::optional<double> tau_min, tau_max;
  int tau_points = 0;

  /// The single tau, or the evenly spaced sweep grid.
  std::vector<double> grid() const;
};

struct SimulationSpec {
  int n_cells = 200;
  double dt = 0;
  double t_end = 2000;
  int ic_mode = -1;  ///< -1 picks n_c from the analysis, else 1
  double ic_amplitude_u = -0.1;
  double ic_amplitude_v = 0.1;
  std::optional<double> probe_x;  ///< defaults to the left boundary cell
  double record_interval = 0.25;
  double trace_interval = 0.25;
  int snapshot_limit = 500;  ///< snapshot rows in snapshots.csv are strided down to this count
  int spectrum_modes = 8;
};

struct RunConfig {
  KineticParams kin{0.5, 0.5, 0.8};
  TransportParams tr{2.0, 3.0, 18.0, 0.06, 2.0};
  DelaySpec delay;
  SimulationSpec sim;
  DetectOptions detect;
  int n_max = 8;
  int j_max = 2;
  std::vector<double> ell_values;
  bool sweep_normal_form = false;
  int workers = 1;
  std::optional<std::string> output_dir;
  std::string source;  ///< path or "<string>"
};

/// Throws Error(ConfigError) with the offending line number.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

}  // namespace memtaxis
