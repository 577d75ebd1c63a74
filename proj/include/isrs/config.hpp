#pragma once

// Run configuration: YAML in, validated RunConfig out, canonical YAML back.

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "isrs/fock.hpp"
#include "isrs/model.hpp"
#include "isrs/oracle.hpp"
#include "isrs/pipeline.hpp"

namespace isrs::config {

struct GridConfig {
  double center_thz = 380.0;
  double span_thz = 60.0;
  double spacing_thz = 0.15;

  bool operator==(const GridConfig&) const = default;
};

struct PumpConfig {
  double alpha0 = 0.01;
  double sigma_thz = 5.0;
  double theta_deg = 0.0;
  std::string fluence_tag = "0.8 mJ/cm2";

  bool operator==(const PumpConfig&) const = default;
};

struct ProbeConfig {
  double alpha0 = 1.0;
  double sigma_thz = 5.0;

  bool operator==(const ProbeConfig&) const = default;
};

struct Chi0Config {
  double u = 0.0;
  double w_abs = 0.02;
  double phi = 0.3;

  bool operator==(const Chi0Config&) const = default;
};

struct ModeConfig {
  SymmetryClass cls = SymmetryClass::A;
  double freq_thz = 1.0;
  double coupling = 1.0;
  double mass = 1.0;
  double beta = std::numeric_limits<double>::infinity();

  bool operator==(const ModeConfig&) const = default;
};

struct InteractionConfig {
  double tau = 0.01;
  double volume = 1.0;
  double sample_volume = 1.0;
  WeightVariant weight_variant = WeightVariant::sm;

  bool operator==(const InteractionConfig&) const = default;
};

struct SweepConfig {
  double t_min_fs = -300.0;
  double t_max_fs = 2000.0;
  double dt_fs = 6.7;
  std::vector<double> theta_list_deg{0, 15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165, 180};

  bool operator==(const SweepConfig&) const = default;
};

struct OracleConfig {
  bool enabled = true;
  int bins = 3;
  int photon_cutoff = 2;
  int phonon_cutoff = 4;
  std::vector<double> coupling_scales{1e-3, 5e-4, 2.5e-4};
  std::vector<double> amplitudes{0.3, 0.5, 0.4};
  double tau = 1.0;
  std::size_t mode_index = 0;
  fock::PhononInit phonon_init = fock::PhononInit::vacuum;
  std::size_t dimension_cap = 20000;

  bool operator==(const OracleConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  PumpConfig pump;
  ProbeConfig probe;
  Chi0Config chi0;
  std::vector<ModeConfig> modes{
      {SymmetryClass::A, 6.0, 1.0},
      {SymmetryClass::A, 13.95, 0.5},
      {SymmetryClass::E_L, 4.05, 1.0},
      {SymmetryClass::E_T, 4.05, 1.0},
  };
  InteractionConfig interaction;
  SweepConfig sweep;
  OracleConfig oracle;

  /// Non-fatal notes from loading, e.g. snapped phonon frequencies.
  std::vector<std::string> warnings;
  /// Source line of each dotted key seen while parsing.
  std::map<std::string, int> lines;

  FrequencyGrid frequency_grid() const;
  pipeline::Experiment experiment(int threads = 1) const;
  oracle::StudyConfig study(int threads = 1) const;
};

/// Quartz-like defaults.
RunConfig quartz_preset();

/// Parses YAML text. Missing keys keep their defaults; unknown keys and
/// invalid values raise ConfigurationError (parse) or ParameterError
/// (validation) with the dotted key and the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Checks all cross-field constraints; throws ParameterError naming the key.
void validate(RunConfig& config);

/// Canonical YAML with a fixed key order and shortest round-trip numbers.
std::string emit_config(const RunConfig& config);

bool same_fields(const RunConfig& a, const RunConfig& b);

}  // namespace isrs::config
