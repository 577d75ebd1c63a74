#pragma once

// Delay sweeps, spectrograms, delay Fourier analysis and polarization scans.

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "isrs/model.hpp"
#include "isrs/perturbative.hpp"
#include "isrs/units.hpp"

namespace isrs::pipeline {

using perturbative::Analyzer;

std::string_view to_string(Analyzer a);  // "x" or "y"
Analyzer analyzer_from_string(std::string_view name);

enum class Window { rect, hann };

std::string_view to_string(Window w);
Window window_from_string(std::string_view name);

/// Uniform delays t_min, t_min + dt, ... up to t_max (inclusive within 1e-9 steps).
std::vector<double> delay_axis(double t_min_fs, double t_max_fs, double dt_fs);

/// Everything a delay sweep needs. Frequencies are angular (rad/ps), angles in radians.
struct Experiment {
  FrequencyGrid grid{units::angular_from_thz(380.0), units::angular_from_thz(0.15), 200};
  double pump_alpha0 = 1.0;
  double pump_sigma = units::angular_from_thz(5.0);
  double pump_theta = 0.0;
  double probe_alpha0 = 1.0;
  double probe_sigma = units::angular_from_thz(5.0);
  Chi0 chi0;
  std::vector<PhononMode> modes;
  InteractionScales scales;
  WeightVariant variant = WeightVariant::sm;
  std::vector<double> delays_fs;
  int threads = 1;

  PulseState pump() const;
  PulseState probe() const;
  void validate() const;
};

struct Spectrogram {
  Analyzer channel = Analyzer::x_prime;
  std::vector<double> delays_fs;
  std::vector<double> freqs_thz;
  std::vector<double> values;  // delays x bins, row-major

  std::size_t rows() const { return delays_fs.size(); }
  std::size_t cols() const { return freqs_thz.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  void validate() const;
};

struct SpectrogramPair {
  Spectrogram x_prime;
  Spectrogram y_prime;
};

/// Delta I normalized by the unperturbed probe intensity at the grid center.
Spectrogram run_channel(const Experiment& e, Analyzer channel);
SpectrogramPair run_pump_probe(const Experiment& e);

struct FourierMap {
  std::vector<double> freqs_thz;  // k / (N dt), k = 0 .. N/2
  std::vector<double> amplitude;  // freqs x bins, row-major
  std::vector<double> summed;     // sum over bins of amplitude
  std::size_t samples = 0;
  double window_ps = 0.0;
  std::vector<std::string> warnings;

  std::size_t cols() const { return amplitude.size() / std::max<std::size_t>(freqs_thz.size(), 1); }
  double at(std::size_t k, std::size_t c) const { return amplitude[k * cols() + c]; }
  std::size_t nearest_bin(double thz) const;
  /// Index of the largest summed amplitude in (lo, hi) THz, or nullopt.
  std::optional<std::size_t> peak_in(double lo_thz, double hi_thz) const;
};

/// DFT along delay of the t >= 0 rows. Amplitudes are scaled by 2 / sum(window),
/// so a unit cosine at a bin frequency reads 1. A window shorter than two
/// periods of slowest_thz (if given) adds a resolution warning.
FourierMap delay_fourier(const Spectrogram& s, Window window, int threads = 1, double slowest_thz = 0.0);

/// Complex DFT value per probe bin at an arbitrary frequency, same scaling.
std::vector<std::complex<double>> dft_at(const Spectrogram& s, Window window, double thz);

/// Phase of x minus phase of y in degrees, wrapped to (-180, 180]. Each
/// channel's phase is read at its strongest probe bin (lowest index on ties).
/// nullopt if either channel has no signal at thz.
std::optional<double> quadrature_phase(const Spectrogram& x, const Spectrogram& y, double thz,
                                       Window window = Window::hann, double noise_floor = 1e-14);

struct PolarScan {
  Analyzer channel = Analyzer::x_prime;
  double target_thz = 0.0;
  double bin_thz = 0.0;
  std::vector<double> thetas_deg;
  std::vector<double> amplitudes;
  std::vector<std::string> warnings;
};

PolarScan polar_scan(const Experiment& e, const std::vector<double>& thetas_deg, double target_thz,
                     Analyzer channel, Window window = Window::hann);

enum class PolarModel { constant, cos2theta, sin2theta };

std::string_view to_string(PolarModel m);
PolarModel polar_model_from_string(std::string_view name);
/// Model implied by the symmetry class: A constant, E_L cos 2 theta, E_T sin 2 theta.
PolarModel polar_model_for(SymmetryClass cls);

struct FitResult {
  PolarModel model = PolarModel::constant;
  double amplitude = 0.0;
  double residual_norm = 0.0;
  /// 1 - SS_res / sum y^2 (through-origin fit); nullopt for all-zero data.
  std::optional<double> r_squared;
  /// Angle (deg) of the smallest sample.
  double min_theta_deg = 0.0;
};

/// Least squares of |amplitude| against a * |f(theta)|.
FitResult fit_polar(const PolarScan& scan, PolarModel model);

}  // namespace isrs::pipeline
