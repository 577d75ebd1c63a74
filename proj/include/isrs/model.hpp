#pragma once

#include <array>
#include <complex>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace isrs {

using RealMatrix2 = std::array<std::array<double, 2>, 2>;
using ComplexMatrix2 = std::array<std::array<std::complex<double>, 2>, 2>;

enum class Polarization { x = 0, y = 1 };

enum class SymmetryClass { A, E_L, E_T };

std::string_view to_string(SymmetryClass cls);
SymmetryClass symmetry_class_from_string(std::string_view name);

/// Frequency weight used inside the photon sums: the exact comb frequency
/// omega_j, or the narrow-band replacement omega_j ~ omega_0.
enum class WeightVariant { main_text, sm };

std::string_view to_string(WeightVariant v);
WeightVariant weight_variant_from_string(std::string_view name);

/// Uniform comb omega_j = omega_0 + j*delta, j in [-J, J]. Angular units.
class FrequencyGrid {
 public:
  FrequencyGrid(double center, double spacing, int half_width);

  double center() const { return center_; }
  double spacing() const { return spacing_; }
  int half_width() const { return half_width_; }
  std::size_t size() const { return static_cast<std::size_t>(2 * half_width_ + 1); }

  double frequency(int j) const { return center_ + j * spacing_; }
  double weight(int j, WeightVariant v) const {
    return v == WeightVariant::sm ? center_ : frequency(j);
  }
  bool contains(int j) const { return j >= -half_width_ && j <= half_width_; }
  std::size_t index(int j) const { return static_cast<std::size_t>(j + half_width_); }
  int bin(std::size_t index) const { return static_cast<int>(index) - half_width_; }

  /// Omega/delta as an integer; throws ConfigurationError when the phonon
  /// offset does not land exactly on a bin.
  int phonon_offset(double phonon_frequency) const;

  bool operator==(const FrequencyGrid&) const = default;

 private:
  double center_;
  double spacing_;
  int half_width_;
};

/// Multimode coherent amplitudes per polarization. Mode-locking phases are
/// zero, so amplitudes are stored as nonnegative moduli.
class PulseState {
 public:
  PulseState(FrequencyGrid grid, std::vector<double> x, std::vector<double> y, double theta);

  const FrequencyGrid& grid() const { return grid_; }
  double theta() const { return theta_; }
  std::span<const double> moduli(Polarization p) const {
    return p == Polarization::x ? std::span<const double>(x_) : std::span<const double>(y_);
  }
  /// |alpha_{p,j}|, zero outside the grid.
  double amplitude(Polarization p, int j) const;

  /// Unsplit profile sqrt(|alpha_x|^2 + |alpha_y|^2) per bin.
  std::vector<double> profile() const;

 private:
  FrequencyGrid grid_;
  std::vector<double> x_;
  std::vector<double> y_;
  double theta_;
};

/// alpha_j = alpha0 exp(-(j delta)^2 / (2 sigma^2)), split as (cos, sin) theta.
/// sigma is angular, like the grid spacing.
PulseState gaussian_pulse(const FrequencyGrid& grid, double alpha0, double sigma, double theta);

/// Linearly polarized pulse from an explicit amplitude table (length 2J+1).
PulseState pulse_from_table(const FrequencyGrid& grid, std::vector<double> profile, double theta);

RealMatrix2 chi1_matrix(SymmetryClass cls, double coupling);

struct Chi0 {
  double u = 0.0;
  double w_abs = 0.0;
  double phi = 0.0;

  ComplexMatrix2 matrix() const;
  /// Real part of the off-diagonal element, |w| cos(phi).
  double w_bar() const;
  /// Analyzer matrix [[u, |w|], [|w|, u]] (rotation compensated, ellipticity not).
  RealMatrix2 rotation_matrix() const;
  /// Hermitian part seen by the bulk dynamics, [[u, w_bar], [w_bar, u]].
  RealMatrix2 effective_matrix() const;
};

ComplexMatrix2 chi0_matrix(double u, double w_abs, double phi);

struct PhononMode {
  SymmetryClass cls = SymmetryClass::A;
  double frequency = 1.0;  // angular
  double mass = 1.0;
  double coupling = 0.0;
  double beta = std::numeric_limits<double>::infinity();  // inf: ground state

  RealMatrix2 chi1() const { return chi1_matrix(cls, coupling); }
  void validate() const;
};

/// Pulse-sample interaction scales.
struct InteractionScales {
  double tau = 1.0;
  double volume = 1.0;         // quantization volume V
  double sample_volume = 1.0;  // V_S

  void validate() const;
};

struct SusceptibilityModel {
  Chi0 chi0;
  std::vector<PhononMode> modes;
  InteractionScales scales;
};

/// Mean phonon position and momentum.
struct PhononPhaseState {
  double mean_q = 0.0;
  double mean_p = 0.0;

  /// q = (R/(m Omega)) sin(phase), p = R cos(phase).
  static PhononPhaseState from_radius(double radius, double phase, double mass, double frequency);
  double radius(double mass, double frequency) const;
  double phase(double mass, double frequency) const;
};

}  // namespace isrs
