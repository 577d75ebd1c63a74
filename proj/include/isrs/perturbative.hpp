#pragma once

// Closed-form first/second order results for the pump and the probe.
//
// Conventions: hbar = 1, angular frequencies, photon amplitudes are the
// nonnegative moduli |alpha_{lambda j}|. Bins outside the grid read as zero.
// "Weighted" sums carry the per-bin frequency weight W_j, which is omega_j
// (main-text variant) or omega_0 (sm variant).

#include <optional>
#include <vector>

#include "isrs/model.hpp"

namespace isrs::perturbative {

/// gamma = sum_{l l' j} chi1_{l l'} W_j |alpha_{l j}| |alpha_{l' j+s}|
/// eta   = sum_j |alpha_j| |alpha_{j+s}|       (unsplit profile, no weight)
struct OverlapSum {
  double gamma = 0.0;
  double eta = 0.0;
  WeightVariant variant = WeightVariant::sm;
};

OverlapSum overlap_sums(const PulseState& pulse, const RealMatrix2& chi1, double phonon_frequency,
                        WeightVariant variant);

/// sum_j W_j |alpha_j| |alpha_{j+s}| over the unsplit profile.
double weighted_eta(const PulseState& pulse, int shift, WeightVariant variant);

/// <q> unchanged, <p> += tau gamma / (2V).
PhononPhaseState phonon_kick(const PhononPhaseState& before, const OverlapSum& overlap,
                             const InteractionScales& scales);

/// <N(tau)> = <N(0)> + (tau V_S / 2 V m Omega) gamma <p(0)> + (tau^2 V_S / 8 V^2 m Omega) <g^dag g>.
/// Without an explicit <g^dag g> the light is treated as classical (<g^dag g> = gamma^2).
double phonon_number(double n_before, double p_before, const OverlapSum& overlap,
                     const InteractionScales& scales, double mass, double frequency,
                     std::optional<double> g_dagger_g = std::nullopt);

struct PumpTransmission {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> total;
};

/// Transmitted pump spectrum for a pump hitting the phonon at equilibrium.
/// The gamma'_j term is neglected.
PumpTransmission pump_transmission(const PulseState& pump, const PhononMode& mode,
                                   const InteractionScales& scales, WeightVariant variant);

/// Intensity-weighted mean angular frequency of a spectrum on the grid.
double spectral_centroid(const FrequencyGrid& grid, const std::vector<double>& intensity);

/// Free harmonic evolution from the kicked state (q = 0, p = R). t < 0
/// returns the equilibrium (0, 0). t is in ps, Omega in rad/ps.
PhononPhaseState free_evolve(double radius, double frequency, double mass, double t);

/// R(s) = cos(s chi) - i sin(s chi) for chi = [[u, w_bar], [w_bar, u]].
ComplexMatrix2 rotation_matrix(double s, const RealMatrix2& chi_effective);

struct AnalyzerCoefficients {
  double a_y = 1.0;
  double b_y = 0.0;
  std::complex<double> d_y{0.0, 0.0};

  double a_x() const { return b_y; }
  double b_x() const { return a_y; }
  std::complex<double> d_x() const { return -d_y; }
};

/// Closed forms cos^2, sin^2 and (i/2) sin(2x) of x = tau (w_bar - w).
AnalyzerCoefficients analyzer_coefficients(double tau, double w_bar, double w);

/// The same coefficients assembled from the bulk and analyzer rotation
/// matrices, element by element.
AnalyzerCoefficients analyzer_coefficients_from_rotations(double tau, const Chi0& chi0);

/// Leading-order phonon radius after the pump, written through the polar
/// laws: R = (tau / 2V) * f(theta) * eta_w with f = a, c_L cos 2theta,
/// -c_T sin 2theta and eta_w the weighted pump overlap.
double mode_radius(SymmetryClass cls, double coupling, double theta, double weighted_pump_eta,
                   const InteractionScales& scales);

/// W_k |alpha_k| (|alpha_{k+s}| - |alpha_{k-s}|) for an x-polarized probe.
std::vector<double> isrs_pattern(const PulseState& probe, int shift, WeightVariant variant);

/// |alpha_k| (2|alpha_k| + |alpha_{k+s}| + |alpha_{k-s}|).
std::vector<double> refractive_pattern(const PulseState& probe, int shift);

enum class Analyzer { x_prime, y_prime };

struct ProbeModulation {
  std::vector<double> lrm;   // driven by <q>
  std::vector<double> isrs;  // driven by <p>
};

/// Probe modulation for an arbitrary phonon phase-space point. The probe
/// must be x-polarized. The position-driven part is non-zero only for E_T
/// (A and E_L vanish after the s-integration) and is kept to first order in
/// tau |w|; the momentum-driven part is zeroth order in tau |w| and appears
/// only behind the x' analyzer.
ProbeModulation generic_probe_modulation(const PulseState& probe, const PhononPhaseState& phonon,
                                         const PhononMode& mode, const Chi0& chi0,
                                         const InteractionScales& scales, WeightVariant variant,
                                         Analyzer analyzer);

/// Everything needed to turn a mode list into a delay-resolved signal.
struct ProbeGeometry {
  PulseState pump;
  PulseState probe;
  Chi0 chi0;
  InteractionScales scales;
  WeightVariant variant = WeightVariant::sm;
};

/// Per-bin probe modulation at delay t (ps), summing modes independently.
std::vector<double> probe_response(const ProbeGeometry& geometry, const std::vector<PhononMode>& modes,
                                   double t, Analyzer analyzer);

inline std::vector<double> probe_response_x(const ProbeGeometry& g, const std::vector<PhononMode>& modes,
                                            double t) {
  return probe_response(g, modes, t, Analyzer::x_prime);
}
inline std::vector<double> probe_response_y(const ProbeGeometry& g, const std::vector<PhononMode>& modes,
                                            double t) {
  return probe_response(g, modes, t, Analyzer::y_prime);
}

/// Phonon second moments entering gamma'_j.
struct PhononMoments {
  double n = 0.0;                 // <b^dag b>
  double n_plus_one = 1.0;        // <b b^dag>
  std::complex<double> bb{};      // <b^2>
  std::complex<double> bdbd{};    // <b^dag 2>

  static PhononMoments vacuum() { return {0.0, 1.0, {}, {}}; }
  /// Thermal occupation nbar = 1 / (exp(beta Omega) - 1).
  static PhononMoments thermal(double beta, double frequency);
};

/// Second-order photon term gamma'_j for polarization mu, evaluated from
/// the two-line expression with effective coupling
/// chi~ = -sqrt(V_S) / (2V sqrt(2 m Omega)) chi1 and weights W_j.
/// Offsets beyond the grid (including 2 Omega / delta) read as zero.
std::vector<double> gamma_prime(const PulseState& probe, const PhononMode& mode,
                                const InteractionScales& scales, const PhononMoments& moments,
                                Polarization mu, WeightVariant variant);

}  // namespace isrs::perturbative
