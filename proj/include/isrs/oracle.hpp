#pragma once

// Exact-versus-closed-form comparison on the Fock oracle.

#include <string>
#include <vector>

#include "isrs/fock.hpp"
#include "isrs/model.hpp"

namespace isrs::oracle {

struct OracleRow {
  std::string observable;
  double coupling = 0.0;
  double exact = 0.0;
  double perturbative = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

enum class FitStatus { ok, inconclusive, exact_zero };

std::string_view to_string(FitStatus s);

/// rel_error ~ prefactor * coupling^exponent by least squares in log-log.
struct ExponentFit {
  std::string observable;
  double exponent = 0.0;
  double prefactor = 0.0;
  FitStatus status = FitStatus::ok;
  bool gated = true;      // part of the pass/fail decision
  double lower = 1.8;
  double upper = 2.2;

  bool passed() const;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  std::vector<ExponentFit> fits;
  double max_photon_drift = 0.0;
  double max_norm_drift = 0.0;
  double hermiticity_error = 0.0;
  /// max |<O>_operator-q - <O>_mean-field| over p and bin intensities (full Hamiltonian).
  double mean_field_difference = 0.0;
  /// max relative change of the observables when phonon_cutoff is doubled; negative if not run.
  double cutoff_robustness = -1.0;

  bool passed() const;
};

struct StudyConfig {
  fock::FockConfig fock;
  FrequencyGrid grid{2.0 * 3.141592653589793 * 380.0, 2.0 * 3.141592653589793 * 4.05, 1};
  std::vector<double> amplitudes{0.3, 0.5, 0.4};  // x-polarized moduli, one per bin
  PhononMode mode{SymmetryClass::A, 2.0 * 3.141592653589793 * 4.05, 1.0, 1.0};
  InteractionScales scales;
  Chi0 chi0{0.0, 0.0, 0.0};
  std::vector<double> couplings{1e-3, 5e-4, 2.5e-4};
  fock::PropagationMethod method = fock::PropagationMethod::eigen;
  bool run_mean_field_diagnostic = true;
  bool run_cutoff_diagnostic = false;
  int threads = 1;

  void validate() const;
};

/// Propagates the truncated coherent pump under H_Ram alone and compares
/// p kick, first-order transmitted intensity and phonon number with their
/// closed forms evaluated on the same truncated initial state.
OracleReport convergence_study(const StudyConfig& config);

/// Least-squares slope of log(err) against log(coupling).
ExponentFit fit_exponent(const std::string& name, const std::vector<double>& couplings,
                         const std::vector<double>& errors);

}  // namespace isrs::oracle
