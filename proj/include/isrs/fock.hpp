#pragma once

// Exact light-phonon dynamics on a truncated Fock space.
//
// Basis: 2*bins photon modes (mode index = polarization * bins + bin slot,
// bin slot 0 being the lowest frequency) and one phonon. A basis index is
//   phonon + (phonon_cutoff + 1) * sum_i n_i (photon_cutoff + 1)^i
// Every term of the Hamiltonian conserves the total photon number, so
// operators are stored as dense blocks, one per photon-number sector.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isrs/model.hpp"

namespace isrs::fock {

enum class PhononInit { vacuum, thermal, coherent };

std::string_view to_string(PhononInit init);
PhononInit phonon_init_from_string(std::string_view name);

struct FockConfig {
  int photon_cutoff = 2;
  int phonon_cutoff = 4;
  PhononInit phonon_init = PhononInit::vacuum;
  double beta = 1.0;                          // thermal initial state
  std::complex<double> displacement{0.0, 0.0};  // <b> for a coherent initial state
  std::size_t dimension_cap = 20000;

  /// (photon_cutoff + 1)^(2 bins) * (phonon_cutoff + 1)
  std::size_t dimension(int bins) const;
  void validate(int bins) const;
};

class FockBasis {
 public:
  FockBasis(int bins, int photon_cutoff, int phonon_cutoff);

  int bins() const { return bins_; }
  int modes() const { return 2 * bins_; }
  int photon_cutoff() const { return photon_cutoff_; }
  int phonon_cutoff() const { return phonon_cutoff_; }
  std::size_t dimension() const { return dimension_; }

  int mode(Polarization p, int slot) const { return static_cast<int>(p) * bins_ + slot; }
  int occupation(std::size_t index, int mode) const;
  int phonons(std::size_t index) const { return static_cast<int>(index % (phonon_cutoff_ + 1)); }
  int photon_number(std::size_t index) const;
  /// Index of the state with one quantum more (delta = +1) or less (-1) in
  /// the photon mode; dimension() when that leaves the truncated space.
  std::size_t shift_photon(std::size_t index, int mode, int delta) const;
  std::size_t shift_phonon(std::size_t index, int delta) const;

  bool operator==(const FockBasis&) const = default;

 private:
  int bins_;
  int photon_cutoff_;
  int phonon_cutoff_;
  std::size_t dimension_;
  std::vector<std::size_t> stride_;
};

/// Dense block-diagonal operator. Entries that would couple different
/// photon-number sectors are kept aside and counted; they are included in
/// dense() so conservation can be checked on the full matrix.
class OperatorMatrix {
 public:
  struct Block {
    int photons = 0;
    std::vector<std::size_t> states;
    Eigen::MatrixXcd matrix;
  };
  struct Entry {
    std::size_t row;
    std::size_t col;
    std::complex<double> value;
  };

  explicit OperatorMatrix(FockBasis basis);

  void add(std::size_t row, std::size_t col, std::complex<double> value);

  const FockBasis& basis() const { return basis_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t leaked_entries() const { return leaks_.size(); }
  Eigen::MatrixXcd dense() const;
  /// max |H - H^dag| over all blocks.
  double hermiticity_error() const;
  bool is_zero() const;

 private:
  FockBasis basis_;
  std::vector<Block> blocks_;
  std::vector<int> block_of_;
  std::vector<Eigen::Index> local_;
  std::vector<Entry> leaks_;
};

/// Which parts of H_Ref^(0) + H_Ref^(1) + H_Ram are assembled. With
/// mean_field_q, the phonon position operator inside H_Ref^(1) is replaced
/// by the scalar mean_q.
struct HamiltonianTerms {
  bool refractive_equilibrium = true;
  bool refractive_phonon = true;
  bool raman = true;
  bool mean_field_q = false;
  double mean_q = 0.0;
};

struct OracleModel {
  FrequencyGrid grid;
  Chi0 chi0;
  PhononMode mode;
  InteractionScales scales;
  WeightVariant variant = WeightVariant::sm;
};

OperatorMatrix build_total_hamiltonian(const FockConfig& config, const OracleModel& model,
                                       const HamiltonianTerms& terms = {});

/// A weighted mixture of pure states (a single component for pure states).
struct State {
  std::vector<std::pair<double, Eigen::VectorXcd>> components;

  double trace() const;
};

/// Truncated product of coherent photon states with the pulse amplitudes,
/// tensored with the configured phonon state. Thermal phonons are expanded
/// over number states with normalized truncated Gibbs weights.
State initial_state(const FockBasis& basis, const FockConfig& config, const PulseState& pulse,
                    double phonon_frequency);

enum class PropagationMethod { pade, eigen };

/// exp(-i tau H) held block by block.
class Propagator {
 public:
  Propagator(const OperatorMatrix& h, double tau, PropagationMethod method = PropagationMethod::pade);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  State apply(const State& state) const;
  double unitarity_error() const;

 private:
  FockBasis basis_;
  std::vector<std::vector<std::size_t>> states_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

State propagate(const State& state, const OperatorMatrix& h, double tau,
                PropagationMethod method = PropagationMethod::pade);

enum class ObservableKind { q, p, phonon_number, photon_number, intensity };

struct Observable {
  ObservableKind kind = ObservableKind::q;
  Polarization polarization = Polarization::x;
  int slot = 0;
  /// Analyzer unitary for intensity: I = sum conj(M_{l mu}) M_{l mu'} a^dag_mu a_mu'.
  ComplexMatrix2 analyzer{{{1.0, 0.0}, {0.0, 1.0}}};

  static Observable position() { return {ObservableKind::q}; }
  static Observable momentum() { return {ObservableKind::p}; }
  static Observable phonons() { return {ObservableKind::phonon_number}; }
  static Observable photons(Polarization p, int slot) { return {ObservableKind::photon_number, p, slot}; }
};

/// Phonon scale factors for q and p.
struct PhononUnits {
  double mass = 1.0;
  double frequency = 1.0;
  double sample_volume = 1.0;
};

/// <O> for a hermitian observable; throws if the imaginary part exceeds 1e-12.
double expect(const State& state, const FockBasis& basis, const Observable& observable,
              const PhononUnits& units);

/// Raw moments used to evaluate the closed forms on the same state.
std::complex<double> expect_annihilation(const State& state, const FockBasis& basis, int mode);
/// Phonon operator word read as a product, 'b' = b and 'B' = b^dag;
/// "Bb" is the number operator and "bb" is b^2.
std::complex<double> expect_phonon(const State& state, const FockBasis& basis, std::string_view word);
/// <g^dag g> for g = sum chi1_{l l'} W_j a^dag_{l j} a_{l' j+s}.
double expect_g_dagger_g(const State& state, const FockBasis& basis, const OracleModel& model);
double total_photon_number(const State& state, const FockBasis& basis);

}  // namespace isrs::fock
