#include "isrs/fock.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "isrs/errors.hpp"
#include "isrs/expm.hpp"

namespace isrs::fock {
namespace {

using Vector = Eigen::VectorXcd;
using cd = std::complex<double>;

constexpr Polarization kPols[2] = {Polarization::x, Polarization::y};

Vector lower_photon(const FockBasis& basis, const Vector& psi, int mode) {
  Vector out = Vector::Zero(psi.size());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (psi[i] == cd{}) continue;
    const int n = basis.occupation(i, mode);
    if (n == 0) continue;
    out[basis.shift_photon(i, mode, -1)] += std::sqrt(static_cast<double>(n)) * psi[i];
  }
  return out;
}

Vector raise_photon(const FockBasis& basis, const Vector& psi, int mode) {
  Vector out = Vector::Zero(psi.size());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (psi[i] == cd{}) continue;
    const std::size_t target = basis.shift_photon(i, mode, +1);
    if (target == basis.dimension()) continue;
    out[target] += std::sqrt(static_cast<double>(basis.occupation(i, mode) + 1)) * psi[i];
  }
  return out;
}

Vector apply_phonon(const FockBasis& basis, const Vector& psi, char op) {
  Vector out = Vector::Zero(psi.size());
  const int delta = op == 'B' ? +1 : -1;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (psi[i] == cd{}) continue;
    const int n = basis.phonons(i);
    const std::size_t target = basis.shift_phonon(i, delta);
    if (target == basis.dimension()) continue;
    const double amp = delta > 0 ? std::sqrt(static_cast<double>(n + 1)) : std::sqrt(static_cast<double>(n));
    out[target] += amp * psi[i];
  }
  return out;
}

template <typename Apply>
cd weighted_expectation(const State& state, Apply&& apply) {
  cd sum{};
  for (const auto& [weight, psi] : state.components) sum += weight * psi.dot(apply(psi));
  return sum;
}

std::vector<double> truncated_coherent(double alpha, int cutoff) {
  std::vector<double> c(static_cast<std::size_t>(cutoff + 1));
  double term = 1.0;
  double norm = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    c[static_cast<std::size_t>(n)] = term;
    norm += term * term;
  }
  for (auto& v : c) v /= std::sqrt(norm);
  return c;
}

std::vector<cd> truncated_coherent(cd beta, int cutoff) {
  std::vector<cd> c(static_cast<std::size_t>(cutoff + 1));
  cd term = 1.0;
  double norm = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= beta / std::sqrt(static_cast<double>(n));
    c[static_cast<std::size_t>(n)] = term;
    norm += std::norm(term);
  }
  for (auto& v : c) v /= std::sqrt(norm);
  return c;
}

}  // namespace

std::string_view to_string(PhononInit init) {
  switch (init) {
    case PhononInit::vacuum: return "vacuum";
    case PhononInit::thermal: return "thermal";
    case PhononInit::coherent: return "coherent";
  }
  return "?";
}

PhononInit phonon_init_from_string(std::string_view name) {
  if (name == "vacuum") return PhononInit::vacuum;
  if (name == "thermal") return PhononInit::thermal;
  if (name == "coherent") return PhononInit::coherent;
  throw ParameterError("unknown phonon initial state '" + std::string(name) + "'");
}

std::size_t FockConfig::dimension(int bins) const {
  double dim = static_cast<double>(phonon_cutoff + 1) * std::pow(photon_cutoff + 1.0, 2.0 * bins);
  if (dim > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2))
    return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(dim);
}

void FockConfig::validate(int bins) const {
  if (bins < 1) throw ParameterError("oracle needs at least one frequency bin");
  if (photon_cutoff < 1) throw ParameterError("photon cutoff must be >= 1");
  if (phonon_cutoff < 1) throw ParameterError("phonon cutoff must be >= 1");
  if (phonon_init == PhononInit::thermal && !(beta >= 0.0))
    throw ParameterError("thermal phonon state needs beta >= 0");
  const std::size_t dim = dimension(bins);
  if (dim > dimension_cap)
    throw ConfigurationError("oracle Hilbert dimension " + std::to_string(dim) + " exceeds cap " +
                             std::to_string(dimension_cap));
}

FockBasis::FockBasis(int bins, int photon_cutoff, int phonon_cutoff)
    : bins_(bins), photon_cutoff_(photon_cutoff), phonon_cutoff_(phonon_cutoff) {
  if (bins < 1 || photon_cutoff < 1 || phonon_cutoff < 1) throw ParameterError("invalid Fock basis sizes");
  stride_.resize(static_cast<std::size_t>(modes()));
  std::size_t stride = static_cast<std::size_t>(phonon_cutoff + 1);
  for (int m = 0; m < modes(); ++m) {
    stride_[static_cast<std::size_t>(m)] = stride;
    stride *= static_cast<std::size_t>(photon_cutoff + 1);
  }
  dimension_ = stride;
}

int FockBasis::occupation(std::size_t index, int mode) const {
  return static_cast<int>((index / stride_[static_cast<std::size_t>(mode)]) % (photon_cutoff_ + 1));
}

int FockBasis::photon_number(std::size_t index) const {
  int total = 0;
  for (int m = 0; m < modes(); ++m) total += occupation(index, m);
  return total;
}

std::size_t FockBasis::shift_photon(std::size_t index, int mode, int delta) const {
  const int n = occupation(index, mode) + delta;
  if (n < 0 || n > photon_cutoff_) return dimension_;
  const std::size_t stride = stride_[static_cast<std::size_t>(mode)];
  return delta > 0 ? index + stride : index - stride;
}

std::size_t FockBasis::shift_phonon(std::size_t index, int delta) const {
  const int n = phonons(index) + delta;
  if (n < 0 || n > phonon_cutoff_) return dimension_;
  return delta > 0 ? index + 1 : index - 1;
}

OperatorMatrix::OperatorMatrix(FockBasis basis) : basis_(basis) {
  const std::size_t dim = basis_.dimension();
  block_of_.resize(dim);
  local_.resize(dim);
  std::map<int, int> sector;
  for (std::size_t i = 0; i < dim; ++i) {
    const int n = basis_.photon_number(i);
    auto [it, inserted] = sector.try_emplace(n, static_cast<int>(blocks_.size()));
    if (inserted) blocks_.push_back(Block{n, {}, {}});
    auto& block = blocks_[static_cast<std::size_t>(it->second)];
    block_of_[i] = it->second;
    local_[i] = static_cast<Eigen::Index>(block.states.size());
    block.states.push_back(i);
  }
  for (auto& block : blocks_) {
    const auto n = static_cast<Eigen::Index>(block.states.size());
    block.matrix = Eigen::MatrixXcd::Zero(n, n);
  }
}

void OperatorMatrix::add(std::size_t row, std::size_t col, std::complex<double> value) {
  if (value == cd{}) return;
  if (block_of_[row] != block_of_[col]) {
    leaks_.push_back({row, col, value});
    return;
  }
  blocks_[static_cast<std::size_t>(block_of_[row])].matrix(local_[row], local_[col]) += value;
}

Eigen::MatrixXcd OperatorMatrix::dense() const {
  const auto dim = static_cast<Eigen::Index>(basis_.dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& block : blocks_) {
    for (std::size_t r = 0; r < block.states.size(); ++r)
      for (std::size_t c = 0; c < block.states.size(); ++c)
        out(static_cast<Eigen::Index>(block.states[r]), static_cast<Eigen::Index>(block.states[c])) =
            block.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  for (const auto& e : leaks_)
    out(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  return out;
}

double OperatorMatrix::hermiticity_error() const {
  double worst = 0.0;
  for (const auto& block : blocks_) worst = std::max(worst, linalg::hermiticity_error(block.matrix));
  return worst;
}

bool OperatorMatrix::is_zero() const {
  if (!leaks_.empty()) return false;
  for (const auto& block : blocks_)
    if (block.matrix.size() > 0 && block.matrix.cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

OperatorMatrix build_total_hamiltonian(const FockConfig& config, const OracleModel& model,
                                       const HamiltonianTerms& terms) {
  const auto& grid = model.grid;
  const int bins = static_cast<int>(grid.size());
  config.validate(bins);
  model.mode.validate();
  model.scales.validate();
  const int shift = grid.phonon_offset(model.mode.frequency);

  FockBasis basis(bins, config.photon_cutoff, config.phonon_cutoff);
  OperatorMatrix h(basis);
  const std::size_t dim = basis.dimension();

  const auto& s = model.scales;
  const double ref_scale = -s.sample_volume / (2.0 * s.volume);
  const double ram_scale =
      -std::sqrt(s.sample_volume) / (2.0 * s.volume * std::sqrt(2.0 * model.mode.mass * model.mode.frequency));
  const double q_scale = 1.0 / std::sqrt(2.0 * model.mode.mass * model.mode.frequency * s.sample_volume);
  const RealMatrix2 chi0 = model.chi0.effective_matrix();
  const RealMatrix2 chi1 = model.mode.chi1();

  auto weight = [&](int slot) { return grid.weight(grid.bin(static_cast<std::size_t>(slot)), model.variant); };

  // a^dag_i a_k (i != k) on basis state col; returns {row, amplitude}.
  auto hop = [&](std::size_t col, int i, int k) -> std::pair<std::size_t, double> {
    const int nk = basis.occupation(col, k);
    if (nk == 0) return {dim, 0.0};
    const std::size_t mid = basis.shift_photon(col, k, -1);
    const std::size_t row = basis.shift_photon(mid, i, +1);
    if (row == dim) return {dim, 0.0};
    return {row, std::sqrt(static_cast<double>(nk)) * std::sqrt(static_cast<double>(basis.occupation(mid, i) + 1))};
  };
  // Phonon ladder on top of a photon move; delta = 0 is the identity.
  auto phonon = [&](std::size_t idx, int delta) -> std::pair<std::size_t, double> {
    if (idx == dim) return {dim, 0.0};
    if (delta == 0) return {idx, 1.0};
    const int n = basis.phonons(idx);
    const std::size_t row = basis.shift_phonon(idx, delta);
    if (row == dim) return {dim, 0.0};
    return {row, std::sqrt(static_cast<double>(delta > 0 ? n + 1 : n))};
  };
  auto emit = [&](std::size_t col, std::pair<std::size_t, double> photon_move, int phonon_delta, double coef) {
    if (coef == 0.0 || photon_move.first == dim) return;
    const auto [row, amp] = phonon(photon_move.first, phonon_delta);
    if (row == dim) return;
    h.add(row, col, coef * photon_move.second * amp);
  };

  // Mean-field replaces q by a scalar; otherwise q = q_scale (b + b^dag).
  std::vector<std::pair<int, double>> q_parts;
  if (terms.mean_field_q) {
    q_parts.push_back({0, terms.mean_q});
  } else {
    q_parts.push_back({-1, q_scale});
    q_parts.push_back({+1, q_scale});
  }

  for (std::size_t col = 0; col < dim; ++col) {
    for (int slot = 0; slot < bins; ++slot) {
      const double w = weight(slot);
      const int mx = basis.mode(Polarization::x, slot);
      const int my = basis.mode(Polarization::y, slot);
      // sum_{l l'} chi_{l l'} (a^dag_l a_l' + a_l a^dag_l'): diagonal (2n + 1), off-diagonal 2 chi_xy hops.
      auto refractive = [&](const RealMatrix2& chi, double coef_scale, int phonon_delta) {
        for (int l = 0; l < 2; ++l) {
          const int m = basis.mode(kPols[l], slot);
          const double diag = chi[l][l] * (2.0 * basis.occupation(col, m) + 1.0);
          emit(col, {col, 1.0}, phonon_delta, coef_scale * w * diag);
        }
        const double off = 2.0 * chi[0][1] * coef_scale * w;
        emit(col, hop(col, mx, my), phonon_delta, off);
        emit(col, hop(col, my, mx), phonon_delta, off);
      };
      if (terms.refractive_equilibrium) refractive(chi0, ref_scale, 0);
      if (terms.refractive_phonon)
        for (const auto& [delta, factor] : q_parts) refractive(chi1, ref_scale * factor, delta);

      if (terms.raman && slot + shift < bins) {
        // a^dag_{l j} a_{l' j+s} b^dag + a^dag_{l' j+s} a_{l j} b
        for (int l = 0; l < 2; ++l) {
          for (int lp = 0; lp < 2; ++lp) {
            const double coef = ram_scale * w * chi1[l][lp];
            if (coef == 0.0) continue;
            const int lo = basis.mode(kPols[l], slot);
            const int hi = basis.mode(kPols[lp], slot + shift);
            emit(col, hop(col, lo, hi), +1, coef);
            emit(col, hop(col, hi, lo), -1, coef);
          }
        }
      }
    }
  }
  return h;
}

double State::trace() const {
  double t = 0.0;
  for (const auto& [w, psi] : components) t += w * psi.squaredNorm();
  return t;
}

State initial_state(const FockBasis& basis, const FockConfig& config, const PulseState& pulse,
                    double phonon_frequency) {
  if (static_cast<int>(pulse.grid().size()) != basis.bins())
    throw DimensionError("pulse grid does not match the oracle basis");
  std::vector<std::vector<double>> photon(static_cast<std::size_t>(basis.modes()));
  for (int l = 0; l < 2; ++l)
    for (int slot = 0; slot < basis.bins(); ++slot)
      photon[static_cast<std::size_t>(basis.mode(kPols[l], slot))] =
          truncated_coherent(pulse.moduli(kPols[l])[static_cast<std::size_t>(slot)], basis.photon_cutoff());

  std::vector<std::pair<double, std::vector<cd>>> phonon_states;
  const int pc = basis.phonon_cutoff();
  switch (config.phonon_init) {
    case PhononInit::vacuum: {
      std::vector<cd> v(static_cast<std::size_t>(pc + 1));
      v[0] = 1.0;
      phonon_states.push_back({1.0, v});
      break;
    }
    case PhononInit::coherent:
      phonon_states.push_back({1.0, truncated_coherent(config.displacement, pc)});
      break;
    case PhononInit::thermal: {
      std::vector<double> weights(static_cast<std::size_t>(pc + 1));
      double z = 0.0;
      for (int n = 0; n <= pc; ++n) z += weights[static_cast<std::size_t>(n)] = std::exp(-config.beta * phonon_frequency * n);
      for (int n = 0; n <= pc; ++n) {
        std::vector<cd> v(static_cast<std::size_t>(pc + 1));
        v[static_cast<std::size_t>(n)] = 1.0;
        phonon_states.push_back({weights[static_cast<std::size_t>(n)] / z, v});
      }
      break;
    }
  }

  State state;
  for (const auto& [w, ph] : phonon_states) {
    Vector psi(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
      cd amp = ph[static_cast<std::size_t>(basis.phonons(i))];
      for (int m = 0; m < basis.modes() && amp != cd{}; ++m)
        amp *= photon[static_cast<std::size_t>(m)][static_cast<std::size_t>(basis.occupation(i, m))];
      psi[static_cast<Eigen::Index>(i)] = amp;
    }
    state.components.push_back({w, std::move(psi)});
  }
  return state;
}

Propagator::Propagator(const OperatorMatrix& h, double tau, PropagationMethod method) : basis_(h.basis()) {
  if (h.leaked_entries() != 0) throw ConfigurationError("Hamiltonian couples photon-number sectors");
  for (const auto& block : h.blocks()) {
    states_.push_back(block.states);
    blocks_.push_back(method == PropagationMethod::pade ? linalg::unitary_propagator_pade(block.matrix, tau)
                                                        : linalg::unitary_propagator_eig(block.matrix, tau));
  }
}

Vector Propagator::apply(const Vector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != basis_.dimension())
    throw DimensionError("state does not match the propagator basis");
  if (!psi.allFinite()) throw ParameterError("state has non-finite entries");
  Vector out(psi.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = states_[b];
    Vector sub(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub[static_cast<Eigen::Index>(k)] = psi[static_cast<Eigen::Index>(idx[k])];
    const Vector res = blocks_[b] * sub;
    for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Eigen::Index>(idx[k])] = res[static_cast<Eigen::Index>(k)];
  }
  return out;
}

State Propagator::apply(const State& state) const {
  State out;
  for (const auto& [w, psi] : state.components) out.components.push_back({w, apply(psi)});
  return out;
}

double Propagator::unitarity_error() const {
  double worst = 0.0;
  for (const auto& u : blocks_) worst = std::max(worst, linalg::unitarity_error(u));
  return worst;
}

State propagate(const State& state, const OperatorMatrix& h, double tau, PropagationMethod method) {
  return Propagator(h, tau, method).apply(state);
}

double expect(const State& state, const FockBasis& basis, const Observable& o, const PhononUnits& units) {
  cd value{};
  switch (o.kind) {
    case ObservableKind::q: {
      const double scale = 1.0 / std::sqrt(2.0 * units.mass * units.frequency * units.sample_volume);
      value = scale * (expect_phonon(state, basis, "b") + expect_phonon(state, basis, "B"));
      break;
    }
    case ObservableKind::p: {
      const double scale = std::sqrt(units.mass * units.frequency / (2.0 * units.sample_volume));
      value = cd(0.0, scale) * (expect_phonon(state, basis, "B") - expect_phonon(state, basis, "b"));
      break;
    }
    case ObservableKind::phonon_number:
      value = expect_phonon(state, basis, "Bb");
      break;
    case ObservableKind::photon_number: {
      const int m = basis.mode(o.polarization, o.slot);
      value = weighted_expectation(state, [&](const Vector& psi) {
        return raise_photon(basis, lower_photon(basis, psi, m), m);
      });
      break;
    }
    case ObservableKind::intensity: {
      const int l = static_cast<int>(o.polarization);
      for (int mu = 0; mu < 2; ++mu) {
        for (int mup = 0; mup < 2; ++mup) {
          const cd coef = std::conj(o.analyzer[l][mu]) * o.analyzer[l][mup];
          if (coef == cd{}) continue;
          const int a = basis.mode(kPols[mu], o.slot);
          const int b = basis.mode(kPols[mup], o.slot);
          value += coef * weighted_expectation(state, [&](const Vector& psi) {
            return raise_photon(basis, lower_photon(basis, psi, b), a);
          });
        }
      }
      break;
    }
  }
  if (std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value.real())))
    throw std::logic_error("expectation of a hermitian observable has an imaginary part");
  return value.real();
}

std::complex<double> expect_annihilation(const State& state, const FockBasis& basis, int mode) {
  return weighted_expectation(state, [&](const Vector& psi) { return lower_photon(basis, psi, mode); });
}

std::complex<double> expect_phonon(const State& state, const FockBasis& basis, std::string_view word) {
  return weighted_expectation(state, [&](const Vector& psi) {
    Vector v = psi;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      if (*it != 'b' && *it != 'B') throw std::invalid_argument("phonon word uses only 'b' and 'B'");
      v = apply_phonon(basis, v, *it);
    }
    return v;
  });
}

double expect_g_dagger_g(const State& state, const FockBasis& basis, const OracleModel& model) {
  const auto& grid = model.grid;
  const int bins = static_cast<int>(grid.size());
  const int shift = grid.phonon_offset(model.mode.frequency);
  const RealMatrix2 chi1 = model.mode.chi1();
  double total = 0.0;
  for (const auto& [w, psi] : state.components) {
    Vector g = Vector::Zero(psi.size());
    for (int slot = 0; slot + shift < bins; ++slot) {
      const double wj = grid.weight(grid.bin(static_cast<std::size_t>(slot)), model.variant);
      for (int l = 0; l < 2; ++l)
        for (int lp = 0; lp < 2; ++lp) {
          if (chi1[l][lp] == 0.0) continue;
          g += chi1[l][lp] * wj *
               raise_photon(basis, lower_photon(basis, psi, basis.mode(kPols[lp], slot + shift)),
                            basis.mode(kPols[l], slot));
        }
    }
    total += w * g.squaredNorm();
  }
  return total;
}

double total_photon_number(const State& state, const FockBasis& basis) {
  double total = 0.0;
  for (const auto& [w, psi] : state.components)
    for (std::size_t i = 0; i < basis.dimension(); ++i)
      total += w * std::norm(psi[static_cast<Eigen::Index>(i)]) * basis.photon_number(i);
  return total;
}

}  // namespace isrs::fock
