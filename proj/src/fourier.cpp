#include <cmath>
#include <numbers>
#include <string>

#include "isrs/errors.hpp"
#include "isrs/kernels.hpp"
#include "isrs/parallel.hpp"
#include "isrs/pipeline.hpp"

namespace isrs::pipeline {
namespace {

struct PositiveRows {
  std::vector<std::size_t> rows;
  std::vector<double> times_ps;
  std::vector<double> weights;
  double dt_ps = 0.0;
  double scale = 0.0;  // 2 / sum(weights)
};

PositiveRows positive_rows(const Spectrogram& s, Window window) {
  s.validate();
  PositiveRows out;
  for (std::size_t r = 0; r < s.rows(); ++r) {
    if (s.delays_fs[r] < 0.0) continue;
    out.rows.push_back(r);
    out.times_ps.push_back(units::ps_from_fs(s.delays_fs[r]));
  }
  const std::size_t n = out.rows.size();
  if (n < 2) throw DimensionError("delay Fourier analysis needs at least two rows with t >= 0");
  out.dt_ps = (out.times_ps.back() - out.times_ps.front()) / static_cast<double>(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double step = out.times_ps[k] - out.times_ps[k - 1];
    if (std::abs(step - out.dt_ps) > 1e-6 * out.dt_ps) throw DimensionError("delay axis must be uniform for the Fourier analysis");
  }
  out.weights.assign(n, 1.0);
  if (window == Window::hann)
    for (std::size_t k = 0; k < n; ++k)
      out.weights[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
  double total = 0.0;
  for (double w : out.weights) total += w;
  out.scale = 2.0 / total;
  return out;
}

// Windowed sum over rows of x_n exp(-i 2 pi f t_n), per probe bin.
void accumulate(const Spectrogram& s, const PositiveRows& p, double thz, std::span<double> re, std::span<double> im) {
  const std::size_t cols = s.cols();
  for (std::size_t k = 0; k < p.rows.size(); ++k) {
    const double arg = 2.0 * std::numbers::pi * thz * p.times_ps[k];
    const double w = p.weights[k];
    std::span<const double> row(s.values.data() + p.rows[k] * cols, cols);
    kernels::dft_accumulate(w * std::cos(arg), w * std::sin(arg), row, re, im);
  }
}

}  // namespace

std::string_view to_string(Window w) { return w == Window::rect ? "rect" : "hann"; }

Window window_from_string(std::string_view name) {
  if (name == "rect") return Window::rect;
  if (name == "hann") return Window::hann;
  throw ParameterError("unknown window '" + std::string(name) + "' (expected rect or hann)");
}

std::size_t FourierMap::nearest_bin(double thz) const {
  if (freqs_thz.empty()) throw DimensionError("empty Fourier map");
  std::size_t best = 0;
  for (std::size_t k = 1; k < freqs_thz.size(); ++k)
    if (std::abs(freqs_thz[k] - thz) < std::abs(freqs_thz[best] - thz)) best = k;
  return best;
}

std::optional<std::size_t> FourierMap::peak_in(double lo_thz, double hi_thz) const {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < freqs_thz.size(); ++k) {
    if (!(freqs_thz[k] > lo_thz && freqs_thz[k] < hi_thz)) continue;
    if (!best || summed[k] > summed[*best]) best = k;
  }
  return best;
}

FourierMap delay_fourier(const Spectrogram& s, Window window, int threads, double slowest_thz) {
  const PositiveRows p = positive_rows(s, window);
  const std::size_t n = p.rows.size();
  const std::size_t cols = s.cols();
  FourierMap out;
  out.samples = n;
  out.window_ps = static_cast<double>(n) * p.dt_ps;
  for (std::size_t k = 0; k <= n / 2; ++k) out.freqs_thz.push_back(static_cast<double>(k) / out.window_ps);
  out.amplitude.assign(out.freqs_thz.size() * cols, 0.0);
  out.summed.assign(out.freqs_thz.size(), 0.0);

  parallel_for(out.freqs_thz.size(), threads, [&](std::size_t k) {
    std::vector<double> re(cols, 0.0);
    std::vector<double> im(cols, 0.0);
    accumulate(s, p, out.freqs_thz[k], re, im);
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double a = p.scale * std::hypot(re[c], im[c]);
      out.amplitude[k * cols + c] = a;
      total += a;
    }
    out.summed[k] = total;
  });

  if (slowest_thz > 0.0 && out.window_ps * slowest_thz < 2.0)
    out.warnings.push_back("positive-delay window of " + std::to_string(out.window_ps) +
                           " ps holds fewer than two periods of the slowest mode");
  return out;
}

std::vector<std::complex<double>> dft_at(const Spectrogram& s, Window window, double thz) {
  const PositiveRows p = positive_rows(s, window);
  std::vector<double> re(s.cols(), 0.0);
  std::vector<double> im(s.cols(), 0.0);
  accumulate(s, p, thz, re, im);
  std::vector<std::complex<double>> out(s.cols());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = p.scale * std::complex<double>(re[c], im[c]);
  return out;
}

std::optional<double> quadrature_phase(const Spectrogram& x, const Spectrogram& y, double thz, Window window,
                                       double noise_floor) {
  auto phase_of = [&](const Spectrogram& s) -> std::optional<double> {
    const auto f = dft_at(s, window, thz);
    double peak = 0.0;
    for (const auto& v : f) peak = std::max(peak, std::abs(v));
    if (!(peak > noise_floor)) return std::nullopt;
    for (const auto& v : f)
      if (std::abs(v) >= (1.0 - 1e-9) * peak) return std::arg(v);
    return std::nullopt;
  };
  const auto px = phase_of(x);
  const auto py = phase_of(y);
  if (!px || !py) return std::nullopt;
  double d = std::fmod(units::deg_from_rad(*px - *py), 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace isrs::pipeline
