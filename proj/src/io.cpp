#include "isrs/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "isrs/errors.hpp"

namespace isrs::io {
namespace {

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigurationError("CSV line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  return v;
}

void dump(const nlohmann::json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map storage: keys already sorted
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::json(it.key()).dump() + ": ";
        dump(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(v[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_fixed17(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string format_shortest(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_fixed17(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string spectrogram_csv(const pipeline::Spectrogram& s) {
  s.validate();
  std::string out = "delay_fs,freq_thz,delta_I\n";
  out.reserve(out.size() + s.values.size() * 40);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    const std::string delay = format_shortest(s.delays_fs[r]);
    for (std::size_t c = 0; c < s.cols(); ++c) {
      out += delay;
      out += ',';
      out += format_shortest(s.freqs_thz[c]);
      out += ',';
      out += format_shortest(s.at(r, c));
      out += '\n';
    }
  }
  return out;
}

pipeline::Spectrogram parse_spectrogram_csv(const std::string& text, pipeline::Analyzer channel) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "delay_fs,freq_thz,delta_I")
    throw ConfigurationError("CSV line 1: expected header 'delay_fs,freq_thz,delta_I'");
  pipeline::Spectrogram s;
  s.channel = channel;
  std::vector<double> freqs_first_row;
  bool first_row_done = false;
  std::size_t col = 0;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = a == std::string::npos ? a : line.find(',', a + 1);
    if (b == std::string::npos) throw ConfigurationError("CSV line " + std::to_string(number) + ": expected 3 fields");
    const std::string_view view(line);
    const double delay = parse_double(view.substr(0, a), number);
    const double freq = parse_double(view.substr(a + 1, b - a - 1), number);
    const double value = parse_double(view.substr(b + 1), number);
    if (s.delays_fs.empty() || delay != s.delays_fs.back()) {
      if (!s.delays_fs.empty()) {
        if (!first_row_done) {
          s.freqs_thz = freqs_first_row;
          first_row_done = true;
        }
        if (col != s.freqs_thz.size())
          throw ConfigurationError("CSV line " + std::to_string(number) + ": row before has the wrong number of bins");
      }
      s.delays_fs.push_back(delay);
      col = 0;
    }
    if (!first_row_done) {
      freqs_first_row.push_back(freq);
    } else if (col >= s.freqs_thz.size() || s.freqs_thz[col] != freq) {
      throw ConfigurationError("CSV line " + std::to_string(number) + ": frequency axis differs from the first row");
    }
    s.values.push_back(value);
    ++col;
  }
  if (!first_row_done) s.freqs_thz = freqs_first_row;
  if (col != s.freqs_thz.size()) throw ConfigurationError("CSV: last row has the wrong number of bins");
  try {
    s.validate();
  } catch (const DimensionError& e) {
    throw ConfigurationError(std::string("CSV: ") + e.what());
  }
  return s;
}

std::string fourier_csv(const pipeline::FourierMap& map, const std::vector<double>& probe_freqs_thz) {
  if (probe_freqs_thz.size() != map.cols()) throw DimensionError("probe axis does not match the Fourier map");
  std::string out = "mode_freq_thz,probe_freq_thz,amplitude\n";
  for (std::size_t k = 0; k < map.freqs_thz.size(); ++k) {
    const std::string f = format_shortest(map.freqs_thz[k]);
    for (std::size_t c = 0; c < map.cols(); ++c)
      out += f + ',' + format_shortest(probe_freqs_thz[c]) + ',' + format_shortest(map.at(k, c)) + '\n';
  }
  return out;
}

std::string fourier_summed_csv(const pipeline::FourierMap& map) {
  std::string out = "mode_freq_thz,amplitude\n";
  for (std::size_t k = 0; k < map.freqs_thz.size(); ++k)
    out += format_shortest(map.freqs_thz[k]) + ',' + format_shortest(map.summed[k]) + '\n';
  return out;
}

std::string polar_csv(const pipeline::PolarScan& scan) {
  std::string out = "theta_deg,amplitude\n";
  for (std::size_t i = 0; i < scan.thetas_deg.size(); ++i)
    out += format_shortest(scan.thetas_deg[i]) + ',' + format_shortest(scan.amplitudes[i]) + '\n';
  return out;
}

std::string dump_json(const nlohmann::json& value) {
  std::string out;
  dump(value, 0, out);
  out += '\n';
  return out;
}

nlohmann::json to_json(const oracle::OracleReport& report) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"observable", r.observable},
                         {"coupling", r.coupling},
                         {"exact", r.exact},
                         {"perturbative", r.perturbative},
                         {"abs_error", r.abs_error},
                         {"rel_error", r.rel_error}});
  }
  j["fits"] = nlohmann::json::array();
  for (const auto& f : report.fits) {
    j["fits"].push_back({{"observable", f.observable},
                         {"exponent", f.exponent},
                         {"prefactor", f.prefactor},
                         {"status", std::string(oracle::to_string(f.status))},
                         {"gated", f.gated},
                         {"bounds", {f.lower, f.upper}},
                         {"passed", f.passed()}});
  }
  j["max_photon_drift"] = report.max_photon_drift;
  j["max_norm_drift"] = report.max_norm_drift;
  j["hermiticity_error"] = report.hermiticity_error;
  j["mean_field_difference"] = report.mean_field_difference;
  if (report.cutoff_robustness >= 0.0)
    j["cutoff_robustness"] = report.cutoff_robustness;
  else
    j["cutoff_robustness"] = nullptr;
  j["passed"] = report.passed();
  return j;
}

nlohmann::json to_json(const pipeline::FitResult& fit) {
  nlohmann::json j;
  j["model"] = std::string(pipeline::to_string(fit.model));
  j["amplitude"] = fit.amplitude;
  j["residual_norm"] = fit.residual_norm;
  if (fit.r_squared)
    j["r_squared"] = *fit.r_squared;
  else
    j["r_squared"] = nullptr;
  j["min_theta_deg"] = fit.min_theta_deg;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace isrs::io
