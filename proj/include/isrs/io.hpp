#pragma once

// CSV and JSON serialization. All writers are byte-deterministic: LF line
// endings, fixed column order, negative zero printed as 0.

#include <string>

#include "json.hpp"

#include "isrs/oracle.hpp"
#include "isrs/pipeline.hpp"

namespace isrs::io {

/// Shortest decimal that parses back to the same double.
std::string format_shortest(double v);
/// printf("%.17g"); non-finite values become "null".
std::string format_fixed17(double v);

std::string spectrogram_csv(const pipeline::Spectrogram& s);
pipeline::Spectrogram parse_spectrogram_csv(const std::string& text, pipeline::Analyzer channel);

/// Columns mode_freq_thz,probe_freq_thz,amplitude (mode-major).
std::string fourier_csv(const pipeline::FourierMap& map, const std::vector<double>& probe_freqs_thz);
/// Columns mode_freq_thz,amplitude.
std::string fourier_summed_csv(const pipeline::FourierMap& map);
/// Columns theta_deg,amplitude.
std::string polar_csv(const pipeline::PolarScan& scan);

/// Sorted keys, two-space indent, numbers as %.17g.
std::string dump_json(const nlohmann::json& value);

nlohmann::json to_json(const oracle::OracleReport& report);
nlohmann::json to_json(const pipeline::FitResult& fit);

std::string read_file(const std::string& path);
/// Writes bytes verbatim; throws std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace isrs::io
