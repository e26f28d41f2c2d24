#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sagin {

enum class CsiType { Instantaneous, ModeratelyDelayed, Delayed, None };

const char* to_string(CsiType type);
CsiType csi_from_string(const std::string& name);

// CSI latency model: past time, feedback delay, coherence time, and the
// acquisition instant within the coherence slot (all seconds).
struct CsiLatency {
  double t_p = 0.0;
  double t_f = 0.0;
  double t_c = 1.0;
  double t_acq = 0.0;
};

// Classifies CSI timeliness from the latency ratio t_f / (t_c - t_p).
// Zero feedback delay is instantaneous; a ratio below one is instantaneous
// when the acquisition instant falls inside [t_p, t_p + t_f] and moderately
// delayed past that breakpoint; a ratio of one or more is delayed.
// Throws std::invalid_argument when the latency invariants do not hold.
CsiType classify_csi(const CsiLatency& lat);

struct SystemConfig {
  int kd = 2;   // D2D pair count
  int n = 2;    // antennas per terrestrial terminal
  int ms = 6;   // satellite antennas
  int l = 16;   // RIS element count
  double p_s = 1.0;     // satellite transmit power, linear watts
  double p_k = 1.0;     // D2D transmit power, linear watts
  double sigma2 = 1.0;  // noise variance, linear watts
  std::uint64_t seed = 1;
  std::vector<double> snr_grid_db{40.0, 60.0};
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Report-style validation; never throws. An under-provisioned RIS
// (l < kd^2 * n^2) is a warning, not an error: the reflection solver still
// returns a least-squares design with a reported residual.
ValidationReport validate(const SystemConfig& cfg);

// Scalar nulling constraints per slot for the single-slot schemes.
long long ris_elements_required(int kd, int n);

// JSON document with exactly the SystemConfig field names; unknown keys are
// rejected, omitted keys keep their defaults.
SystemConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json config_to_json(const SystemConfig& cfg);
SystemConfig load_config_file(const std::string& path);

}  // namespace sagin
