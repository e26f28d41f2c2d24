#include "sagin/config.hpp"

#include <fstream>
#include <stdexcept>

namespace sagin {

const char* to_string(CsiType type) {
  switch (type) {
    case CsiType::Instantaneous: return "instantaneous";
    case CsiType::ModeratelyDelayed: return "moderately-delayed";
    case CsiType::Delayed: return "delayed";
    case CsiType::None: return "none";
  }
  return "unknown";
}

CsiType csi_from_string(const std::string& name) {
  if (name == "instantaneous" || name == "inst") return CsiType::Instantaneous;
  if (name == "moderately-delayed" || name == "moderate") return CsiType::ModeratelyDelayed;
  if (name == "delayed") return CsiType::Delayed;
  if (name == "none") return CsiType::None;
  throw std::invalid_argument("unknown CSI type: " + name);
}

CsiType classify_csi(const CsiLatency& lat) {
  if (!(lat.t_c > lat.t_p)) throw std::invalid_argument("classify_csi: requires t_c > t_p");
  if (lat.t_p < 0.0 || lat.t_f < 0.0)
    throw std::invalid_argument("classify_csi: negative time");
  if (lat.t_acq < lat.t_p || lat.t_acq > lat.t_c)
    throw std::invalid_argument("classify_csi: t_acq outside [t_p, t_c]");

  // Exact test, not a tolerance: zero feedback delay is instantaneous.
  if (lat.t_f == 0.0) return CsiType::Instantaneous;
  const double ratio = lat.t_f / (lat.t_c - lat.t_p);
  if (ratio >= 1.0) return CsiType::Delayed;
  // Single breakpoint at t_p + t_f, closed on the instantaneous side.
  return lat.t_acq <= lat.t_p + lat.t_f ? CsiType::Instantaneous : CsiType::ModeratelyDelayed;
}

long long ris_elements_required(int kd, int n) {
  const long long k = kd;
  const long long nn = static_cast<long long>(n) * n;
  return k * (k - 1) * nn + k * nn;  // = kd^2 * n^2
}

ValidationReport validate(const SystemConfig& cfg) {
  ValidationReport report;
  auto err = [&](const std::string& m) { report.errors.push_back(m); };
  if (cfg.kd < 1) err("kd must be >= 1");
  if (cfg.n < 1) err("n must be >= 1");
  if (cfg.ms < 1) err("ms must be >= 1");
  if (cfg.l < 1) err("l must be >= 1");
  if (!(cfg.p_s > 0.0)) err("p_s must be > 0");
  if (!(cfg.p_k > 0.0)) err("p_k must be > 0");
  if (cfg.sigma2 < 0.0) err("sigma2 must be >= 0");
  for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i) {
    if (!(cfg.snr_grid_db[i] > cfg.snr_grid_db[i - 1])) {
      err("snr_grid_db must be strictly increasing");
      break;
    }
  }
  if (report.ok() && cfg.l < ris_elements_required(cfg.kd, cfg.n)) {
    report.warnings.push_back(
        "RIS under-provisioned: l = " + std::to_string(cfg.l) + " < kd^2*n^2 = " +
        std::to_string(ris_elements_required(cfg.kd, cfg.n)) +
        "; the reflection solve will report a nonzero residual");
  }
  return report;
}

SystemConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const std::vector<std::string> known = {"kd",    "n",   "ms",     "l",   "p_s",
                                                 "p_k",   "sigma2", "seed", "snr_grid_db"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    bool found = false;
    for (const auto& k : known) found = found || (k == key);
    if (!found) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  SystemConfig cfg;
  if (doc.contains("kd")) cfg.kd = doc.at("kd").get<int>();
  if (doc.contains("n")) cfg.n = doc.at("n").get<int>();
  if (doc.contains("ms")) cfg.ms = doc.at("ms").get<int>();
  if (doc.contains("l")) cfg.l = doc.at("l").get<int>();
  if (doc.contains("p_s")) cfg.p_s = doc.at("p_s").get<double>();
  if (doc.contains("p_k")) cfg.p_k = doc.at("p_k").get<double>();
  if (doc.contains("sigma2")) cfg.sigma2 = doc.at("sigma2").get<double>();
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("snr_grid_db")) cfg.snr_grid_db = doc.at("snr_grid_db").get<std::vector<double>>();
  return cfg;
}

nlohmann::ordered_json config_to_json(const SystemConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["kd"] = cfg.kd;
  doc["n"] = cfg.n;
  doc["ms"] = cfg.ms;
  doc["l"] = cfg.l;
  doc["p_s"] = cfg.p_s;
  doc["p_k"] = cfg.p_k;
  doc["sigma2"] = cfg.sigma2;
  doc["seed"] = cfg.seed;
  doc["snr_grid_db"] = cfg.snr_grid_db;
  return doc;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json doc;
  in >> doc;
  return config_from_json(doc);
}

}  // namespace sagin
