#include "sagin/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sagin {

void FadingParams::check() const {
  if (!(sr_b > 0.0)) throw std::invalid_argument("fading: sr_b must be > 0");
  if (!(sr_m > 0.0)) throw std::invalid_argument("fading: sr_m must be > 0");
  if (sr_omega < 0.0) throw std::invalid_argument("fading: sr_omega must be >= 0");
  if (!(nak_m >= 0.5)) throw std::invalid_argument("fading: nak_m must be >= 0.5");
  if (!(nak_omega > 0.0)) throw std::invalid_argument("fading: nak_omega must be > 0");
}

namespace {

CMat sample_generic(int rows, int cols, Rng& rng) {
  CMat h(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) h(r, c) = rng.circular_gaussian(1.0);
  return h;
}

}  // namespace

CMat sample_shadowed_rician(int rows, int cols, const FadingParams& params, Rng& rng) {
  params.check();
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample: empty shape");
  if (params.generic_gaussian) return sample_generic(rows, cols, rng);
  CMat h(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const Complex scatter = rng.circular_gaussian(2.0 * params.sr_b);
      const double los_power = rng.gamma(params.sr_m, params.sr_omega / params.sr_m);
      const double phase = 2.0 * M_PI * rng.uniform();
      h(r, c) = scatter + std::sqrt(los_power) * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return h;
}

CMat sample_nakagami(int rows, int cols, const FadingParams& params, Rng& rng) {
  params.check();
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample: empty shape");
  if (params.generic_gaussian) return sample_generic(rows, cols, rng);
  CMat h(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double power = rng.gamma(params.nak_m, params.nak_omega / params.nak_m);
      const double phase = 2.0 * M_PI * rng.uniform();
      h(r, c) = std::sqrt(power) * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return h;
}

ChannelRealization generate_slot(const SystemConfig& cfg, const FadingParams& params, Rng& rng,
                                 int slot) {
  const auto report = validate(cfg);
  if (!report.ok()) throw std::invalid_argument("generate_slot: " + report.errors.front());

  ChannelRealization ch;
  ch.slot = slot;
  // Fixed sampling order; determinism depends on it.
  ch.h_sc = sample_shadowed_rician(cfg.n, cfg.ms, params, rng);
  ch.h_skr.reserve(cfg.kd);
  for (int k = 0; k < cfg.kd; ++k)
    ch.h_skr.push_back(sample_shadowed_rician(cfg.n, cfg.ms, params, rng));
  ch.h_ktkr.assign(cfg.kd, {});
  for (int i = 0; i < cfg.kd; ++i) {
    ch.h_ktkr[i].reserve(cfg.kd);
    for (int j = 0; j < cfg.kd; ++j)
      ch.h_ktkr[i].push_back(sample_nakagami(cfg.n, cfg.n, params, rng));
  }
  ch.h_ktc.reserve(cfg.kd);
  for (int i = 0; i < cfg.kd; ++i) ch.h_ktc.push_back(sample_nakagami(cfg.n, cfg.n, params, rng));
  ch.h_rc = sample_nakagami(cfg.n, cfg.l, params, rng);
  ch.h_rkr.reserve(cfg.kd);
  for (int j = 0; j < cfg.kd; ++j) ch.h_rkr.push_back(sample_nakagami(cfg.n, cfg.l, params, rng));
  ch.h_ktr.reserve(cfg.kd);
  for (int i = 0; i < cfg.kd; ++i) ch.h_ktr.push_back(sample_nakagami(cfg.l, cfg.n, params, rng));
  return ch;
}

std::vector<ChannelRealization> generate_block(const SystemConfig& cfg, const FadingParams& params,
                                               Rng& rng, int t_count) {
  if (t_count < 1) throw std::invalid_argument("generate_block: t_count must be >= 1");
  std::vector<ChannelRealization> block;
  block.reserve(t_count);
  for (int t = 1; t <= t_count; ++t) block.push_back(generate_slot(cfg, params, rng, t));
  return block;
}

namespace {

nlohmann::ordered_json matrix_to_json(const CMat& m) {
  nlohmann::ordered_json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(2 * m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  }
  doc["data"] = std::move(data);
  return doc;
}

CMat matrix_from_json(const nlohmann::json& doc) {
  const Eigen::Index rows = doc.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = doc.at("cols").get<Eigen::Index>();
  const auto data = doc.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != 2 * rows * cols)
    throw std::invalid_argument("replay: matrix payload size mismatch");
  CMat m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, k += 2) m(r, c) = Complex(data[k], data[k + 1]);
  return m;
}

}  // namespace

nlohmann::ordered_json realization_to_json(const ChannelRealization& ch) {
  nlohmann::ordered_json doc;
  doc["slot"] = ch.slot;
  doc["h_sc"] = matrix_to_json(ch.h_sc);
  doc["h_skr"] = nlohmann::ordered_json::array();
  for (const auto& m : ch.h_skr) doc["h_skr"].push_back(matrix_to_json(m));
  doc["h_ktkr"] = nlohmann::ordered_json::array();
  for (const auto& row : ch.h_ktkr) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const auto& m : row) jrow.push_back(matrix_to_json(m));
    doc["h_ktkr"].push_back(std::move(jrow));
  }
  doc["h_ktc"] = nlohmann::ordered_json::array();
  for (const auto& m : ch.h_ktc) doc["h_ktc"].push_back(matrix_to_json(m));
  doc["h_rc"] = matrix_to_json(ch.h_rc);
  doc["h_rkr"] = nlohmann::ordered_json::array();
  for (const auto& m : ch.h_rkr) doc["h_rkr"].push_back(matrix_to_json(m));
  doc["h_ktr"] = nlohmann::ordered_json::array();
  for (const auto& m : ch.h_ktr) doc["h_ktr"].push_back(matrix_to_json(m));
  return doc;
}

ChannelRealization realization_from_json(const nlohmann::json& doc) {
  ChannelRealization ch;
  ch.slot = doc.at("slot").get<int>();
  ch.h_sc = matrix_from_json(doc.at("h_sc"));
  for (const auto& m : doc.at("h_skr")) ch.h_skr.push_back(matrix_from_json(m));
  for (const auto& row : doc.at("h_ktkr")) {
    std::vector<CMat> r;
    for (const auto& m : row) r.push_back(matrix_from_json(m));
    ch.h_ktkr.push_back(std::move(r));
  }
  for (const auto& m : doc.at("h_ktc")) ch.h_ktc.push_back(matrix_from_json(m));
  ch.h_rc = matrix_from_json(doc.at("h_rc"));
  for (const auto& m : doc.at("h_rkr")) ch.h_rkr.push_back(matrix_from_json(m));
  for (const auto& m : doc.at("h_ktr")) ch.h_ktr.push_back(matrix_from_json(m));
  return ch;
}

}  // namespace sagin
