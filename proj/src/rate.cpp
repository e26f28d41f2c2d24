#include "sagin/rate.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace sagin::rate {

namespace {

// log2 det of a Hermitian positive definite matrix via Cholesky.
double log2_det_hpd(const CMat& m) {
  const Eigen::LLT<CMat> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("rate: covariance is not positive definite");
  double acc = 0.0;
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) acc += std::log2(diag(i).real());
  return 2.0 * acc;
}

}  // namespace

double sink_rate(const SinkBlocks& sink, double snr_linear) {
  if (!(snr_linear > 0.0)) throw std::invalid_argument("rate: snr must be positive");
  const Eigen::Index nr = sink.desired.rows();
  CMat q = CMat::Identity(nr, nr);
  for (const auto& b : sink.interference) q += snr_linear * (b * b.adjoint());
  const CMat full = q + snr_linear * (sink.desired * sink.desired.adjoint());
  return log2_det_hpd(full) - log2_det_hpd(q);
}

double sum_rate(const std::vector<SinkBlocks>& sinks, double snr_db) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  double acc = 0.0;
  for (const auto& s : sinks) acc += sink_rate(s, snr);
  return acc;
}

double empirical_dof(const std::vector<SinkBlocks>& sinks, std::pair<double, double> snr_db) {
  if (snr_db.first < 30.0 || snr_db.second < 30.0)
    throw std::invalid_argument("empirical_dof: slope needs SNR points >= 30 dB");
  if (!(snr_db.second > snr_db.first))
    throw std::invalid_argument("empirical_dof: SNR points must be increasing");
  const double r1 = sum_rate(sinks, snr_db.first);
  const double r2 = sum_rate(sinks, snr_db.second);
  const double denom = (snr_db.second - snr_db.first) / 10.0 * std::log2(10.0);
  return (r2 - r1) / denom;
}

}  // namespace sagin::rate
