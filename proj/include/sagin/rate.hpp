#pragma once

#include <utility>
#include <vector>

#include "sagin/schemes.hpp"

namespace sagin::rate {

// Achievable rate of one sink with interference treated as colored Gaussian
// noise: log2 det(I + snr * H_d H_d^H * (I + snr * sum_i B_i B_i^H)^-1),
// with the noise variance normalized into the linear SNR.
double sink_rate(const SinkBlocks& sink, double snr_linear);

double sum_rate(const std::vector<SinkBlocks>& sinks, double snr_db);

// High-SNR rate slope between two SNR points (both >= 30 dB):
// (sum R(snr2) - sum R(snr1)) / log2(snr2 / snr1).
double empirical_dof(const std::vector<SinkBlocks>& sinks, std::pair<double, double> snr_db);

}  // namespace sagin::rate
