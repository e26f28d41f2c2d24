#pragma once

#include <Eigen/Dense>
#include <complex>

namespace sagin {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Node ids used in link labels: transmitter 0 is the satellite,
// receiver 0 is the satellite user, 1..K_d are the D2D terminals.
inline constexpr int kSatellite = 0;
inline constexpr int kSatelliteUser = 0;

struct LinkLabel {
  int tx = 0;
  int rx = 0;
  int slot = 1;
};

}  // namespace sagin
