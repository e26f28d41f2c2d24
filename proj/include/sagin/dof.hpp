#pragma once

#include <string>
#include <vector>

#include "sagin/config.hpp"
#include "sagin/rational.hpp"
#include "sagin/schemes.hpp"

namespace sagin {

enum class DofRegime {
  NoCsi,          // flat in ms
  IcsiFull,       // ms >= (kd+1)n
  IcsiDeficient,  // psi < ms < (kd+1)n
  IcsiFallback,   // ms <= psi: the CSI-free scheme is preferred
  DcsiSpacetime,
  DcsiFallback,
};

const char* to_string(DofRegime regime);

struct DofPoint {
  int kd = 0;
  int n = 0;
  int ms = 0;
  CsiType csi = CsiType::None;
  Rational dof;
  DofRegime regime = DofRegime::NoCsi;
};

// Deficient-regime boundary (kd+1) * floor(n/2).
long long psi(int kd, int n);

// CSI-free sum DoF (kd+1) * n / 2, independent of ms.
Rational dof_t1(int kd, int n);

// Instantaneous-CSI sum DoF with the three antenna regimes.
DofPoint dof_t2(int ms, int kd, int n);

// Space-time branch value (ms + (ceil(ms/n) - 1) * (kd-1) * n) / (ceil(ms/n) + 1),
// defined regardless of whether the scheme beats the CSI-free one.
Rational dcsi_spacetime_dof(int ms, int kd, int n);

// Exact integer form of the delayed-CSI selection condition
// 3*kd - 1 <= 2*phi + (kd-3)*ceil(phi), phi = ms/n.
bool dcsi_condition_holds(int ms, int kd, int n);

// Delayed-CSI sum DoF: the space-time value when the condition holds,
// otherwise the CSI-free fallback.
DofPoint dof_t3(int ms, int kd, int n);

struct SchemeChoice {
  SchemeId scheme;
  DofPoint point;
};

// Lawful scheme for the satellite's CSI type; moderately delayed CSI maps
// to the instantaneous scheme.
SchemeChoice select_scheme(CsiType csi, int ms, int kd, int n);

enum class SweepAxis { N, Kd, Ms };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Ms;
  int lo = 1;
  int hi = 1;
  int kd = 6;
  int n = 3;
  int ms = 21;
  // When sweeping n or kd, track ms = (kd+1)*n instead of the fixed value.
  bool ms_full_antenna = false;
};

struct SweepRow {
  SchemeId scheme;
  CsiType csi;
  int kd = 0;
  int n = 0;
  int ms = 0;
  long long l = 0;  // per-slot RIS elements the scheme needs
  Rational dof;
  DofRegime regime = DofRegime::NoCsi;
};

// One row per (axis value, CSI type in {none, instantaneous, delayed}).
std::vector<SweepRow> sweep(const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sagin
