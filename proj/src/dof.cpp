#include "sagin/dof.hpp"

#include <sstream>
#include <stdexcept>

#include "sagin/scheme_dcsi.hpp"

namespace sagin {

const char* to_string(DofRegime regime) {
  switch (regime) {
    case DofRegime::NoCsi: return "noCSI";
    case DofRegime::IcsiFull: return "icsi-full";
    case DofRegime::IcsiDeficient: return "icsi-deficient";
    case DofRegime::IcsiFallback: return "icsi-fallback";
    case DofRegime::DcsiSpacetime: return "dcsi-spacetime";
    case DofRegime::DcsiFallback: return "dcsi-fallback";
  }
  return "unknown";
}

namespace {

void check_args(int ms, int kd, int n) {
  if (kd < 1 || n < 1 || ms < 1) throw std::invalid_argument("dof: arguments must be >= 1");
}

}  // namespace

long long psi(int kd, int n) { return static_cast<long long>(kd + 1) * (n / 2); }

Rational dof_t1(int kd, int n) {
  check_args(1, kd, n);
  return {static_cast<long long>(kd + 1) * n, 2};
}

DofPoint dof_t2(int ms, int kd, int n) {
  check_args(ms, kd, n);
  DofPoint p;
  p.kd = kd;
  p.n = n;
  p.ms = ms;
  p.csi = CsiType::Instantaneous;
  const long long full = static_cast<long long>(kd + 1) * n;
  if (ms <= psi(kd, n)) {
    p.dof = dof_t1(kd, n);
    p.regime = DofRegime::IcsiFallback;
  } else if (ms < full) {
    p.dof = Rational(ceil_div(ms, kd + 1) * (kd + 1), 1);
    p.regime = DofRegime::IcsiDeficient;
  } else {
    p.dof = Rational(full, 1);
    p.regime = DofRegime::IcsiFull;
  }
  return p;
}

Rational dcsi_spacetime_dof(int ms, int kd, int n) {
  check_args(ms, kd, n);
  const long long phi_ceil = ceil_div(ms, n);
  return {ms + (phi_ceil - 1) * (kd - 1) * n, phi_ceil + 1};
}

bool dcsi_condition_holds(int ms, int kd, int n) {
  check_args(ms, kd, n);
  // Multiply through by n > 0: (3kd - 1) n <= 2 ms + (kd - 3) ceil(ms/n) n.
  const long long lhs = static_cast<long long>(3 * kd - 1) * n;
  const long long rhs = 2LL * ms + (static_cast<long long>(kd) - 3) * ceil_div(ms, n) * n;
  return lhs <= rhs;
}

DofPoint dof_t3(int ms, int kd, int n) {
  check_args(ms, kd, n);
  DofPoint p;
  p.kd = kd;
  p.n = n;
  p.ms = ms;
  p.csi = CsiType::Delayed;
  if (dcsi_condition_holds(ms, kd, n)) {
    p.dof = dcsi_spacetime_dof(ms, kd, n);
    p.regime = DofRegime::DcsiSpacetime;
  } else {
    p.dof = dof_t1(kd, n);
    p.regime = DofRegime::DcsiFallback;
  }
  return p;
}

SchemeChoice select_scheme(CsiType csi, int ms, int kd, int n) {
  check_args(ms, kd, n);
  switch (csi) {
    case CsiType::None: {
      DofPoint p;
      p.kd = kd;
      p.n = n;
      p.ms = ms;
      p.csi = csi;
      p.dof = dof_t1(kd, n);
      p.regime = DofRegime::NoCsi;
      return {SchemeId::NoCsi, p};
    }
    case CsiType::Instantaneous:
    case CsiType::ModeratelyDelayed: {
      DofPoint p = dof_t2(ms, kd, n);
      p.csi = csi;
      return {SchemeId::Icsi, p};
    }
    case CsiType::Delayed:
      return {SchemeId::Dcsi, dof_t3(ms, kd, n)};
  }
  throw std::logic_error("select_scheme: unreachable");
}

namespace {

SweepRow make_row(CsiType csi, int ms, int kd, int n) {
  const SchemeChoice choice = select_scheme(csi, ms, kd, n);
  SweepRow row;
  row.scheme = choice.scheme;
  row.csi = csi;
  row.kd = kd;
  row.n = n;
  row.ms = ms;
  row.l = choice.scheme == SchemeId::Dcsi ? dcsi::ris_elements_required(kd, n)
                                          : ris_elements_required(kd, n);
  row.dof = choice.point.dof;
  row.regime = choice.point.regime;
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.lo > spec.hi) throw std::invalid_argument("sweep: empty axis");
  static const CsiType kCsiOrder[] = {CsiType::None, CsiType::Instantaneous, CsiType::Delayed};
  std::vector<SweepRow> rows;
  for (int v = spec.lo; v <= spec.hi; ++v) {
    int kd = spec.kd, n = spec.n, ms = spec.ms;
    switch (spec.axis) {
      case SweepAxis::N: n = v; break;
      case SweepAxis::Kd: kd = v; break;
      case SweepAxis::Ms: ms = v; break;
    }
    if (spec.ms_full_antenna && spec.axis != SweepAxis::Ms) ms = (kd + 1) * n;
    for (CsiType csi : kCsiOrder) rows.push_back(make_row(csi, ms, kd, n));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "scheme,csi,kd,n,ms,l,dof_num,dof_den,regime\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << to_string(r.csi) << ',' << r.kd << ',' << r.n << ','
        << r.ms << ',' << r.l << ',' << r.dof.num << ',' << r.dof.den << ',' << to_string(r.regime)
        << '\n';
  }
  return out.str();
}

}  // namespace sagin
