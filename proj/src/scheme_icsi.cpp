#include "sagin/scheme_icsi.hpp"

#include <Eigen/SVD>

#include <stdexcept>

#include "sagin/dof.hpp"
#include "sagin/linalg.hpp"

namespace sagin::icsi {

namespace {

CMat stack_receiver_channels(const ChannelRealization& ch) {
  const int kd = static_cast<int>(ch.h_skr.size());
  const Eigen::Index n = ch.h_skr.front().rows();
  const Eigen::Index ms = ch.h_skr.front().cols();
  CMat stack(kd * n, ms);
  for (int k = 0; k < kd; ++k) stack.middleRows(k * n, n) = ch.h_skr[k];
  return stack;
}

}  // namespace

NullspacePlan nullspace_precoder(const SystemConfig& cfg, const ChannelRealization& ch) {
  NullspacePlan plan;
  if (cfg.ms <= cfg.kd * cfg.n) {
    plan.w_sc = CMat::Zero(cfg.ms, 0);
    return plan;  // square or fat stack: no zero space, fall back per CSI-free scheme
  }
  const CMat stack = stack_receiver_channels(ch);
  Eigen::JacobiSVD<CMat> dec(stack, Eigen::ComputeFullV);
  const auto& s = dec.singularValues();
  const double cut = s.size() > 0 ? linalg::kRankTol * s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  const Eigen::Index null_width = cfg.ms - rank;
  const Eigen::Index width = std::min<Eigen::Index>(cfg.n, null_width);
  plan.w_sc = dec.matrixV().rightCols(null_width).leftCols(width);
  plan.effective_streams = static_cast<int>(width);
  return plan;
}

CMat effective_sat_channel(const ChannelRealization& ch, const NullspacePlan& plan) {
  if (plan.w_sc.cols() == 0) return CMat::Zero(ch.h_sc.rows(), 0);
  return ch.h_sc * plan.w_sc;
}

SvdFactors svd_normalize(const ChannelRealization& ch, const NullspacePlan& plan) {
  const int kd = static_cast<int>(ch.h_skr.size());
  SvdFactors f;
  f.w_kt.resize(kd);
  f.v_kr.resize(kd);
  for (int k = 0; k < kd; ++k) {
    const auto dec = linalg::svd(ch.h_ktkr[k][k]);
    f.w_kt[k] = dec.v;
    f.v_kr[k] = dec.u.adjoint();
  }
  const CMat eff = effective_sat_channel(ch, plan);
  if (eff.cols() > 0) {
    const auto dec = linalg::svd(eff);
    f.w_s = plan.w_sc * dec.v;
    f.v_c = dec.u.adjoint();
  } else {
    f.w_s = plan.w_sc;
    f.v_c = CMat::Identity(ch.h_sc.rows(), ch.h_sc.rows());
  }
  return f;
}

std::vector<ris::NullConstraint> build_constraints(const SystemConfig& cfg,
                                                   const ChannelRealization& ch,
                                                   const SvdFactors& factors) {
  std::vector<ris::NullConstraint> out;
  for (int rx = 1; rx <= cfg.kd; ++rx) {
    const CMat g = factors.v_kr[rx - 1] * ch.h_rkr[rx - 1];
    for (int tx = 1; tx <= cfg.kd; ++tx) {
      if (tx == rx) continue;
      ris::NullConstraint c;
      c.target = factors.v_kr[rx - 1] * ch.h_ktkr[tx - 1][rx - 1] * factors.w_kt[tx - 1];
      c.g_bar = g;
      c.f_bar = ch.h_ktr[tx - 1] * factors.w_kt[tx - 1];
      c.label = {tx, rx, ch.slot};
      out.push_back(std::move(c));
    }
  }
  const CMat g_c = factors.v_c * ch.h_rc;
  for (int tx = 1; tx <= cfg.kd; ++tx) {
    ris::NullConstraint c;
    c.target = factors.v_c * ch.h_ktc[tx - 1] * factors.w_kt[tx - 1];
    c.g_bar = g_c;
    c.f_bar = ch.h_ktr[tx - 1] * factors.w_kt[tx - 1];
    c.label = {tx, kSatelliteUser, ch.slot};
    out.push_back(std::move(c));
  }
  return out;
}

SchemePlan plan(const SystemConfig& cfg, const ChannelRealization& ch) {
  const NullspacePlan nsp = nullspace_precoder(cfg, ch);
  if (nsp.effective_streams < cfg.n)
    throw std::invalid_argument(
        "icsi: needs ms >= (kd+1)*n for the full-stream slot (deficient regimes are "
        "evaluated analytically)");
  const SvdFactors factors = svd_normalize(ch, nsp);
  const auto constraints = build_constraints(cfg, ch, factors);

  SchemePlan p;
  p.w_s = factors.w_s;
  p.w_kt = factors.w_kt;
  p.v_kr = factors.v_kr;
  p.v_c = factors.v_c;
  p.ris = ris::solve(constraints);
  p.streams_sat = cfg.n;
  p.streams_d2d = cfg.n;
  p.slots = 1;
  return p;
}

std::vector<ris::EffectiveBlockSpec> effective_blocks(const SystemConfig& cfg,
                                                      const ChannelRealization& ch,
                                                      const SchemePlan& plan) {
  std::vector<ris::EffectiveBlockSpec> blocks;
  for (int rx = 1; rx <= cfg.kd; ++rx) {
    for (int tx = 1; tx <= cfg.kd; ++tx) {
      ris::EffectiveBlockSpec spec;
      spec.label = {tx, rx, ch.slot};
      spec.decoder = plan.v_kr[rx - 1];
      spec.direct = ch.h_ktkr[tx - 1][rx - 1];
      spec.g = ch.h_rkr[rx - 1];
      spec.f = ch.h_ktr[tx - 1];
      spec.precoder = plan.w_kt[tx - 1];
      spec.role = tx == rx ? ris::BlockRole::Desired : ris::BlockRole::Nulled;
      blocks.push_back(std::move(spec));
    }
    // Satellite footprint, nulled by the zero-space precoder alone.
    ris::EffectiveBlockSpec sat;
    sat.label = {kSatellite, rx, ch.slot};
    sat.decoder = plan.v_kr[rx - 1];
    sat.direct = ch.h_skr[rx - 1];
    sat.precoder = plan.w_s;
    sat.role = ris::BlockRole::Nulled;
    blocks.push_back(std::move(sat));
  }
  for (int tx = 1; tx <= cfg.kd; ++tx) {
    ris::EffectiveBlockSpec spec;
    spec.label = {tx, kSatelliteUser, ch.slot};
    spec.decoder = plan.v_c;
    spec.direct = ch.h_ktc[tx - 1];
    spec.g = ch.h_rc;
    spec.f = ch.h_ktr[tx - 1];
    spec.precoder = plan.w_kt[tx - 1];
    spec.role = ris::BlockRole::Nulled;
    blocks.push_back(std::move(spec));
  }
  ris::EffectiveBlockSpec sat_user;
  sat_user.label = {kSatellite, kSatelliteUser, ch.slot};
  sat_user.decoder = plan.v_c;
  sat_user.direct = ch.h_sc;
  sat_user.precoder = plan.w_s;
  sat_user.role = ris::BlockRole::Desired;
  blocks.push_back(std::move(sat_user));
  return blocks;
}

Payloads random_payloads(const SystemConfig& cfg, Rng& rng) {
  Payloads p;
  p.satellite.resize(cfg.n);
  for (int i = 0; i < cfg.n; ++i) p.satellite(i) = rng.circular_gaussian(1.0);
  p.d2d.resize(cfg.kd);
  for (auto& d : p.d2d) {
    d.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) d(i) = rng.circular_gaussian(1.0);
  }
  return p;
}

SchemeOutcome run(const SystemConfig& cfg, const ChannelRealization& ch, const Payloads& payloads) {
  const int n = cfg.n;
  if (payloads.satellite.size() != n || static_cast<int>(payloads.d2d.size()) != cfg.kd)
    throw std::invalid_argument("icsi: payload shape mismatch");
  for (const auto& d : payloads.d2d)
    if (d.size() != n) throw std::invalid_argument("icsi: payload shape mismatch");

  const SchemePlan p = plan(cfg, ch);
  const CMat& theta = p.ris.theta;
  const double power_ratio = std::sqrt(cfg.p_k / cfg.p_s);

  std::vector<CVec> tx_signal(cfg.kd);
  for (int tx = 1; tx <= cfg.kd; ++tx) tx_signal[tx - 1] = p.w_kt[tx - 1] * payloads.d2d[tx - 1];
  const CVec sat_signal = p.w_s * payloads.satellite;

  std::vector<CVec> y_rx(cfg.kd, CVec::Zero(n));
  for (int rx = 1; rx <= cfg.kd; ++rx) {
    CVec y = ch.h_skr[rx - 1] * sat_signal;
    for (int tx = 1; tx <= cfg.kd; ++tx) {
      const CMat eff = ch.h_ktkr[tx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[tx - 1];
      y += eff * tx_signal[tx - 1];
    }
    y_rx[rx - 1] = y;
  }
  CVec y_c = ch.h_sc * sat_signal;
  for (int tx = 1; tx <= cfg.kd; ++tx) {
    const CMat eff = ch.h_ktc[tx - 1] + ch.h_rc * theta * ch.h_ktr[tx - 1];
    y_c += eff * tx_signal[tx - 1];
  }

  SchemeOutcome out;
  out.slots = 1;
  out.sent.push_back(payloads.satellite);
  for (const auto& d : payloads.d2d) out.sent.push_back(d);
  out.recovered.resize(cfg.kd + 1);

  const CMat sat_eff = p.v_c * ch.h_sc * p.w_s;
  out.recovered[0] = sat_eff.partialPivLu().solve(p.v_c * y_c);
  for (int rx = 1; rx <= cfg.kd; ++rx) {
    const CMat eff = p.v_kr[rx - 1] *
                     (ch.h_ktkr[rx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[rx - 1]) *
                     p.w_kt[rx - 1];
    out.recovered[rx] = eff.partialPivLu().solve(p.v_kr[rx - 1] * y_rx[rx - 1]);
  }

  double err = 0.0;
  long long streams_recovered = 0;
  for (std::size_t s = 0; s < out.sent.size(); ++s) {
    const double e = relative_error(out.sent[s], out.recovered[s]);
    err = std::max(err, e);
    if (e <= 1e-6) streams_recovered += n;
  }
  out.recovery_err = err;
  out.dof_counted = Rational(streams_recovered, out.slots);

  out.verify_report = ris::verify(effective_blocks(cfg, ch, p), theta);
  out.interference_residual = std::max(p.ris.max_residual, out.verify_report.max_interference);

  for (int rx = 1; rx <= cfg.kd; ++rx) {
    SinkBlocks sink;
    sink.sink = "d2d" + std::to_string(rx);
    sink.desired = power_ratio *
                   ((ch.h_ktkr[rx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[rx - 1]) *
                    p.w_kt[rx - 1]);
    sink.interference.push_back(ch.h_skr[rx - 1] * p.w_s);
    for (int tx = 1; tx <= cfg.kd; ++tx) {
      if (tx == rx) continue;
      sink.interference.push_back(
          power_ratio *
          ((ch.h_ktkr[tx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[tx - 1]) *
           p.w_kt[tx - 1]));
    }
    out.sinks.push_back(std::move(sink));
  }
  SinkBlocks sat_sink;
  sat_sink.sink = "satuser";
  sat_sink.desired = ch.h_sc * p.w_s;
  for (int tx = 1; tx <= cfg.kd; ++tx)
    sat_sink.interference.push_back(
        power_ratio * ((ch.h_ktc[tx - 1] + ch.h_rc * theta * ch.h_ktr[tx - 1]) * p.w_kt[tx - 1]));
  out.sinks.push_back(std::move(sat_sink));

  return out;
}

DeficientPlan deficient_plan(int ms, int kd, int n) {
  const long long psi_v = psi(kd, n);
  const long long full = static_cast<long long>(kd + 1) * n;
  if (!(ms > psi_v && ms < full))
    throw std::invalid_argument("deficient_plan: ms outside (psi, (kd+1)*n)");
  const int m = static_cast<int>(ceil_div(ms, kd + 1));
  DeficientPlan plan;
  plan.streams_per_sink = m;
  plan.silenced_per_receiver = n - m;
  plan.dof = Rational(static_cast<long long>(m) * (kd + 1), 1);
  return plan;
}

bool deficient_rank_check(int ms, int kd, int n, std::uint64_t seed) {
  const DeficientPlan plan = deficient_plan(ms, kd, n);
  const int m = plan.streams_per_sink;
  // Critical antenna count reached by this regime; between critical points
  // the DoF formula is flat, so the dimension count is taken there.
  const int ms_crit = m * (kd + 1);
  Rng rng(seed);
  CMat stack(kd * m, ms_crit);
  for (int r = 0; r < stack.rows(); ++r)
    for (int c = 0; c < stack.cols(); ++c) stack(r, c) = rng.circular_gaussian(1.0);
  const int width = ms_crit - linalg::rank_tol(stack);
  return width == m;
}

}  // namespace sagin::icsi
