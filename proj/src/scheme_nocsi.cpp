#include "sagin/scheme_nocsi.hpp"

#include <Eigen/QR>

#include <stdexcept>

#include "sagin/linalg.hpp"

namespace sagin::nocsi {

int aligned_rx_of_tx(int tx, int kd) { return tx == 1 ? kd : tx - 1; }
int aligned_tx_at_rx(int rx, int kd) { return rx == kd ? 1 : rx + 1; }

namespace {

void check_supported(const SystemConfig& cfg) {
  if (cfg.kd < 2)
    throw std::invalid_argument("nocsi: needs kd >= 2 (a transmitter cannot align at its own receiver)");
  if (cfg.ms < cfg.n) throw std::invalid_argument("nocsi: needs ms >= n active satellite antennas");
}

}  // namespace

AlignmentPrecoders design_alignment(const SystemConfig& cfg, const ChannelRealization& ch) {
  check_supported(cfg);
  const int n = cfg.n;

  AlignmentPrecoders pre;
  pre.w_s = CMat::Zero(cfg.ms, n);
  pre.w_s.topLeftCorner(n, n).setIdentity();

  pre.w_kt.resize(cfg.kd);
  for (int tx = 1; tx <= cfg.kd; ++tx) {
    const int victim = aligned_rx_of_tx(tx, cfg.kd);
    const CMat& direct = ch.h_ktkr[tx - 1][victim - 1];
    Eigen::FullPivLU<CMat> lu(direct);
    if (!lu.isInvertible())
      throw std::runtime_error("nocsi: degenerate channel, alignment block is singular");
    const CMat sat_at_victim = ch.h_skr[victim - 1].leftCols(n);
    pre.w_kt[tx - 1] = lu.solve(sat_at_victim);
  }
  return pre;
}

SvdFactors svd_normalize(const ChannelRealization& ch, const AlignmentPrecoders& pre) {
  const int kd = static_cast<int>(pre.w_kt.size());
  SvdFactors f;
  f.a.resize(kd);
  f.b.resize(kd);
  f.lambda.resize(kd);
  f.v_kr.resize(kd);
  f.w_bar.resize(kd);
  for (int rx = 1; rx <= kd; ++rx) {
    const int tx = aligned_tx_at_rx(rx, kd);
    const CMat precoded = ch.h_ktkr[tx - 1][rx - 1] * pre.w_kt[tx - 1];
    const auto dec = linalg::svd(precoded);
    f.a[rx - 1] = dec.u;
    f.lambda[rx - 1] = dec.s;
    f.b[tx - 1] = dec.v;
    f.v_kr[rx - 1] = dec.u.adjoint();
  }
  for (int tx = 1; tx <= kd; ++tx) f.w_bar[tx - 1] = pre.w_kt[tx - 1] * f.b[tx - 1];
  return f;
}

CMat satuser_zf(const SystemConfig& cfg, const ChannelRealization& ch) {
  const CMat active = ch.h_sc.leftCols(cfg.n);
  if (linalg::rank_tol(active) < cfg.n)
    throw std::runtime_error("nocsi: satellite-user channel is rank deficient");
  const CMat gram = active.adjoint() * active;
  return gram.partialPivLu().solve(active.adjoint());
}

std::vector<ris::NullConstraint> build_constraints(const SystemConfig& cfg,
                                                   const ChannelRealization& ch,
                                                   const AlignmentPrecoders& pre,
                                                   const SvdFactors& factors, const CMat& v_c) {
  (void)pre;
  const int kd = cfg.kd;
  const int n = cfg.n;
  std::vector<ris::NullConstraint> out;

  for (int rx = 1; rx <= kd; ++rx) {
    const int aligned = aligned_tx_at_rx(rx, kd);
    const CMat g = factors.v_kr[rx - 1] * ch.h_rkr[rx - 1];
    // Cross interference from transmitters that are neither desired nor
    // aligned here: direct plus cascade must vanish together.
    for (int tx = 1; tx <= kd; ++tx) {
      if (tx == rx || tx == aligned) continue;
      ris::NullConstraint c;
      c.target = factors.v_kr[rx - 1] * ch.h_ktkr[tx - 1][rx - 1] * factors.w_bar[tx - 1];
      c.g_bar = g;
      c.f_bar = ch.h_ktr[tx - 1] * factors.w_bar[tx - 1];
      c.label = {tx, rx, ch.slot};
      out.push_back(std::move(c));
    }
    // The aligned transmitter's reflection path would break the alignment;
    // only its cascade is forced to zero.
    ris::NullConstraint keep;
    keep.target = CMat::Zero(n, n);
    keep.g_bar = g;
    keep.f_bar = ch.h_ktr[aligned - 1] * factors.w_bar[aligned - 1];
    keep.label = {aligned, rx, ch.slot};
    out.push_back(std::move(keep));
  }

  // Every D2D term at the satellite user.
  const CMat g_c = v_c * ch.h_rc;
  for (int tx = 1; tx <= kd; ++tx) {
    ris::NullConstraint c;
    c.target = v_c * ch.h_ktc[tx - 1] * factors.w_bar[tx - 1];
    c.g_bar = g_c;
    c.f_bar = ch.h_ktr[tx - 1] * factors.w_bar[tx - 1];
    c.label = {tx, kSatelliteUser, ch.slot};
    out.push_back(std::move(c));
  }
  return out;
}

SchemePlan plan(const SystemConfig& cfg, const ChannelRealization& ch) {
  check_supported(cfg);
  const auto pre = design_alignment(cfg, ch);
  const auto factors = svd_normalize(ch, pre);
  const CMat v_c = satuser_zf(cfg, ch);
  const auto constraints = build_constraints(cfg, ch, pre, factors, v_c);

  SchemePlan p;
  p.w_s = pre.w_s;
  p.w_kt = pre.w_kt;  // symbol-to-antenna maps; payload occupies the leading coordinates
  p.v_kr = factors.v_kr;
  p.v_c = v_c;
  p.ris = ris::solve(constraints);
  p.streams_sat = cfg.n / 2;
  p.streams_d2d = cfg.n / 2;
  p.slots = 1;
  p.aligned_tx_at_rx.resize(cfg.kd);
  for (int rx = 1; rx <= cfg.kd; ++rx) p.aligned_tx_at_rx[rx - 1] = aligned_tx_at_rx(rx, cfg.kd);
  return p;
}

std::vector<ris::EffectiveBlockSpec> effective_blocks(const SystemConfig& cfg,
                                                      const ChannelRealization& ch,
                                                      const SchemePlan& plan) {
  const int kd = cfg.kd;
  std::vector<ris::EffectiveBlockSpec> blocks;
  for (int rx = 1; rx <= kd; ++rx) {
    const int aligned = plan.aligned_tx_at_rx[rx - 1];
    for (int tx = 1; tx <= kd; ++tx) {
      ris::EffectiveBlockSpec spec;
      spec.label = {tx, rx, ch.slot};
      spec.decoder = plan.v_kr[rx - 1];
      spec.direct = ch.h_ktkr[tx - 1][rx - 1];
      spec.g = ch.h_rkr[rx - 1];
      spec.f = ch.h_ktr[tx - 1];
      spec.precoder = plan.w_kt[tx - 1];
      spec.role = tx == rx ? ris::BlockRole::Desired
                           : (tx == aligned ? ris::BlockRole::Aligned : ris::BlockRole::Nulled);
      blocks.push_back(std::move(spec));
    }
    // Cascade-only condition of the aligned pair.
    ris::EffectiveBlockSpec cascade;
    cascade.label = {aligned, rx, ch.slot};
    cascade.decoder = plan.v_kr[rx - 1];
    cascade.g = ch.h_rkr[rx - 1];
    cascade.f = ch.h_ktr[aligned - 1];
    cascade.precoder = plan.w_kt[aligned - 1];
    cascade.role = ris::BlockRole::Nulled;
    blocks.push_back(std::move(cascade));
    // The satellite's aligned footprint (no reflection path).
    ris::EffectiveBlockSpec sat;
    sat.label = {kSatellite, rx, ch.slot};
    sat.decoder = plan.v_kr[rx - 1];
    sat.direct = ch.h_skr[rx - 1];
    sat.precoder = plan.w_s;
    sat.role = ris::BlockRole::Aligned;
    blocks.push_back(std::move(sat));
  }
  for (int tx = 1; tx <= kd; ++tx) {
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
  const int streams = cfg.n / 2;
  Payloads p;
  p.satellite.resize(streams);
  for (int i = 0; i < streams; ++i) p.satellite(i) = rng.circular_gaussian(1.0);
  p.d2d.resize(cfg.kd);
  for (auto& d : p.d2d) {
    d.resize(streams);
    for (int i = 0; i < streams; ++i) d(i) = rng.circular_gaussian(1.0);
  }
  return p;
}

SchemeOutcome run(const SystemConfig& cfg, const ChannelRealization& ch, const Payloads& payloads) {
  check_supported(cfg);
  if (cfg.n % 2 != 0)
    throw std::invalid_argument("nocsi: single-slot realization needs even n "
                                "(odd n is served by two-slot time sharing in the evaluator)");
  const int n = cfg.n;
  const int streams = n / 2;
  if (payloads.satellite.size() != streams ||
      static_cast<int>(payloads.d2d.size()) != cfg.kd)
    throw std::invalid_argument("nocsi: payload shape mismatch");
  for (const auto& d : payloads.d2d)
    if (d.size() != streams) throw std::invalid_argument("nocsi: payload shape mismatch");

  const SchemePlan p = plan(cfg, ch);
  const CMat& theta = p.ris.theta;
  const double power_ratio = std::sqrt(cfg.p_k / cfg.p_s);

  // Antenna-domain transmit vectors; alignment precoders carry the payload
  // in their leading columns.
  CVec sat_active = CVec::Zero(n);
  sat_active.head(streams) = payloads.satellite;
  std::vector<CVec> tx_signal(cfg.kd);
  for (int tx = 1; tx <= cfg.kd; ++tx)
    tx_signal[tx - 1] = p.w_kt[tx - 1].leftCols(streams) * payloads.d2d[tx - 1];

  // Noiseless receptions.
  std::vector<CVec> y_rx(cfg.kd, CVec::Zero(n));
  for (int rx = 1; rx <= cfg.kd; ++rx) {
    CVec y = ch.h_skr[rx - 1].leftCols(n) * sat_active;
    for (int tx = 1; tx <= cfg.kd; ++tx) {
      const CMat eff = ch.h_ktkr[tx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[tx - 1];
      y += eff * tx_signal[tx - 1];
    }
    y_rx[rx - 1] = y;
  }
  CVec y_c = ch.h_sc.leftCols(n) * sat_active;
  for (int tx = 1; tx <= cfg.kd; ++tx) {
    const CMat eff = ch.h_ktc[tx - 1] + ch.h_rc * theta * ch.h_ktr[tx - 1];
    y_c += eff * tx_signal[tx - 1];
  }

  SchemeOutcome out;
  out.slots = 1;
  out.sent.push_back(payloads.satellite);
  for (const auto& d : payloads.d2d) out.sent.push_back(d);
  out.recovered.resize(cfg.kd + 1);
  out.aligned_dims.resize(cfg.kd);

  // Satellite user: zero forcing, then the active streams.
  out.recovered[0] = (p.v_c * y_c).head(streams);

  for (int rx = 1; rx <= cfg.kd; ++rx) {
    const int aligned = p.aligned_tx_at_rx[rx - 1];
    // Aligned interference (satellite plus designated transmitter) lives in
    // the span of the leading active satellite columns at this receiver.
    const CMat sat_basis = ch.h_skr[rx - 1].leftCols(streams);
    const CMat aligned_image =
        (ch.h_ktkr[aligned - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[aligned - 1]) *
        p.w_kt[aligned - 1].leftCols(streams);
    CMat aligned_stack(n, 2 * streams);
    aligned_stack << sat_basis, aligned_image;
    out.aligned_dims[rx - 1] = linalg::rank_tol(aligned_stack);

    // Project out the aligned subspace, then invert the effective desired map.
    const Eigen::HouseholderQR<CMat> qr(sat_basis);
    const CMat q = qr.householderQ() * CMat::Identity(n, streams);
    const CMat projector = CMat::Identity(n, n) - q * q.adjoint();
    const CMat desired =
        (ch.h_ktkr[rx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[rx - 1]) *
        p.w_kt[rx - 1].leftCols(streams);
    out.recovered[rx] = linalg::pinv(projector * desired) * (projector * y_rx[rx - 1]);
  }

  double err = 0.0;
  long long streams_recovered = 0;
  for (std::size_t s = 0; s < out.sent.size(); ++s) {
    const double e = relative_error(out.sent[s], out.recovered[s]);
    err = std::max(err, e);
    if (e <= 1e-6) streams_recovered += streams;
  }
  out.recovery_err = err;
  out.dof_counted = Rational(streams_recovered, out.slots);

  out.verify_report = ris::verify(effective_blocks(cfg, ch, p), theta);
  out.interference_residual = std::max(p.ris.max_residual, out.verify_report.max_interference);

  // Symbol-to-receive-antenna maps for the rate-slope estimator.
  for (int rx = 1; rx <= cfg.kd; ++rx) {
    SinkBlocks sink;
    sink.sink = "d2d" + std::to_string(rx);
    sink.desired = power_ratio *
                   ((ch.h_ktkr[rx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[rx - 1]) *
                    p.w_kt[rx - 1].leftCols(streams));
    sink.interference.push_back(ch.h_skr[rx - 1].leftCols(streams));
    for (int tx = 1; tx <= cfg.kd; ++tx) {
      if (tx == rx) continue;
      sink.interference.push_back(
          power_ratio *
          ((ch.h_ktkr[tx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[tx - 1]) *
           p.w_kt[tx - 1].leftCols(streams)));
    }
    out.sinks.push_back(std::move(sink));
  }
  SinkBlocks sat_sink;
  sat_sink.sink = "satuser";
  sat_sink.desired = ch.h_sc.leftCols(streams);
  for (int tx = 1; tx <= cfg.kd; ++tx)
    sat_sink.interference.push_back(
        power_ratio *
        ((ch.h_ktc[tx - 1] + ch.h_rc * theta * ch.h_ktr[tx - 1]) * p.w_kt[tx - 1].leftCols(streams)));
  out.sinks.push_back(std::move(sat_sink));

  return out;
}

}  // namespace sagin::nocsi
