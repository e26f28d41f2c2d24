#include "sagin/scheme_dcsi.hpp"

#include <Eigen/LU>

#include <sstream>
#include <stdexcept>

#include "sagin/linalg.hpp"

namespace sagin::dcsi {

long long ris_elements_required(int kd, int n) {
  const long long nn = static_cast<long long>(n) * n;
  return (static_cast<long long>(kd) * kd + 1) * nn;
}

std::vector<int> fresh_slots_of_tx(int tx, int kd) {
  std::vector<int> slots;
  for (int t = 2; t <= kd + 1; ++t)
    if (t != tx + 1) slots.push_back(t);
  return slots;
}

int last_fresh_slot(int tx, int kd) { return tx == kd ? kd : kd + 1; }

namespace {

void check_supported(const SystemConfig& cfg) {
  if (cfg.kd < 2) throw std::invalid_argument("dcsi: needs kd >= 2");
  if (cfg.ms < (cfg.kd + 1) * cfg.n)
    throw std::invalid_argument("dcsi: needs ms >= (kd+1)*n (deficient regimes are analytic)");
}

CMat invert_or_throw(const CMat& m, const char* what) {
  Eigen::FullPivLU<CMat> lu(m);
  if (!lu.isInvertible()) throw std::runtime_error(std::string("dcsi: degenerate channel in ") + what);
  return lu.inverse();
}

}  // namespace

Payloads random_payloads(const SystemConfig& cfg, Rng& rng) {
  Payloads p;
  p.satellite.resize((cfg.kd + 1) * cfg.n);
  for (Eigen::Index i = 0; i < p.satellite.size(); ++i)
    p.satellite(i) = rng.circular_gaussian(1.0);
  p.fresh.assign(cfg.kd, std::vector<CVec>(cfg.kd + 3));
  for (int tx = 1; tx <= cfg.kd; ++tx) {
    for (int t : fresh_slots_of_tx(tx, cfg.kd)) {
      CVec v(cfg.n);
      for (int i = 0; i < cfg.n; ++i) v(i) = rng.circular_gaussian(1.0);
      p.fresh[tx - 1][t] = std::move(v);
    }
  }
  return p;
}

SessionState phase1(const SystemConfig& cfg, const ChannelRealization& ch, const CVec& payload_s) {
  check_supported(cfg);
  const int kd = cfg.kd;
  const int n = cfg.n;
  const int wide = (kd + 1) * n;
  if (payload_s.size() != wide) throw std::invalid_argument("dcsi: slot-1 payload must be (kd+1)*n");

  SessionState st;
  st.cfg = cfg;
  st.slot = 1;
  st.phase = 1;
  st.x_s1 = payload_s;

  st.rx_hat.assign(kd, std::vector<CVec>(kd + 3));
  st.satuser_hat.assign(kd + 3, CVec());
  st.precoders.assign(kd, std::vector<CMat>(kd + 3));
  st.desired_eff.assign(kd, std::vector<CMat>(kd + 3));
  st.phase3_desired.assign(kd, CMat());
  st.fresh_sent.assign(kd, std::vector<CVec>(kd + 3));
  st.ris_designs.resize(kd + 3);

  // D2D transmitters keep silent; the satellite floods on (kd+1)*n antennas.
  st.satuser_hat[1] = ch.h_sc.leftCols(wide) * payload_s;
  st.stack_blocks.push_back(ch.h_sc.leftCols(wide));
  st.csi_slot1.reserve(kd);
  st.sum_slot1 = CMat::Zero(n, wide);
  for (int rx = 1; rx <= kd; ++rx) {
    const CMat h1 = ch.h_skr[rx - 1].leftCols(wide);
    const CVec y1 = h1 * payload_s;
    st.rx_hat[rx - 1][1] = y1;
    st.fed_back.push_back(y1);  // receiver feeds its observation back to its transmitter
    st.csi_slot1.push_back(h1);  // delayed CSI, available to the satellite from slot 2 on
    st.sum_slot1 += h1;
  }
  st.prev_ch = ch;
  return st;
}

void phase2_slot(SessionState& state, const ChannelRealization& ch, const std::vector<CVec>& fresh) {
  const SystemConfig& cfg = state.cfg;
  const int kd = cfg.kd;
  const int n = cfg.n;
  const int t = state.slot + 1;
  if (t < 2 || t > kd + 1) throw std::logic_error("dcsi: phase-2 slot out of range");
  if (static_cast<int>(fresh.size()) != kd) throw std::invalid_argument("dcsi: fresh payload count");
  const int retx = t - 1;

  // Precoders. The satellite and the retransmitter send unprecoded; each
  // fresh transmitter chains the previous slot through its own current CSI,
  // keeping its direct effective channel consistent across slots.
  for (int tx = 1; tx <= kd; ++tx) {
    CMat w;
    if (tx == retx || t == 2) {
      w = CMat::Identity(n, n);
    } else {
      const int rx = tx;  // designated pair
      const CMat cur_d2d_inv = invert_or_throw(ch.h_ktkr[tx - 1][rx - 1], "precoder recursion");
      const CMat prev_sat_inv =
          invert_or_throw(state.prev_ch.h_skr[rx - 1].leftCols(n), "precoder recursion");
      w = cur_d2d_inv * ch.h_skr[rx - 1].leftCols(n) * prev_sat_inv *
          state.prev_ch.h_ktkr[tx - 1][rx - 1] * state.precoders[tx - 1][t - 1];
    }
    state.precoders[tx - 1][t] = std::move(w);
  }

  // Satellite resend: known slot-1 channels applied to its own payload,
  // skipping the receiver whose transmitter retransmits this slot.
  const CMat h_bar = state.sum_slot1 - state.csi_slot1[retx - 1];
  const CVec x_sat = h_bar * state.x_s1;

  std::vector<CVec> tx_signal(kd);
  for (int tx = 1; tx <= kd; ++tx) {
    if (tx == retx) {
      tx_signal[tx - 1] = state.fed_back[retx - 1];
    } else {
      if (fresh[tx - 1].size() != n) throw std::invalid_argument("dcsi: fresh payload size");
      tx_signal[tx - 1] = state.precoders[tx - 1][t] * fresh[tx - 1];
      state.fresh_sent[tx - 1][t] = fresh[tx - 1];
    }
  }

  // Receivers invert the satellite's active block, so the satellite term
  // arrives as the raw resent combination.
  std::vector<CMat> v(kd);
  for (int rx = 1; rx <= kd; ++rx)
    v[rx - 1] = invert_or_throw(ch.h_skr[rx - 1].leftCols(n), "receiver decoder");

  std::vector<ris::NullConstraint> constraints;
  for (int rx = 1; rx <= kd; ++rx) {
    const CMat g = v[rx - 1] * ch.h_rkr[rx - 1];
    // Merge the retransmission into the satellite's effective channel.
    ris::NullConstraint merge;
    merge.target = v[rx - 1] * ch.h_ktkr[retx - 1][rx - 1] - CMat::Identity(n, n);
    merge.g_bar = g;
    merge.f_bar = ch.h_ktr[retx - 1];
    merge.label = {retx, rx, t};
    constraints.push_back(std::move(merge));
    for (int tx = 1; tx <= kd; ++tx) {
      if (tx == retx || tx == rx) continue;
      ris::NullConstraint c;
      c.target = v[rx - 1] * ch.h_ktkr[tx - 1][rx - 1] * state.precoders[tx - 1][t];
      c.g_bar = g;
      c.f_bar = ch.h_ktr[tx - 1] * state.precoders[tx - 1][t];
      c.label = {tx, rx, t};
      constraints.push_back(std::move(c));
    }
  }
  for (int tx = 1; tx <= kd; ++tx) {
    ris::NullConstraint c;
    c.target = ch.h_ktc[tx - 1] * state.precoders[tx - 1][t];
    c.g_bar = ch.h_rc;
    c.f_bar = ch.h_ktr[tx - 1] * state.precoders[tx - 1][t];
    c.label = {tx, kSatelliteUser, t};
    constraints.push_back(std::move(c));
  }
  state.ris_designs[t] = ris::solve(constraints);
  state.max_residual = std::max(state.max_residual, state.ris_designs[t].max_residual);
  const CMat& theta = state.ris_designs[t].theta;

  for (int rx = 1; rx <= kd; ++rx) {
    CVec y = ch.h_skr[rx - 1].leftCols(n) * x_sat;
    for (int tx = 1; tx <= kd; ++tx) {
      const CMat eff = ch.h_ktkr[tx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[tx - 1];
      y += eff * tx_signal[tx - 1];
    }
    state.rx_hat[rx - 1][t] = v[rx - 1] * y;
    if (rx != retx)
      state.desired_eff[rx - 1][t] =
          v[rx - 1] * (ch.h_ktkr[rx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[rx - 1]) *
          state.precoders[rx - 1][t];
  }
  CVec y_c = ch.h_sc.leftCols(n) * x_sat;
  for (int tx = 1; tx <= kd; ++tx) {
    const CMat eff = ch.h_ktc[tx - 1] + ch.h_rc * theta * ch.h_ktr[tx - 1];
    y_c += eff * tx_signal[tx - 1];
  }
  state.satuser_hat[t] = y_c;  // satellite-user decoder is identity in phase 2
  state.stack_blocks.push_back(ch.h_sc.leftCols(n) * h_bar);

  state.prev_ch = ch;
  state.slot = t;
  state.phase = 2;
}

void phase3(SessionState& state, const ChannelRealization& ch) {
  const SystemConfig& cfg = state.cfg;
  const int kd = cfg.kd;
  const int n = cfg.n;
  const int t = kd + 2;
  if (state.slot != kd + 1) throw std::logic_error("dcsi: phase 3 before phase 2 completed");

  for (int tx = 1; tx <= kd; ++tx) {
    const int rx = tx;
    const CMat cur_d2d_inv = invert_or_throw(ch.h_ktkr[tx - 1][rx - 1], "precoder recursion");
    const CMat prev_sat_inv =
        invert_or_throw(state.prev_ch.h_skr[rx - 1].leftCols(n), "precoder recursion");
    state.precoders[tx - 1][t] = cur_d2d_inv * ch.h_skr[rx - 1].leftCols(n) * prev_sat_inv *
                                 state.prev_ch.h_ktkr[tx - 1][rx - 1] * state.precoders[tx - 1][t - 1];
  }

  std::vector<ris::NullConstraint> constraints;
  for (int rx = 1; rx <= kd; ++rx) {
    const CMat& g = ch.h_rkr[rx - 1];
    for (int tx = 1; tx <= kd; ++tx) {
      if (tx == rx) continue;
      ris::NullConstraint c;
      c.target = ch.h_ktkr[tx - 1][rx - 1] * state.precoders[tx - 1][t];
      c.g_bar = g;
      c.f_bar = ch.h_ktr[tx - 1] * state.precoders[tx - 1][t];
      c.label = {tx, rx, t};
      constraints.push_back(std::move(c));
    }
  }
  for (int tx = 1; tx <= kd; ++tx) {
    ris::NullConstraint c;
    c.target = ch.h_ktc[tx - 1] * state.precoders[tx - 1][t];
    c.g_bar = ch.h_rc;
    c.f_bar = ch.h_ktr[tx - 1] * state.precoders[tx - 1][t];
    c.label = {tx, kSatelliteUser, t};
    constraints.push_back(std::move(c));
  }
  state.ris_designs[t] = ris::solve(constraints);
  state.max_residual = std::max(state.max_residual, state.ris_designs[t].max_residual);
  const CMat& theta = state.ris_designs[t].theta;

  // The satellite keeps silent; every transmitter repeats its latest fresh
  // payload through the chained precoder.
  for (int rx = 1; rx <= kd; ++rx) {
    CVec y = CVec::Zero(n);
    for (int tx = 1; tx <= kd; ++tx) {
      const CVec& payload = state.fresh_sent[tx - 1][last_fresh_slot(tx, kd)];
      const CMat eff = ch.h_ktkr[tx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[tx - 1];
      y += eff * state.precoders[tx - 1][t] * payload;
    }
    state.rx_hat[rx - 1][t] = y;  // decoder is identity here
    state.phase3_desired[rx - 1] =
        (ch.h_ktkr[rx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[rx - 1]) *
        state.precoders[rx - 1][t];
  }

  state.slot = t;
  state.phase = 3;
}

CVec decode_satuser(const SessionState& state) {
  const int kd = state.cfg.kd;
  const int n = state.cfg.n;
  const int wide = (kd + 1) * n;
  if (state.slot < kd + 1) throw std::logic_error("dcsi: satellite-user decode needs slots 1..kd+1");

  CMat stack(wide, wide);
  CVec obs(wide);
  stack.topRows(n) = state.stack_blocks[0];
  obs.head(n) = state.satuser_hat[1];
  for (int t = 2; t <= kd + 1; ++t) {
    stack.middleRows((t - 1) * n, n) = state.stack_blocks[t - 1];
    obs.segment((t - 1) * n, n) = state.satuser_hat[t];
  }
  if (linalg::rank_tol(stack) < wide)
    throw std::runtime_error("dcsi: stacked satellite-user system is rank deficient");
  return stack.partialPivLu().solve(obs);
}

std::vector<CVec> decode_d2d(const SessionState& state, int kr) {
  const int kd = state.cfg.kd;
  const int n = state.cfg.n;
  if (state.slot != kd + 2) throw std::logic_error("dcsi: D2D decode needs all kd+2 slots");
  if (kr < 1 || kr > kd) throw std::invalid_argument("dcsi: receiver id out of range");

  const auto slots = fresh_slots_of_tx(kr, kd);
  const int unknowns = static_cast<int>(slots.size());
  const CVec& common = state.rx_hat[kr - 1][kr + 1];  // pure satellite term

  CMat system = CMat::Zero(static_cast<Eigen::Index>(unknowns + 1) * n,
                           static_cast<Eigen::Index>(unknowns) * n);
  CVec rhs(static_cast<Eigen::Index>(unknowns + 1) * n);
  for (int i = 0; i < unknowns; ++i) {
    const int t = slots[i];
    system.block(i * n, i * n, n, n) = state.desired_eff[kr - 1][t];
    rhs.segment(i * n, n) = state.rx_hat[kr - 1][t] - common;
  }
  const int last = last_fresh_slot(kr, kd);
  int last_idx = 0;
  for (int i = 0; i < unknowns; ++i)
    if (slots[i] == last) last_idx = i;
  system.block(unknowns * n, last_idx * n, n, n) = state.phase3_desired[kr - 1];
  rhs.segment(unknowns * n, n) = state.rx_hat[kr - 1][kd + 2];

  const CVec solution = linalg::pinv(system) * rhs;
  std::vector<CVec> out(unknowns);
  for (int i = 0; i < unknowns; ++i) out[i] = solution.segment(i * n, n);
  return out;
}

std::string session_trace_jsonl(const SessionState& state) {
  const int kd = state.cfg.kd;
  std::ostringstream out;
  for (int t = 1; t <= state.slot; ++t) {
    nlohmann::ordered_json line;
    line["slot"] = t;
    if (t == 1) {
      line["phase"] = 1;
      line["satellite"] = "flood";
      line["d2d"] = "silent";
    } else if (t <= kd + 1) {
      line["phase"] = 2;
      line["satellite"] = "resend";
      line["retransmitter"] = t - 1;
      auto fresh = nlohmann::ordered_json::array();
      for (int tx = 1; tx <= kd; ++tx)
        if (tx != t - 1) fresh.push_back(tx);
      line["fresh"] = std::move(fresh);
    } else {
      line["phase"] = 3;
      line["satellite"] = "silent";
      line["d2d"] = "repeat-latest";
    }
    if (t >= 2) {
      line["constraints"] = state.ris_designs[t].residuals.size();
      line["max_residual"] = state.ris_designs[t].max_residual;
    }
    out << line.dump() << "\n";
  }
  if (state.slot == kd + 2) {
    nlohmann::ordered_json status;
    status["decode"] = "status";
    bool satuser_ok = true;
    try {
      decode_satuser(state);
    } catch (const std::exception&) {
      satuser_ok = false;
    }
    status["satuser_stack_full_rank"] = satuser_ok;
    auto pairs = nlohmann::ordered_json::array();
    for (int rx = 1; rx <= kd; ++rx) {
      bool ok = true;
      try {
        decode_d2d(state, rx);
      } catch (const std::exception&) {
        ok = false;
      }
      pairs.push_back(ok);
    }
    status["d2d_systems_solvable"] = std::move(pairs);
    out << status.dump() << "\n";
  }
  return out.str();
}

SchemeOutcome run(const SystemConfig& cfg, const std::vector<ChannelRealization>& block,
                  const Payloads& payloads) {
  check_supported(cfg);
  const int kd = cfg.kd;
  const int n = cfg.n;
  if (static_cast<int>(block.size()) < kd + 2)
    throw std::invalid_argument("dcsi: needs kd+2 channel slots");

  SessionState st = phase1(cfg, block[0], payloads.satellite);
  for (int t = 2; t <= kd + 1; ++t) {
    std::vector<CVec> fresh(kd);
    for (int tx = 1; tx <= kd; ++tx)
      if (tx != t - 1) fresh[tx - 1] = payloads.fresh[tx - 1][t];
    phase2_slot(st, block[t - 1], fresh);
  }
  phase3(st, block[kd + 1]);

  SchemeOutcome out;
  out.slots = kd + 2;
  out.interference_residual = st.max_residual;

  // Source 0: the satellite's slot-1 payload; then each pair's fresh
  // payloads concatenated in slot order.
  out.sent.push_back(payloads.satellite);
  out.recovered.push_back(decode_satuser(st));

  long long streams_recovered = 0;
  double err = relative_error(out.sent[0], out.recovered[0]);
  if (err <= 1e-6) streams_recovered += (kd + 1) * n;

  for (int tx = 1; tx <= kd; ++tx) {
    const auto slots = fresh_slots_of_tx(tx, kd);
    const auto decoded = decode_d2d(st, tx);
    CVec sent(static_cast<Eigen::Index>(slots.size()) * n);
    CVec rec(static_cast<Eigen::Index>(slots.size()) * n);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      sent.segment(i * n, n) = payloads.fresh[tx - 1][slots[i]];
      rec.segment(i * n, n) = decoded[i];
      if (relative_error(payloads.fresh[tx - 1][slots[i]], decoded[i]) <= 1e-6)
        streams_recovered += n;
    }
    err = std::max(err, relative_error(sent, rec));
    out.sent.push_back(std::move(sent));
    out.recovered.push_back(std::move(rec));
  }

  out.recovery_err = err;
  out.dof_counted = Rational(streams_recovered, out.slots);
  return out;
}

}  // namespace sagin::dcsi
