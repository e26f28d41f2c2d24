#include <doctest.h>

#include <sstream>

#include "sagin/linalg.hpp"
#include "sagin/scheme_dcsi.hpp"

using namespace sagin;

namespace {

SystemConfig session_cfg(int kd = 2, int n = 2) {
  SystemConfig cfg;
  cfg.kd = kd;
  cfg.n = n;
  cfg.ms = (kd + 1) * n;
  cfg.l = static_cast<int>(dcsi::ris_elements_required(kd, n));
  return cfg;
}

std::vector<ChannelRealization> generic_block(const SystemConfig& cfg, std::uint64_t seed) {
  FadingParams params;
  params.generic_gaussian = true;
  Rng rng(seed);
  return generate_block(cfg, params, rng, cfg.kd + 2);
}

dcsi::SessionState run_phases(const SystemConfig& cfg, const std::vector<ChannelRealization>& block,
                              const dcsi::Payloads& payloads) {
  auto st = dcsi::phase1(cfg, block[0], payloads.satellite);
  for (int t = 2; t <= cfg.kd + 1; ++t) {
    std::vector<CVec> fresh(cfg.kd);
    for (int tx = 1; tx <= cfg.kd; ++tx)
      if (tx != t - 1) fresh[tx - 1] = payloads.fresh[tx - 1][t];
    dcsi::phase2_slot(st, block[t - 1], fresh);
  }
  dcsi::phase3(st, block[cfg.kd + 1]);
  return st;
}

}  // namespace

TEST_SUITE("dcsi") {

TEST_CASE("slot-1 flood is underdetermined at the satellite user") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 1);
  Rng rng(11);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  const auto st = dcsi::phase1(cfg, block[0], payloads.satellite);
  CHECK(st.satuser_hat[1].size() == cfg.n);
  CHECK(st.rx_hat[0][1].size() == cfg.n);
  // n equations against (kd+1)*n unknowns.
  CHECK(linalg::rank_tol(block[0].h_sc.leftCols((cfg.kd + 1) * cfg.n)) == cfg.n);
  CHECK(st.csi_slot1.size() == 2);
  CHECK(st.fed_back.size() == 2);
}

TEST_CASE("zero satellite payload is received as zero") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 2);
  const auto st = dcsi::phase1(cfg, block[0], CVec::Zero(6));
  CHECK(st.satuser_hat[1].norm() == 0.0);
  CHECK(st.rx_hat[0][1].norm() == 0.0);
}

TEST_CASE("phase-2 slots decompose into the common term plus the fresh term") {
  const auto cfg = session_cfg(3, 2);
  const auto block = generic_block(cfg, 3);
  Rng rng(33);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  const auto st = run_phases(cfg, block, payloads);

  const CVec common = st.sum_slot1 * st.x_s1;
  for (int t = 2; t <= cfg.kd + 1; ++t) {
    const int retx = t - 1;
    for (int rx = 1; rx <= cfg.kd; ++rx) {
      CVec expected = common;
      if (rx != retx) expected += st.desired_eff[rx - 1][t] * payloads.fresh[rx - 1][t];
      const CVec gap = st.rx_hat[rx - 1][t] - expected;
      CHECK(gap.norm() <= 1e-8 * (1.0 + expected.norm()));
    }
  }
}

TEST_CASE("the merged retransmission equals the satellite's own footprint") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 4);
  Rng rng(44);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  const auto st = run_phases(cfg, block, payloads);

  for (int t = 2; t <= cfg.kd + 1; ++t) {
    const int retx = t - 1;
    const auto& ch = block[t - 1];
    const CMat& theta = st.ris_designs[t].theta;
    for (int rx = 1; rx <= cfg.kd; ++rx) {
      const CMat v = CMat(ch.h_skr[rx - 1].leftCols(cfg.n)).inverse();
      const CMat merged =
          v * (ch.h_ktkr[retx - 1][rx - 1] + ch.h_rkr[rx - 1] * theta * ch.h_ktr[retx - 1]);
      // Retransmitter's contribution after merging: the fed-back vector
      // itself, i.e. the slot-1 channel applied to the satellite payload.
      const CVec via_merge = merged * st.fed_back[retx - 1];
      const CVec direct = st.csi_slot1[retx - 1] * st.x_s1;
      CHECK((via_merge - direct).norm() <= 1e-8 * (1.0 + direct.norm()));
    }
  }
}

TEST_CASE("satellite user sees only the resent combinations in phase 2") {
  const auto cfg = session_cfg(3, 2);
  const auto block = generic_block(cfg, 5);
  Rng rng(55);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  const auto st = run_phases(cfg, block, payloads);
  for (int t = 2; t <= cfg.kd + 1; ++t) {
    const CVec expected = st.stack_blocks[t - 1] * st.x_s1;
    CHECK((st.satuser_hat[t] - expected).norm() <= 1e-8 * (1.0 + expected.norm()));
  }
}

TEST_CASE("phase-2 nulling load per slot") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 6);
  Rng rng(66);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  auto st = dcsi::phase1(cfg, block[0], payloads.satellite);
  std::vector<CVec> fresh(cfg.kd);
  fresh[1] = payloads.fresh[1][2];
  dcsi::phase2_slot(st, block[1], fresh);
  // (kd^2 + 1) blocks of n^2 scalars each.
  CHECK(st.ris_designs[2].residuals.size() == 5);
  CHECK(dcsi::ris_elements_required(2, 2) == 20);
  CHECK(st.ris_designs[2].max_residual <= 1e-8);
}

TEST_CASE("phase 3 carries only the repeated fresh payloads") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 7);
  Rng rng(77);
  auto payloads = dcsi::random_payloads(cfg, rng);
  for (auto& per_tx : payloads.fresh)
    for (auto& v : per_tx)
      if (v.size() > 0) v.setZero();
  const auto st = run_phases(cfg, block, payloads);
  // Satellite silent and all repeated payloads zero: nothing arrives.
  CHECK(st.rx_hat[0][cfg.kd + 2].norm() <= 1e-10);
  CHECK(st.rx_hat[1][cfg.kd + 2].norm() <= 1e-10);
}

TEST_CASE("satellite-user stack is square and full rank") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 8);
  Rng rng(88);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  const auto st = run_phases(cfg, block, payloads);
  CMat stack((cfg.kd + 1) * cfg.n, (cfg.kd + 1) * cfg.n);
  for (int t = 1; t <= cfg.kd + 1; ++t)
    stack.middleRows((t - 1) * cfg.n, cfg.n) = st.stack_blocks[t - 1];
  CHECK(stack.rows() == 6);
  CHECK(linalg::rank_tol(stack) == 6);

  const CVec decoded = dcsi::decode_satuser(st);
  CHECK(relative_error(st.x_s1, decoded) <= 1e-6);
}

TEST_CASE("difference decoding recovers every fresh payload") {
  for (int kd : {2, 3, 4}) {
    const auto cfg = session_cfg(kd, 2);
    const auto block = generic_block(cfg, 100 + kd);
    Rng rng(200 + kd);
    const auto payloads = dcsi::random_payloads(cfg, rng);
    const auto st = run_phases(cfg, block, payloads);
    for (int rx = 1; rx <= kd; ++rx) {
      const auto decoded = dcsi::decode_d2d(st, rx);
      const auto slots = dcsi::fresh_slots_of_tx(rx, kd);
      REQUIRE(decoded.size() == slots.size());
      CHECK(static_cast<int>(decoded.size()) == kd - 1);
      for (std::size_t i = 0; i < slots.size(); ++i)
        CHECK(relative_error(payloads.fresh[rx - 1][slots[i]], decoded[i]) <= 1e-6);
    }
  }
}

TEST_CASE("full session counts the space-time DoF") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 9);
  Rng rng(99);
  const auto outcome = dcsi::run(cfg, block, dcsi::random_payloads(cfg, rng));
  CHECK(outcome.slots == 4);
  CHECK(outcome.recovery_err <= 1e-6);
  CHECK(outcome.interference_residual <= 1e-8);
  CHECK(outcome.dof_counted == Rational(5, 2));  // (kd^2+1)n/(kd+2)
}

TEST_CASE("all-zero payloads recover to zero") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 10);
  dcsi::Payloads payloads;
  payloads.satellite = CVec::Zero(6);
  payloads.fresh.assign(2, std::vector<CVec>(cfg.kd + 3));
  for (int tx = 1; tx <= cfg.kd; ++tx)
    for (int t : dcsi::fresh_slots_of_tx(tx, cfg.kd)) payloads.fresh[tx - 1][t] = CVec::Zero(2);
  const auto outcome = dcsi::run(cfg, block, payloads);
  CHECK(outcome.recovery_err <= 1e-8);
  for (const auto& r : outcome.recovered) CHECK(r.norm() <= 1e-8);
}

TEST_CASE("session needs enough satellite antennas") {
  auto cfg = session_cfg(2, 2);
  cfg.ms = 5;
  const auto block = generic_block(session_cfg(2, 2), 11);
  Rng rng(12);
  CHECK_THROWS_AS(dcsi::run(cfg, block, dcsi::random_payloads(cfg, rng)), std::invalid_argument);
}

TEST_CASE("session trace is one json object per slot plus a decode status") {
  const auto cfg = session_cfg(2, 2);
  const auto block = generic_block(cfg, 13);
  Rng rng(13);
  const auto payloads = dcsi::random_payloads(cfg, rng);
  const auto st = run_phases(cfg, block, payloads);
  const std::string trace = dcsi::session_trace_jsonl(st);

  std::vector<std::string> lines;
  std::stringstream stream(trace);
  for (std::string line; std::getline(stream, line);) lines.push_back(line);
  REQUIRE(lines.size() == static_cast<std::size_t>(cfg.kd + 2) + 1);

  const auto slot1 = nlohmann::json::parse(lines[0]);
  CHECK(slot1.at("phase") == 1);
  CHECK(slot1.at("satellite") == "flood");
  const auto slot2 = nlohmann::json::parse(lines[1]);
  CHECK(slot2.at("retransmitter") == 1);
  CHECK(slot2.at("constraints") == 5);
  const auto last = nlohmann::json::parse(lines.back());
  CHECK(last.at("satuser_stack_full_rank") == true);
  CHECK(last.at("d2d_systems_solvable").size() == 2);
}

TEST_CASE("fresh-slot bookkeeping skips the retransmission turn") {
  CHECK(dcsi::fresh_slots_of_tx(1, 3) == std::vector<int>{3, 4});
  CHECK(dcsi::fresh_slots_of_tx(2, 3) == std::vector<int>{2, 4});
  CHECK(dcsi::fresh_slots_of_tx(3, 3) == std::vector<int>{2, 3});
  CHECK(dcsi::last_fresh_slot(3, 3) == 3);
  CHECK(dcsi::last_fresh_slot(1, 3) == 4);
}

}  // TEST_SUITE
