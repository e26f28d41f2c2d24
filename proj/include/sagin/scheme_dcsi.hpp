#pragma once

#include "sagin/schemes.hpp"

namespace sagin::dcsi {

// Delayed-CSI space-time scheme over kd+2 slots. Slot 1: the satellite
// floods (kd+1)*n symbols while the D2D side stays silent; each receiver
// feeds its observation back to its paired transmitter. Slots 2..kd+1: the
// satellite resends known combinations of the slot-1 observations, one
// transmitter per slot retransmits its fed-back vector (merged by the RIS
// into the satellite's effective channel so every receiver sees the same
// satellite term each slot), and the remaining transmitters carry fresh
// payloads. Slot kd+2: the satellite is silent and every transmitter
// repeats its latest fresh payload. The satellite user stacks its kd+1
// observations into a square system; each D2D receiver differences out the
// common satellite term and inverts its effective blocks.

// Scalar nulling constraints per phase-2 slot: (kd^2 + 1) * n^2.
long long ris_elements_required(int kd, int n);

// Fresh-payload slots of one transmitter: {2..kd+1} minus its
// retransmission slot tx+1.
std::vector<int> fresh_slots_of_tx(int tx, int kd);
int last_fresh_slot(int tx, int kd);

struct Payloads {
  CVec satellite;                        // (kd+1)*n
  std::vector<std::vector<CVec>> fresh;  // [tx-1][slot], n each on fresh slots
};

Payloads random_payloads(const SystemConfig& cfg, Rng& rng);

struct SessionState {
  SystemConfig cfg;
  int slot = 1;   // last completed slot
  int phase = 1;

  CVec x_s1;                    // satellite slot-1 payload
  std::vector<CMat> csi_slot1;  // delayed CSI cache: satellite->receiver, slot 1 only
  CMat sum_slot1;               // sum of the cached slot-1 channels
  std::vector<CVec> fed_back;   // slot-1 observation held at each transmitter

  // Logs, indexed by slot (entry 0 unused).
  std::vector<std::vector<CVec>> rx_hat;     // [rx-1][t] post-decoder observations
  std::vector<CVec> satuser_hat;             // [t]
  std::vector<std::vector<CMat>> precoders;  // [tx-1][t]
  std::vector<std::vector<CMat>> desired_eff;  // [rx-1][t], fresh slots only
  std::vector<CMat> phase3_desired;          // [rx-1]
  std::vector<CMat> stack_blocks;            // satellite-user decode rows per slot
  std::vector<std::vector<CVec>> fresh_sent;  // [tx-1][t]
  std::vector<ris::RisDesign> ris_designs;   // per slot (entry 0 empty)
  double max_residual = 0.0;

  ChannelRealization prev_ch;  // previous slot, for the precoder recursion
};

SessionState phase1(const SystemConfig& cfg, const ChannelRealization& ch, const CVec& payload_s);

// Advances one phase-2 slot (2 <= t <= kd+1) with the given fresh payloads
// (the retransmitter's entry is ignored).
void phase2_slot(SessionState& state, const ChannelRealization& ch,
                 const std::vector<CVec>& fresh);

void phase3(SessionState& state, const ChannelRealization& ch);

// Stacks the kd+1 satellite-user observations and solves the square system.
CVec decode_satuser(const SessionState& state);

// Differences against the slot-(kr+1) observation cancel the common
// satellite term; the phase-3 row closes the block system for the kd-1
// fresh payloads of pair kr (returned in fresh-slot order).
std::vector<CVec> decode_d2d(const SessionState& state, int kr);

SchemeOutcome run(const SystemConfig& cfg, const std::vector<ChannelRealization>& block,
                  const Payloads& payloads);

// Session trace as JSON lines, one object per completed slot: transmitter
// roles, nulling residual, and (after the final slot) decode status.
std::string session_trace_jsonl(const SessionState& state);

}  // namespace sagin::dcsi
