#pragma once

#include "sagin/schemes.hpp"

namespace sagin::icsi {

// Instantaneous-CSI scheme: the satellite beamforms into the zero space of
// the stacked satellite-to-D2D-receiver channel, so the D2D network never
// sees it; the RIS nulls every remaining cross term and all sources send N
// streams in one slot. Moderately delayed CSI is treated identically (the
// channel does not change for the rest of the coherence slot).

struct NullspacePlan {
  CMat w_sc;                  // Ms x width, orthonormal columns
  int silenced_per_receiver = 0;
  int effective_streams = 0;  // = columns of w_sc
};

// Orthonormal basis of null(H_{s,Dk}); width min(N, Ms - Kd*N). An empty
// plan (ms <= kd*n) is returned rather than thrown: the caller falls back
// to the no-CSI scheme.
NullspacePlan nullspace_precoder(const SystemConfig& cfg, const ChannelRealization& ch);

// Post-precoding satellite-to-user channel H_{s,c} * w_sc.
CMat effective_sat_channel(const ChannelRealization& ch, const NullspacePlan& plan);

struct SvdFactors {
  std::vector<CMat> w_kt;  // per-transmitter unitary precoders
  std::vector<CMat> v_kr;  // per-receiver decoders
  CMat w_s;                // Ms x width satellite precoder (null basis * B)
  CMat v_c;                // satellite-user decoder
};

SvdFactors svd_normalize(const ChannelRealization& ch, const NullspacePlan& plan);

// All cross-D2D blocks plus every D2D term at the satellite user; satellite
// interference needs no condition (already nulled by the precoder).
std::vector<ris::NullConstraint> build_constraints(const SystemConfig& cfg,
                                                   const ChannelRealization& ch,
                                                   const SvdFactors& factors);

SchemePlan plan(const SystemConfig& cfg, const ChannelRealization& ch);

std::vector<ris::EffectiveBlockSpec> effective_blocks(const SystemConfig& cfg,
                                                      const ChannelRealization& ch,
                                                      const SchemePlan& plan);

struct Payloads {
  CVec satellite;          // N
  std::vector<CVec> d2d;   // N each
};

Payloads random_payloads(const SystemConfig& cfg, Rng& rng);

// One-slot noiseless transmission; requires ms >= (kd+1)*n so the null
// space leaves N satellite streams. Counted DoF is (kd+1)*n.
SchemeOutcome run(const SystemConfig& cfg, const ChannelRealization& ch, const Payloads& payloads);

// Antenna-deficient regime psi < ms < (kd+1)*n: every terrestrial receiver
// silences antennas down to ceil(ms/(kd+1)) and the whole network settles
// at ceil(ms/(kd+1))*(kd+1) DoF.
struct DeficientPlan {
  int streams_per_sink = 0;
  int silenced_per_receiver = 0;
  Rational dof;
};

DeficientPlan deficient_plan(int ms, int kd, int n);

// Dimension-count check of the deficient plan: with receivers silenced to
// m = ceil(ms/(kd+1)) antennas and the satellite at the regime's critical
// count (kd+1)*m, the stacked channel's null space has width exactly m.
// Verified on generic draws.
bool deficient_rank_check(int ms, int kd, int n, std::uint64_t seed);

}  // namespace sagin::icsi
