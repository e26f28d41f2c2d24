#pragma once

#include "sagin/schemes.hpp"

namespace sagin::nocsi {

// No-CSI scheme: the satellite precodes blindly on N active antennas while
// each D2D transmitter steers its signal so that, at its cyclically
// designated victim receiver, it lands inside the satellite's interference
// subspace. The RIS nulls everything the alignment does not cover, and all
// sources send floor(N/2) streams in a single slot.

// Cyclic victim map: transmitter i aligns at receiver i-1, transmitter 1 at
// receiver K_d (1-based ids).
int aligned_rx_of_tx(int tx, int kd);
int aligned_tx_at_rx(int rx, int kd);

struct AlignmentPrecoders {
  CMat w_s;                // Ms x N, identity on the N active antennas
  std::vector<CMat> w_kt;  // N x N alignment precoders
};

// Solves H_{s,j} W_s = H_{i,j} W_i for each transmitter at its designated
// receiver. Requires kd >= 2 (the victim must differ from the served
// receiver) and generic N x N blocks; throws on degenerate channels.
AlignmentPrecoders design_alignment(const SystemConfig& cfg, const ChannelRealization& ch);

struct SvdFactors {
  std::vector<CMat> a;              // per receiver, unitary
  std::vector<CMat> b;              // per transmitter, unitary
  std::vector<Eigen::VectorXd> lambda;  // per receiver, nonincreasing
  std::vector<CMat> v_kr;           // a^H
  std::vector<CMat> w_bar;          // w_kt * b
};

// SVD of each aligned pre-coded block H_{i,j(i)} W_i = A_j Lambda B_i^H;
// decoders take A^H, precoders absorb B.
SvdFactors svd_normalize(const ChannelRealization& ch, const AlignmentPrecoders& pre);

// Satellite-user zero forcing over the N active satellite antennas.
CMat satuser_zf(const SystemConfig& cfg, const ChannelRealization& ch);

// Three families: cross interference from non-desired non-aligned
// transmitters, cascade-only conditions protecting each alignment, and all
// D2D terms at the satellite user.
std::vector<ris::NullConstraint> build_constraints(const SystemConfig& cfg,
                                                   const ChannelRealization& ch,
                                                   const AlignmentPrecoders& pre,
                                                   const SvdFactors& factors, const CMat& v_c);

SchemePlan plan(const SystemConfig& cfg, const ChannelRealization& ch);

std::vector<ris::EffectiveBlockSpec> effective_blocks(const SystemConfig& cfg,
                                                      const ChannelRealization& ch,
                                                      const SchemePlan& plan);

struct Payloads {
  CVec satellite;          // floor(N/2)
  std::vector<CVec> d2d;   // floor(N/2) each
};

Payloads random_payloads(const SystemConfig& cfg, Rng& rng);

// One-slot noiseless transmission and decoding. Requires even N, kd >= 2,
// ms >= n; counted DoF is (kd+1) * n/2 when recovery succeeds.
SchemeOutcome run(const SystemConfig& cfg, const ChannelRealization& ch, const Payloads& payloads);

}  // namespace sagin::nocsi
