#pragma once

#include <string>
#include <vector>

#include "sagin/channel.hpp"
#include "sagin/config.hpp"
#include "sagin/rational.hpp"
#include "sagin/ris.hpp"
#include "sagin/types.hpp"

namespace sagin {

enum class SchemeId { NoCsi, Icsi, Dcsi };

const char* to_string(SchemeId id);
SchemeId scheme_from_string(const std::string& name);

// Per-slot precoders/decoders and RIS design of a one-slot scheme.
struct SchemePlan {
  CMat w_s;                  // satellite precoder, Ms x satellite streams
  std::vector<CMat> w_kt;    // per-transmitter symbol-to-antenna maps
  std::vector<CMat> v_kr;    // per-receiver decoders
  CMat v_c;                  // satellite-user decoder
  ris::RisDesign ris;
  int streams_sat = 0;
  int streams_d2d = 0;
  int slots = 1;
  std::vector<int> aligned_tx_at_rx;  // only the alignment scheme fills this
};

// Raw (antenna-space) symbol-to-receive-antenna maps of one sink; used by
// the rate-slope estimator. Power ratios relative to the reference source
// are already folded into the blocks.
struct SinkBlocks {
  std::string sink;
  CMat desired;
  std::vector<CMat> interference;
};

struct SchemeOutcome {
  std::vector<CVec> sent;       // index 0 satellite, then one per D2D source
  std::vector<CVec> recovered;
  double recovery_err = 0.0;            // max relative error over sources
  double interference_residual = 0.0;   // max nulled-block norm after the RIS solve
  Rational dof_counted;                 // recovered streams / slots
  int slots = 1;
  std::vector<SinkBlocks> sinks;
  ris::VerifyReport verify_report;
  std::vector<int> aligned_dims;        // alignment scheme: per-receiver subspace dims
};

double relative_error(const CVec& sent, const CVec& recovered);

nlohmann::ordered_json outcome_to_json(const SchemeOutcome& outcome);

}  // namespace sagin
