#pragma once

#include <vector>

#include <json.hpp>

#include "sagin/config.hpp"
#include "sagin/rng.hpp"
#include "sagin/types.hpp"

namespace sagin {

// Fading parameters for the two link families. The shadowed-Rician defaults
// are the conventional average-shadowing values used throughout the
// land-mobile-satellite literature, not values fixed by the schemes; all of
// them are configuration choices.
struct FadingParams {
  double sr_b = 0.126;     // scattered-component half power
  double sr_m = 10.1;      // LOS Nakagami shape
  double sr_omega = 0.835; // LOS average power
  double nak_m = 1.0;      // terrestrial Nakagami shape
  double nak_omega = 1.0;  // terrestrial average power
  // Test mode: every entry CN(0,1). Alignment and rank properties of the
  // schemes are distribution-free, so suites may run on generic draws.
  bool generic_gaussian = false;

  void check() const;  // throws std::invalid_argument
};

// All per-slot channel matrices of the network. Dimensions follow the
// SystemConfig that produced the realization; entries are immutable after
// creation and safe to share across threads.
struct ChannelRealization {
  int slot = 1;
  CMat h_sc;                           // satellite -> satellite user, N x Ms
  std::vector<CMat> h_skr;             // satellite -> D2D receiver k, N x Ms
  std::vector<std::vector<CMat>> h_ktkr;  // [tx][rx], N x N
  std::vector<CMat> h_ktc;             // tx -> satellite user, N x N
  CMat h_rc;                           // RIS -> satellite user, N x L
  std::vector<CMat> h_rkr;             // RIS -> D2D receiver, N x L
  std::vector<CMat> h_ktr;             // tx -> RIS, L x N
};

// Entry law: scattered CN(0, 2b) plus a Nakagami(m, omega) line-of-sight
// amplitude with uniform phase; i.i.d. entries.
CMat sample_shadowed_rician(int rows, int cols, const FadingParams& params, Rng& rng);

// Entry law: Nakagami(m, omega) amplitude (amplitude^2 ~ Gamma(m, omega/m))
// with uniform phase; i.i.d. entries.
CMat sample_nakagami(int rows, int cols, const FadingParams& params, Rng& rng);

// Satellite links are shadowed-Rician, terrestrial and RIS links Nakagami.
ChannelRealization generate_slot(const SystemConfig& cfg, const FadingParams& params, Rng& rng,
                                 int slot);

// Independent draws per slot (block fading), slot indices 1..t_count.
std::vector<ChannelRealization> generate_block(const SystemConfig& cfg, const FadingParams& params,
                                               Rng& rng, int t_count);

// Replay dump: matrices as row-major [re, im] pairs with a dimensions header.
nlohmann::ordered_json realization_to_json(const ChannelRealization& ch);
ChannelRealization realization_from_json(const nlohmann::json& doc);

}  // namespace sagin
