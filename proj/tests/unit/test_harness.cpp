#include <doctest.h>

#include <cmath>

#include "sagin/harness.hpp"
#include "sagin/rate.hpp"
#include "sagin/scheme_icsi.hpp"

using namespace sagin;

namespace {

SystemConfig icsi_cfg() {
  SystemConfig cfg;
  cfg.kd = 2;
  cfg.n = 2;
  cfg.ms = 6;
  cfg.l = 16;
  cfg.seed = 21;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("rate slope of a clean identity link is the stream count") {
  SinkBlocks sink;
  sink.sink = "ideal";
  sink.desired = CMat::Identity(3, 3);
  const double slope = rate::empirical_dof({sink}, {40.0, 60.0});
  CHECK(std::abs(slope - 3.0) <= 0.01);
}

TEST_CASE("zero desired channel has zero slope") {
  SinkBlocks sink;
  sink.sink = "dead";
  sink.desired = CMat::Zero(3, 3);
  CHECK(std::abs(rate::empirical_dof({sink}, {40.0, 60.0})) <= 1e-9);
}

TEST_CASE("interference confined to a subspace costs its dimension") {
  // Desired identity on 4 antennas, interference occupying 2 of them.
  SinkBlocks sink;
  sink.sink = "half";
  sink.desired = CMat::Identity(4, 4);
  CMat jam = CMat::Zero(4, 2);
  jam(0, 0) = 1.0;
  jam(1, 1) = 1.0;
  sink.interference.push_back(jam);
  const double slope = rate::empirical_dof({sink}, {40.0, 60.0});
  CHECK(std::abs(slope - 2.0) <= 0.05);
}

TEST_CASE("slope estimator rejects low-snr points") {
  SinkBlocks sink;
  sink.desired = CMat::Identity(2, 2);
  CHECK_THROWS_AS(rate::empirical_dof({sink}, {10.0, 60.0}), std::invalid_argument);
  CHECK_THROWS_AS(rate::empirical_dof({sink}, {60.0, 40.0}), std::invalid_argument);
}

TEST_CASE("full-antenna instantaneous instance meets its counted slope") {
  const auto cfg = icsi_cfg();
  FadingParams fading;
  fading.generic_gaussian = true;
  const auto outcome = harness::run_single(cfg, SchemeId::Icsi, fading, 5);
  const double slope = rate::empirical_dof(outcome.sinks, {40.0, 60.0});
  CHECK(std::abs(slope - 6.0) <= 0.05);
}

TEST_CASE("experiment reports are deterministic and threads do not matter") {
  const auto cfg = icsi_cfg();
  FadingParams fading;
  fading.generic_gaussian = true;
  const auto a = harness::run_experiment(cfg, SchemeId::Icsi, 6, fading, 1);
  const auto b = harness::run_experiment(cfg, SchemeId::Icsi, 6, fading, 1);
  const auto c = harness::run_experiment(cfg, SchemeId::Icsi, 6, fading, 4);
  CHECK(harness::report_json(a) == harness::report_json(b));
  CHECK(harness::report_json(a) == harness::report_json(c));
  CHECK(harness::report_passes(a));
  CHECK(a.dof_uniform);
  CHECK(a.dof == Rational(6, 1));
}

TEST_CASE("per-trial seeds differ and shuffle the draws") {
  const auto cfg = icsi_cfg();
  FadingParams fading;
  fading.generic_gaussian = true;
  const auto report = harness::run_experiment(cfg, SchemeId::Icsi, 3, fading, 1);
  CHECK(report.rows[0].seed != report.rows[1].seed);
  CHECK(report.rows[0].sum_rates[0] != doctest::Approx(report.rows[1].sum_rates[0]));
}

TEST_CASE("zero trials produce an empty report without error") {
  const auto report =
      harness::run_experiment(icsi_cfg(), SchemeId::Icsi, 0, FadingParams{}, 1);
  CHECK(report.rows.empty());
  CHECK(harness::report_json(report).find("\"trials\": []") != std::string::npos);
}

TEST_CASE("infeasible scheme and config combinations are structured errors") {
  auto cfg = icsi_cfg();
  cfg.ms = 4;  // below (kd+1)*n
  CHECK_THROWS_AS(harness::run_experiment(cfg, SchemeId::Icsi, 1, FadingParams{}, 1),
                  std::invalid_argument);
  auto odd = icsi_cfg();
  odd.n = 3;
  odd.ms = 3;
  CHECK_THROWS_AS(harness::run_experiment(odd, SchemeId::NoCsi, 1, FadingParams{}, 1),
                  std::invalid_argument);
}

TEST_CASE("verify is a residual-only fast path") {
  const auto cfg = icsi_cfg();
  FadingParams fading;
  fading.generic_gaussian = true;
  const auto result = harness::verify_config(cfg, SchemeId::NoCsi, fading);
  CHECK(result.max_residual <= 1e-8);
  CHECK(result.residuals.size() == 4);  // kd^2 blocks at kd = 2
}

TEST_CASE("constructions hold under the fading laws, not just generic draws") {
  FadingParams fading;  // shadowed-Rician satellite links, Nakagami elsewhere
  const auto nocsi_out = harness::run_single(icsi_cfg(), SchemeId::NoCsi, fading, 31);
  CHECK(nocsi_out.interference_residual <= 1e-8);
  CHECK(nocsi_out.recovery_err <= 1e-6);

  const auto icsi_out = harness::run_single(icsi_cfg(), SchemeId::Icsi, fading, 32);
  CHECK(icsi_out.interference_residual <= 1e-8);
  CHECK(icsi_out.recovery_err <= 1e-6);

  auto dcfg = icsi_cfg();
  dcfg.l = 20;
  const auto dcsi_out = harness::run_single(dcfg, SchemeId::Dcsi, fading, 33);
  CHECK(dcsi_out.interference_residual <= 1e-8);
  CHECK(dcsi_out.recovery_err <= 1e-6);
}

TEST_CASE("scheme outcomes and reflection designs serialize") {
  FadingParams fading;
  fading.generic_gaussian = true;
  const auto outcome = harness::run_single(icsi_cfg(), SchemeId::Icsi, fading, 34);
  const auto doc = outcome_to_json(outcome);
  CHECK(doc.at("dof_num") == 6);
  CHECK(doc.at("sources").size() == 3);
  CHECK(doc.at("recovery_err").get<double>() <= 1e-6);

  const auto verify_doc = ris::to_json(outcome.verify_report);
  CHECK(verify_doc.at("max_interference").get<double>() <= 1e-8);
  CHECK(verify_doc.at("blocks").size() == outcome.verify_report.blocks.size());
}

TEST_CASE("figure data contains the analytic anchor rows") {
  const auto fig5 = harness::figure_data(harness::Figure::Fig5);
  CHECK(fig5.find("nocsi,none,6,3,3,324,21,2,noCSI") != std::string::npos);
  CHECK(fig5.find("icsi,instantaneous,6,3,99,324,21,1,icsi-full") != std::string::npos);
  CHECK(fig5.find("dcsi,delayed,6,3,99,333,579,34,dcsi-spacetime") != std::string::npos);

  const auto fig3 = harness::figure_data(harness::Figure::Fig3);
  CHECK(fig3.find("icsi,instantaneous,6,3,21,324,21,1,icsi-full") != std::string::npos);
  CHECK(fig3.find("dcsi,delayed,6,3,21,333,111,8,dcsi-spacetime") != std::string::npos);

  const auto fig4 = harness::figure_data(harness::Figure::Fig4);
  CHECK(fig4.find("nocsi,none,2,2,6,16,3,1,noCSI") != std::string::npos);
  CHECK(fig4.find("nocsi,none,10,2,22,400,11,1,noCSI") != std::string::npos);
}

}  // TEST_SUITE
