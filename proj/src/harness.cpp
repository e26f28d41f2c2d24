#include "sagin/harness.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sagin/rate.hpp"
#include "sagin/scheme_dcsi.hpp"
#include "sagin/scheme_icsi.hpp"
#include "sagin/scheme_nocsi.hpp"

namespace sagin::harness {

namespace {

void check_feasible(const SystemConfig& cfg, SchemeId scheme) {
  const auto report = validate(cfg);
  if (!report.ok()) throw std::invalid_argument("config: " + report.errors.front());
  switch (scheme) {
    case SchemeId::NoCsi:
      if (cfg.kd < 2) throw std::invalid_argument("nocsi needs kd >= 2");
      if (cfg.n % 2 != 0) throw std::invalid_argument("nocsi simulation needs even n");
      if (cfg.ms < cfg.n) throw std::invalid_argument("nocsi needs ms >= n");
      break;
    case SchemeId::Icsi:
      if (cfg.ms < (cfg.kd + 1) * cfg.n)
        throw std::invalid_argument("icsi simulation needs ms >= (kd+1)*n");
      break;
    case SchemeId::Dcsi:
      if (cfg.kd < 2) throw std::invalid_argument("dcsi needs kd >= 2");
      if (cfg.ms < (cfg.kd + 1) * cfg.n)
        throw std::invalid_argument("dcsi simulation needs ms >= (kd+1)*n");
      break;
  }
}

}  // namespace

SchemeOutcome run_single(const SystemConfig& cfg, SchemeId scheme, const FadingParams& fading,
                         std::uint64_t seed) {
  Rng rng(seed);
  switch (scheme) {
    case SchemeId::NoCsi: {
      const auto ch = generate_slot(cfg, fading, rng, 1);
      const auto payloads = nocsi::random_payloads(cfg, rng);
      return nocsi::run(cfg, ch, payloads);
    }
    case SchemeId::Icsi: {
      const auto ch = generate_slot(cfg, fading, rng, 1);
      const auto payloads = icsi::random_payloads(cfg, rng);
      return icsi::run(cfg, ch, payloads);
    }
    case SchemeId::Dcsi: {
      const auto block = generate_block(cfg, fading, rng, cfg.kd + 2);
      const auto payloads = dcsi::random_payloads(cfg, rng);
      return dcsi::run(cfg, block, payloads);
    }
  }
  throw std::logic_error("run_single: unreachable");
}

TrialReport run_experiment(const SystemConfig& cfg, SchemeId scheme, int trials,
                           const FadingParams& fading, int threads) {
  if (trials < 0) throw std::invalid_argument("run_experiment: trials must be >= 0");
  check_feasible(cfg, scheme);

  TrialReport report;
  report.cfg = cfg;
  report.scheme = scheme;
  report.fading = fading;
  report.rows.resize(trials);
  if (trials == 0) return report;

  const auto t0 = std::chrono::steady_clock::now();

  const bool want_empirical =
      cfg.snr_grid_db.size() >= 2 && cfg.snr_grid_db.front() >= 30.0 && scheme != SchemeId::Dcsi;

  auto run_trial = [&](int trial) {
    TrialRow row;
    row.trial = trial;
    row.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    const SchemeOutcome outcome = run_single(cfg, scheme, fading, row.seed);
    row.max_residual = outcome.interference_residual;
    row.recovery_err = outcome.recovery_err;
    row.dof = outcome.dof_counted;
    if (!outcome.sinks.empty()) {
      row.sum_rates.reserve(cfg.snr_grid_db.size());
      for (double snr_db : cfg.snr_grid_db)
        row.sum_rates.push_back(rate::sum_rate(outcome.sinks, snr_db));
      if (want_empirical) {
        row.empirical_dof = rate::empirical_dof(
            outcome.sinks, {cfg.snr_grid_db.front(), cfg.snr_grid_db.back()});
        row.has_empirical = true;
      }
    }
    report.rows[trial] = std::move(row);
  };

  const int workers = std::max(1, std::min(threads, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int t = next.fetch_add(1);
          if (t >= trials) return;
          try {
            run_trial(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // Order-fixed reduction so the report does not depend on scheduling.
  report.sum_rate_mean.assign(cfg.snr_grid_db.size(), 0.0);
  bool any_rates = false;
  for (const auto& row : report.rows) {
    report.residual_max = std::max(report.residual_max, row.max_residual);
    report.residual_mean += row.max_residual / trials;
    report.recovery_max = std::max(report.recovery_max, row.recovery_err);
    report.recovery_mean += row.recovery_err / trials;
    if (!row.sum_rates.empty()) {
      any_rates = true;
      for (std::size_t i = 0; i < row.sum_rates.size(); ++i)
        report.sum_rate_mean[i] += row.sum_rates[i] / trials;
    }
  }
  if (!any_rates) report.sum_rate_mean.clear();
  report.dof = report.rows.front().dof;
  for (const auto& row : report.rows) report.dof_uniform = report.dof_uniform && row.dof == report.dof;

  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

std::string report_json(const TrialReport& report) {
  nlohmann::ordered_json doc;
  doc["config"] = config_to_json(report.cfg);
  doc["scheme"] = to_string(report.scheme);
  nlohmann::ordered_json fading;
  fading["model"] = report.fading.generic_gaussian ? "generic-gaussian" : "sr-nakagami";
  fading["sr_b"] = report.fading.sr_b;
  fading["sr_m"] = report.fading.sr_m;
  fading["sr_omega"] = report.fading.sr_omega;
  fading["nak_m"] = report.fading.nak_m;
  fading["nak_omega"] = report.fading.nak_omega;
  doc["fading"] = std::move(fading);

  doc["trials"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json jrow;
    jrow["trial"] = row.trial;
    jrow["seed"] = row.seed;
    jrow["max_residual"] = row.max_residual;
    jrow["recovery_err"] = row.recovery_err;
    jrow["dof_num"] = row.dof.num;
    jrow["dof_den"] = row.dof.den;
    jrow["sum_rates"] = row.sum_rates;
    if (row.has_empirical) jrow["empirical_dof"] = row.empirical_dof;
    doc["trials"].push_back(std::move(jrow));
  }

  nlohmann::ordered_json agg;
  agg["trials"] = report.rows.size();
  agg["max_residual_max"] = report.residual_max;
  agg["max_residual_mean"] = report.residual_mean;
  agg["recovery_err_max"] = report.recovery_max;
  agg["recovery_err_mean"] = report.recovery_mean;
  agg["sum_rate_mean"] = report.sum_rate_mean;
  agg["dof_num"] = report.dof.num;
  agg["dof_den"] = report.dof.den;
  agg["dof_uniform"] = report.dof_uniform;
  doc["aggregate"] = std::move(agg);
  return doc.dump(2) + "\n";
}

bool report_passes(const TrialReport& report) {
  return report.residual_max <= 1e-8 && report.recovery_max <= 1e-6;
}

VerifyResult verify_config(const SystemConfig& cfg, SchemeId scheme, const FadingParams& fading) {
  check_feasible(cfg, scheme);
  Rng rng(cfg.seed);
  VerifyResult result;
  switch (scheme) {
    case SchemeId::NoCsi: {
      const auto ch = generate_slot(cfg, fading, rng, 1);
      const auto plan = nocsi::plan(cfg, ch);
      result.max_residual = plan.ris.max_residual;
      for (std::size_t i = 0; i < plan.ris.residuals.size(); ++i)
        result.residuals.emplace_back(plan.ris.labels[i], plan.ris.residuals[i]);
      break;
    }
    case SchemeId::Icsi: {
      const auto ch = generate_slot(cfg, fading, rng, 1);
      const auto plan = icsi::plan(cfg, ch);
      result.max_residual = plan.ris.max_residual;
      for (std::size_t i = 0; i < plan.ris.residuals.size(); ++i)
        result.residuals.emplace_back(plan.ris.labels[i], plan.ris.residuals[i]);
      break;
    }
    case SchemeId::Dcsi: {
      const auto block = generate_block(cfg, fading, rng, cfg.kd + 2);
      const auto payloads = dcsi::random_payloads(cfg, rng);
      dcsi::SessionState st = dcsi::phase1(cfg, block[0], payloads.satellite);
      for (int t = 2; t <= cfg.kd + 1; ++t) {
        std::vector<CVec> fresh(cfg.kd);
        for (int tx = 1; tx <= cfg.kd; ++tx)
          if (tx != t - 1) fresh[tx - 1] = payloads.fresh[tx - 1][t];
        dcsi::phase2_slot(st, block[t - 1], fresh);
      }
      dcsi::phase3(st, block[cfg.kd + 1]);
      result.max_residual = st.max_residual;
      for (const auto& design : st.ris_designs)
        for (std::size_t i = 0; i < design.residuals.size(); ++i)
          result.residuals.emplace_back(design.labels[i], design.residuals[i]);
      break;
    }
  }
  return result;
}

std::string figure_data(Figure which) {
  switch (which) {
    case Figure::Fig3: {
      SweepSpec spec;
      spec.axis = SweepAxis::N;
      spec.lo = 2;
      spec.hi = 8;
      spec.kd = 6;
      spec.ms_full_antenna = true;
      return sweep_csv(sweep(spec));
    }
    case Figure::Fig4: {
      std::vector<SweepRow> rows;
      for (int n : {2, 3}) {
        SweepSpec spec;
        spec.axis = SweepAxis::Kd;
        spec.lo = 2;
        spec.hi = 10;
        spec.n = n;
        spec.ms_full_antenna = true;
        const auto part = sweep(spec);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      return sweep_csv(rows);
    }
    case Figure::Fig5: {
      SweepSpec spec;
      spec.axis = SweepAxis::Ms;
      spec.lo = 3;
      spec.hi = 99;
      spec.kd = 6;
      spec.n = 3;
      return sweep_csv(sweep(spec));
    }
  }
  throw std::logic_error("figure_data: unreachable");
}

Figure figure_from_string(const std::string& name) {
  if (name == "fig3") return Figure::Fig3;
  if (name == "fig4") return Figure::Fig4;
  if (name == "fig5") return Figure::Fig5;
  throw std::invalid_argument("unknown figure: " + name);
}

}  // namespace sagin::harness
