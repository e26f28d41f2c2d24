// Python bindings for the core operations: CSI classification, config
// validation, closed-form DoF evaluators, channel samplers, scheme runs,
// and figure sweep data.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sagin/channel.hpp"
#include "sagin/dof.hpp"
#include "sagin/harness.hpp"
#include "sagin/rate.hpp"

namespace py = pybind11;
using namespace sagin;

namespace {

SystemConfig config_from_kwargs(int kd, int n, int ms, int l, double p_s, double p_k,
                                double sigma2, std::uint64_t seed,
                                const std::vector<double>& snr_grid_db) {
  SystemConfig cfg;
  cfg.kd = kd;
  cfg.n = n;
  cfg.ms = ms;
  cfg.l = l;
  cfg.p_s = p_s;
  cfg.p_k = p_k;
  cfg.sigma2 = sigma2;
  cfg.seed = seed;
  cfg.snr_grid_db = snr_grid_db;
  return cfg;
}

py::dict dof_point_dict(const DofPoint& p) {
  py::dict d;
  d["num"] = p.dof.num;
  d["den"] = p.dof.den;
  d["value"] = p.dof.value();
  d["regime"] = to_string(p.regime);
  return d;
}

py::dict outcome_dict(const SchemeOutcome& o) {
  py::dict d;
  d["recovery_err"] = o.recovery_err;
  d["max_residual"] = o.interference_residual;
  d["dof_num"] = o.dof_counted.num;
  d["dof_den"] = o.dof_counted.den;
  d["slots"] = o.slots;
  if (!o.sinks.empty()) d["empirical_dof"] = rate::empirical_dof(o.sinks, {40.0, 60.0});
  return d;
}

}  // namespace

PYBIND11_MODULE(_sagin, m) {
  m.doc() = "UAV-RIS interference management: schemes, DoF evaluators, channel models";

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init(&config_from_kwargs), py::arg("kd") = 2, py::arg("n") = 2, py::arg("ms") = 6,
           py::arg("l") = 16, py::arg("p_s") = 1.0, py::arg("p_k") = 1.0, py::arg("sigma2") = 1.0,
           py::arg("seed") = 1, py::arg("snr_grid_db") = std::vector<double>{40.0, 60.0})
      .def_readwrite("kd", &SystemConfig::kd)
      .def_readwrite("n", &SystemConfig::n)
      .def_readwrite("ms", &SystemConfig::ms)
      .def_readwrite("l", &SystemConfig::l)
      .def_readwrite("seed", &SystemConfig::seed);

  m.def(
      "classify_csi",
      [](double t_p, double t_f, double t_c, double t_acq) {
        return std::string(to_string(classify_csi({t_p, t_f, t_c, t_acq})));
      },
      py::arg("t_p"), py::arg("t_f"), py::arg("t_c"), py::arg("t_acq"));

  m.def("validate", [](const SystemConfig& cfg) {
    const auto report = validate(cfg);
    py::dict d;
    d["errors"] = report.errors;
    d["warnings"] = report.warnings;
    d["ok"] = report.ok();
    return d;
  });

  m.def("dof_t1", [](int kd, int n) {
    const Rational r = dof_t1(kd, n);
    return py::make_tuple(r.num, r.den);
  });
  m.def("dof_t2", [](int ms, int kd, int n) { return dof_point_dict(dof_t2(ms, kd, n)); });
  m.def("dof_t3", [](int ms, int kd, int n) { return dof_point_dict(dof_t3(ms, kd, n)); });
  m.def("select_scheme", [](const std::string& csi, int ms, int kd, int n) {
    const auto choice = select_scheme(csi_from_string(csi), ms, kd, n);
    py::dict d = dof_point_dict(choice.point);
    d["scheme"] = to_string(choice.scheme);
    return d;
  });

  m.def(
      "sample_shadowed_rician",
      [](int rows, int cols, double b, double mshape, double omega, std::uint64_t seed) {
        FadingParams params;
        params.sr_b = b;
        params.sr_m = mshape;
        params.sr_omega = omega;
        Rng rng(seed);
        return CMat(sample_shadowed_rician(rows, cols, params, rng));
      },
      py::arg("rows"), py::arg("cols"), py::arg("b") = 0.126, py::arg("m") = 10.1,
      py::arg("omega") = 0.835, py::arg("seed") = 1);

  m.def(
      "sample_nakagami",
      [](int rows, int cols, double mshape, double omega, std::uint64_t seed) {
        FadingParams params;
        params.nak_m = mshape;
        params.nak_omega = omega;
        Rng rng(seed);
        return CMat(sample_nakagami(rows, cols, params, rng));
      },
      py::arg("rows"), py::arg("cols"), py::arg("m") = 1.0, py::arg("omega") = 1.0,
      py::arg("seed") = 1);

  m.def(
      "run_scheme",
      [](const std::string& scheme, const SystemConfig& cfg, std::uint64_t seed, bool generic) {
        FadingParams fading;
        fading.generic_gaussian = generic;
        return outcome_dict(harness::run_single(cfg, scheme_from_string(scheme), fading, seed));
      },
      py::arg("scheme"), py::arg("config"), py::arg("seed") = 1, py::arg("generic") = true);

  m.def("figure_data",
        [](const std::string& name) { return harness::figure_data(harness::figure_from_string(name)); });
}
