#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mollerscat/config.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> as_array(const moller::rvec& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::complex<double>> as_array(const moller::cvec& v) {
    return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict result_to_dict(const moller::RunResult& r) {
    py::dict d;
    d["config"] = moller::config_to_json_text(r.resolved);
    d["tau_v"] = r.tau_v;
    d["tau0"] = r.moller_trace.tau0;
    d["moller_taus"] = as_array(r.moller_trace.taus);
    d["moller_residuals"] = as_array(r.moller_trace.residuals);
    d["t"] = as_array(r.corr.times);
    d["corr"] = as_array(r.corr.values);
    d["corr_stderr"] = as_array(r.corr.stderrs);

    moller::rvec e, p;
    moller::cvec s;
    std::vector<bool> mask;
    for (const auto& pt : r.smat) {
        e.push_back(pt.energy);
        s.push_back(pt.s);
        p.push_back(pt.valid ? std::norm(pt.s) : 0.0);
        mask.push_back(pt.valid);
    }
    d["energy"] = as_array(e);
    d["s"] = as_array(s);
    d["p"] = as_array(p);
    d["mask"] = py::cast(mask);
    return d;
}

} // namespace

PYBIND11_MODULE(_mollerscat, m) {
    m.doc() = "Moller-operator S-matrix engine (classical and emulated-quantum backends)";

    // Base first: pybind11 exception translators run newest-first, so the
    // derived ConfigError must be registered after its EngineError base or
    // the base translator swallows it.
    py::register_exception<moller::EngineError>(m, "EngineError", PyExc_RuntimeError);
    py::register_exception<moller::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("preset_names", &moller::preset_names, "Built-in experiment preset names");
    m.def(
        "preset",
        [](const std::string& name) { return moller::config_to_json_text(moller::preset(name)); },
        py::arg("name"), "Preset as a JSON run-config string");
    m.def(
        "validate",
        [](const std::string& config_json) {
            return moller::validate_config(moller::config_from_json_text(config_json));
        },
        py::arg("config_json"), "Dry-run checks; returns a list of violations (empty = valid)");
    m.def(
        "run",
        [](const std::string& config_json) {
            moller::RunConfig c = moller::config_from_json_text(config_json);
            return result_to_dict(moller::run_experiment(c));
        },
        py::arg("config_json"),
        "Execute a run config; returns correlation series, S-matrix and Moller trace");
    m.def(
        "run_and_export",
        [](const std::string& config_json, const std::string& out_dir) {
            moller::RunConfig c = moller::config_from_json_text(config_json);
            return result_to_dict(moller::run_and_export(c, out_dir));
        },
        py::arg("config_json"), py::arg("out_dir") = std::string(),
        "run() plus CSV/JSON export");
    m.def("shot_plan", &moller::shot_plan, py::arg("eps"), py::arg("delta") = 0.05,
          "Shots for absolute error eps at confidence 1 - delta");
}
