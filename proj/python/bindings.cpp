#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracimp/commands.hpp"
#include "fracimp/errors.hpp"
#include "fracimp/fractional_calculus.hpp"
#include "fracimp/special_functions.hpp"

namespace py = pybind11;
using namespace fracimp;

namespace {

SampledFunction uniform_samples(double a, double b, const std::vector<double>& values) {
    if (values.size() < 2) throw DomainError("need at least two samples");
    return SampledFunction(Grid::uniform(a, b, values.size() - 1), values);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fractional calculus kernels and the fracimp command pipelines";

    py::register_exception<std::runtime_error>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("gamma_fn", &gamma_fn, py::arg("x"));
    m.def("log_gamma_fn", &log_gamma_fn, py::arg("x"));
    m.def(
        "beta_fn", [](double xi, double sigma) { return beta_fn({xi, sigma}); }, py::arg("xi"), py::arg("sigma"));
    m.def(
        "weighted_power_integral",
        [](double alpha_exp, double p, double beta_exp, double gamma_exp, double tau) {
            return weighted_power_integral({alpha_exp, p, beta_exp, gamma_exp, tau});
        },
        py::arg("alpha_exp"), py::arg("p"), py::arg("beta_exp"), py::arg("gamma_exp"), py::arg("tau"));
    m.def("mittag_leffler", &mittag_leffler, py::arg("alpha"), py::arg("z"));

    m.def(
        "rl_integral",
        [](double a, double b, const std::vector<double>& values, double beta) {
            return rl_integral_nodes(uniform_samples(a, b, values), beta);
        },
        py::arg("a"), py::arg("b"), py::arg("values"), py::arg("beta"),
        "I^beta at every node of a uniform grid on [a, b]");
    m.def(
        "caputo_derivative",
        [](double a, double b, const std::vector<double>& values, double alpha) {
            return caputo_derivative_nodes(uniform_samples(a, b, values), alpha);
        },
        py::arg("a"), py::arg("b"), py::arg("values"), py::arg("alpha"),
        "L1 Caputo derivative at every node of a uniform grid on [a, b]");
    m.def("rl_integral_continuous", &rl_integral_continuous, py::arg("g"), py::arg("beta"), py::arg("a"),
          py::arg("tau"));

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_text, std::optional<double> grid_density,
           std::optional<double> theta, bool json_only) {
            RunOptions o;
            o.grid_density = grid_density;
            o.theta = theta;
            o.json_only = json_only;
            CommandOutput out;
            {
                py::gil_scoped_release release;
                out = run_command(command, config_text, o);
            }
            return py::make_tuple(out.exit_code, out.artifacts, out.messages);
        },
        py::arg("command"), py::arg("config_text") = "", py::arg("grid_density") = py::none(),
        py::arg("theta") = py::none(), py::arg("json_only") = false);
}
