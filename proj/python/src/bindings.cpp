#include <sstream>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magnomech/cli.hpp"
#include "magnomech/dynamics.hpp"
#include "magnomech/params.hpp"
#include "magnomech/potential.hpp"
#include "magnomech/spectrum.hpp"
#include "magnomech/steadystate.hpp"

namespace py = pybind11;
using namespace magnomech;

namespace {

Kernel parse_kernel(const std::string& name) {
    if (name == "langevin") return Kernel::LangevinConsistent;
    if (name == "conjugate") return Kernel::ConjugatePhase;
    throw py::value_error("kernel must be 'langevin' or 'conjugate'");
}

py::dict root_dict(const SteadyRoot& r) {
    py::dict d;
    d["n_m"] = r.n_m;
    d["n_a"] = r.n_a;
    d["a"] = r.a_s;
    d["m"] = r.m_s;
    d["b"] = r.b_s;
    d["stability"] = std::string(to_string(r.stability));
    d["jacobian_max_re"] = r.jacobian_max_re;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Magnon-photon-phonon steady states, spectra and dynamics";

    py::class_<SystemParams>(m, "Params")
        .def(py::init<>())
        .def(py::init([](const py::kwargs& kw) {
            SystemParams p;
            for (const auto& [k, v] : kw) set_param(p, py::cast<std::string>(k), py::cast<double>(v));
            return p;
        }))
        .def_readwrite("delta_c", &SystemParams::delta_c)
        .def_readwrite("delta_m", &SystemParams::delta_m)
        .def_readwrite("omega_b", &SystemParams::omega_b)
        .def_readwrite("kappa_a", &SystemParams::kappa_a)
        .def_readwrite("kappa_m", &SystemParams::kappa_m)
        .def_readwrite("kappa_b", &SystemParams::kappa_b)
        .def_readwrite("g_a", &SystemParams::g_a)
        .def_readwrite("g_b", &SystemParams::g_b)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("theta", &SystemParams::theta)
        .def_readwrite("eta", &SystemParams::eta)
        .def("coupling", &SystemParams::coupling)
        .def("violations", &SystemParams::violations)
        .def("validate", &SystemParams::validate)
        .def("as_dict", [](const SystemParams& p) {
            py::dict d;
            for (const auto& k : param_keys()) d[py::str(k)] = get_param(p, k);
            return d;
        })
        .def("__eq__", [](const SystemParams& a, const SystemParams& b) { return a == b; })
        .def("__repr__", [](const SystemParams& p) {
            std::ostringstream s;
            s << "Params(";
            bool first = true;
            for (const auto& k : param_keys()) {
                s << (first ? "" : ", ") << k << '=' << get_param(p, k);
                first = false;
            }
            s << ')';
            return s.str();
        });

    m.def("param_keys", &param_keys);

    m.def(
        "spectrum",
        [](const SystemParams& p) {
            const auto s = spectrum_of(p);
            py::dict d;
            d["eigenvalues"] = std::vector<cplx>(s.eigenvalues.begin(), s.eigenvalues.end());
            d["pt_phase"] = std::string(to_string(s.pt_phase));
            d["coalescence"] = s.coalescence;
            d["discriminant"] = s.discriminant;
            return d;
        },
        py::arg("params"));

    m.def(
        "find_exceptional_points",
        [](const SystemParams& p, const std::string& axis, double lo, double hi, int n_grid, double tolerance) {
            EpSearchOptions opts;
            opts.tolerance = tolerance;
            py::list out;
            for (const auto& c : find_exceptional_points(p, parse_scan_axis(axis), lo, hi, n_grid, opts)) {
                py::dict d;
                d["axis_value"] = c.axis_value;
                d["coalescence"] = c.coalescence;
                d["order"] = c.order;
                out.append(d);
            }
            return out;
        },
        py::arg("params"), py::arg("axis") = "ga", py::arg("lo") = 0.0, py::arg("hi") = 2.0, py::arg("n_grid") = 401,
        py::arg("tolerance") = 1e-2);

    m.def(
        "steady_states",
        [](const SystemParams& p, const std::string& kernel) {
            py::list out;
            for (const auto& r : solve_steady_states(p, parse_kernel(kernel))) out.append(root_dict(r));
            return out;
        },
        py::arg("params"), py::arg("kernel") = "langevin");

    m.def(
        "eta_sq_window",
        [](const SystemParams& p, const std::string& kernel) { return eta_sq_window(p, parse_kernel(kernel)); },
        py::arg("params"), py::arg("kernel") = "langevin");

    m.def(
        "sweep",
        [](const SystemParams& p, const std::string& axis, double lo, double hi, int n_points, const std::string& kernel) {
            SweepOptions opts;
            opts.kernel = parse_kernel(kernel);
            const auto r = sweep(p, parse_sweep_axis(axis), lo, hi, n_points, opts);
            py::dict d;
            d["values"] = r.values;
            d["bistable_windows"] = r.bistable_windows;
            std::vector<double> up, down;
            for (const auto& b : r.up_branch) up.push_back(b.n_a);
            for (const auto& b : r.down_branch) down.push_back(b.n_a);
            d["up_n_a"] = up;
            d["down_n_a"] = down;
            py::list roots;
            for (const auto& set : r.roots) {
                py::list row;
                for (const auto& x : set) row.append(root_dict(x));
                roots.append(row);
            }
            d["roots"] = roots;
            return d;
        },
        py::arg("params"), py::arg("axis") = "eta2", py::arg("lo") = 0.0, py::arg("hi") = 2.0, py::arg("n_points") = 401,
        py::arg("kernel") = "langevin");

    m.def(
        "integrate",
        [](const SystemParams& p, cplx a, cplx mm, cplx b, double dt, double t_max, double settle_tol) {
            if (dt <= 0.0) dt = default_dt(p);
            const auto r = integrate({0.0, a, mm, b}, p, dt, t_max, settle_tol);
            py::dict d;
            d["outcome"] = std::string(to_string(r.outcome));
            d["t"] = r.state.t;
            d["a"] = r.state.a;
            d["m"] = r.state.m;
            d["b"] = r.state.b;
            return d;
        },
        py::arg("params"), py::arg("a") = cplx{}, py::arg("m") = cplx{}, py::arg("b") = cplx{}, py::arg("dt") = 0.0,
        py::arg("t_max") = 2000.0, py::arg("settle_tol") = 1e-10);

    m.def(
        "potential",
        [](double n_a, double n_m, const SystemParams& p, const std::string& form) {
            return effective_potential(n_a, n_m, p, parse_potential_form(form));
        },
        py::arg("n_a"), py::arg("n_m"), py::arg("params"), py::arg("form") = "quasi");

    m.def(
        "critical_points",
        [](const SystemParams& p, std::pair<double, double> na, std::pair<double, double> nm, int n_cells,
           const std::string& form) {
            GridOptions opts;
            opts.form = parse_potential_form(form);
            py::list out;
            for (const auto& c : build_grid(p, na, nm, n_cells, opts).critical_points) {
                py::dict d;
                d["n_a"] = c.n_a;
                d["n_m"] = c.n_m;
                d["value"] = c.value;
                d["kind"] = std::string(to_string(c.kind));
                out.append(d);
            }
            return out;
        },
        py::arg("params"), py::arg("na_range"), py::arg("nm_range"), py::arg("n_cells") = 64, py::arg("form") = "quasi");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::dispatch(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
