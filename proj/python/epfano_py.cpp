// Python bindings. Matrices and sampled curves come back as numpy arrays;
// library failures raise epfano.EpfanoError with a `kind` attribute.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "epfano/constants.hpp"
#include "epfano/epfinder.hpp"
#include "epfano/io.hpp"
#include "epfano/reduction.hpp"
#include "epfano/scattering.hpp"
#include "epfano/timedomain.hpp"

namespace py = pybind11;
using namespace epfano;
namespace C = epfano::constants;

namespace {

using CArray = py::array_t<cplx>;

template <std::size_t R, std::size_t Cols>
CArray to_numpy(const Matrix<R, Cols>& m)
{
    CArray out({R, Cols});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < Cols; ++j) w(i, j) = m(i, j);
    return out;
}

template <typename T, typename Seq>
py::array_t<T> vec_to_numpy(const Seq& v)
{
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    auto w = out.template mutable_unchecked<1>();
    for (std::size_t i = 0; i < v.size(); ++i) w(static_cast<py::ssize_t>(i)) = v[i];
    return out;
}

Mat2 mat2_from(const CArray& a)
{
    if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2) throw ParameterError("expected a 2x2 matrix");
    auto r = a.unchecked<2>();
    Mat2 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = r(i, j);
    return m;
}

py::dict trajectory_dict(const Trajectory& t)
{
    py::dict d;
    d["f"] = vec_to_numpy<double>(t.f_values);
    d["branch_a"] = vec_to_numpy<cplx>(t.branch_a);
    d["branch_b"] = vec_to_numpy<cplx>(t.branch_b);
    return d;
}

Trajectory trajectory_from(const py::dict& d)
{
    Trajectory t;
    t.f_values = d["f"].cast<std::vector<double>>();
    t.branch_a = d["branch_a"].cast<std::vector<cplx>>();
    t.branch_b = d["branch_b"].cast<std::vector<cplx>>();
    return t;
}

}  // namespace

PYBIND11_MODULE(_epfano, m)
{
    m.doc() = "Exceptional points and Fano-like line shapes of a driven oscillator pair";

    // The module keeps the class alive, so a borrowed pointer is enough here.
    static PyObject* exc = py::exception<Error>(m, "EpfanoError", PyExc_RuntimeError).ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::handle(exc)(e.what());
            err.attr("kind") = e.kind();
            PyErr_SetObject(exc, err.ptr());
        }
    });

    py::class_<OscillatorParams>(m, "Params")
        .def(py::init([](double omega1, double omega2, double k1, double k2, double g, double f, cplx c1, cplx c2) {
                 OscillatorParams p{omega1, omega2, k1, k2, g, f, c1, c2};
                 p.validate();
                 return p;
             }),
             py::kw_only(), py::arg("omega1") = 1.0, py::arg("omega2") = 1.0, py::arg("k1") = 0.0,
             py::arg("k2") = 0.0, py::arg("g") = 0.0, py::arg("f") = 0.0, py::arg("c1") = cplx{0.0},
             py::arg("c2") = cplx{0.0})
        .def_static("from_json", &params_from_json, py::arg("text"))
        .def_static("load", [](const std::string& path) { return load_params(path); }, py::arg("path"))
        .def("to_json", &params_to_json)
        .def("validate", &OscillatorParams::validate)
        .def("with_coupling", &OscillatorParams::with_coupling, py::arg("f"), py::arg("g"))
        .def("system_matrix", [](const OscillatorParams& p) { return to_numpy(system_matrix(p)); })
        .def(
            "resonance_energies",
            [](const OscillatorParams& p, std::optional<double> f, std::optional<double> g) {
                return vec_to_numpy<cplx>(resonance_energies(p, f.value_or(p.f), g.value_or(p.g)));
            },
            py::arg("f") = py::none(), py::arg("g") = py::none())
        .def(
            "secular_det",
            [](const OscillatorParams& p, cplx e, std::optional<double> f, std::optional<double> g) {
                return secular_det(p, f.value_or(p.f), g.value_or(p.g), e);
            },
            py::arg("e"), py::arg("f") = py::none(), py::arg("g") = py::none())
        .def("stationary_solution",
             [](const OscillatorParams& p, double w) { return vec_to_numpy<cplx>(stationary_solution(p, w).as_array()); },
             py::arg("omega_drive"))
        .def_readwrite("omega1", &OscillatorParams::omega1)
        .def_readwrite("omega2", &OscillatorParams::omega2)
        .def_readwrite("k1", &OscillatorParams::k1)
        .def_readwrite("k2", &OscillatorParams::k2)
        .def_readwrite("g", &OscillatorParams::g)
        .def_readwrite("f", &OscillatorParams::f)
        .def_readwrite("c1", &OscillatorParams::c1)
        .def_readwrite("c2", &OscillatorParams::c2)
        .def("__repr__", [](const OscillatorParams& p) { return "Params(" + params_to_json(p) + ")"; });

    py::class_<ExceptionalPoint>(m, "ExceptionalPoint")
        .def_readonly("omega", &ExceptionalPoint::omega)
        .def_readonly("f", &ExceptionalPoint::f)
        .def_readonly("g", &ExceptionalPoint::g)
        .def_readonly("residual", &ExceptionalPoint::residual)
        .def_readonly("iterations", &ExceptionalPoint::iterations)
        .def_readonly("physical", &ExceptionalPoint::physical)
        .def("__repr__", [](const ExceptionalPoint& e) {
            return "ExceptionalPoint(omega=" + format_number(e.omega.real()) + (e.omega.imag() < 0 ? "" : "+") +
                   format_number(e.omega.imag()) + "j, f=" + format_number(e.f) + ", g=" + format_number(e.g) + ")";
        });

    m.def(
        "find_ep",
        [](const OscillatorParams& p, cplx omega, double f, double g, int max_iter, double tol) {
            return find_ep(p, {omega, f, g}, {max_iter, tol});
        },
        py::arg("params"), py::arg("omega"), py::arg("f"), py::arg("g"), py::arg("max_iter") = 100,
        py::arg("tol") = 1e-10, "Newton-type solve of D = dD/dE = 0 from a seed (omega, f, g).");
    m.def("locate_ep", &locate_physical_ep, py::arg("params"),
          "Physical EP: default seed scan, then the preferred converged root.");
    m.def(
        "scan_eps",
        [](const OscillatorParams& p, std::pair<double, double> f_range, std::pair<double, double> g_range, int grid) {
            return scan_seeds(p, f_range, g_range, grid);
        },
        py::arg("params"), py::arg("f_range") = std::pair{C::kScanFMin, C::kScanFMax},
        py::arg("g_range") = std::pair{C::kScanGMin, C::kScanGMax}, py::arg("grid") = C::kScanGrid);

    py::class_<EffectiveModel>(m, "EffectiveModel")
        .def(py::init([](const CArray& h0, const CArray& v, double f_ref) {
                 EffectiveModel e;
                 e.h0 = mat2_from(h0);
                 e.v = mat2_from(v);
                 e.f_ref = f_ref;
                 e.gauge = Gauge::AsProjected;
                 return e;
             }),
             py::arg("h0"), py::arg("v"), py::arg("f_ref") = 0.0)
        .def_property_readonly("h0", [](const EffectiveModel& e) { return to_numpy(e.h0); })
        .def_property_readonly("v", [](const EffectiveModel& e) { return to_numpy(e.v); })
        .def_readonly("f_ref", &EffectiveModel::f_ref)
        .def_property_readonly("gauge", [](const EffectiveModel& e) { return std::string(to_string(e.gauge)); })
        .def_property_readonly("method", [](const EffectiveModel& e) { return std::string(to_string(e.method)); })
        .def("at", [](const EffectiveModel& e, cplx f) { return to_numpy(e.at(f)); }, py::arg("f"))
        .def("regauge", [](const EffectiveModel& e, const std::string& g) { return regauge(e, parse_gauge(g)); },
             py::arg("gauge"))
        .def("effective_eps", [](const EffectiveModel& e) {
            py::list out;
            for (const auto& ep : ep_of_effective(e)) {
                py::dict d;
                d["f"] = ep.f;
                d["omega"] = ep.omega;
                d["diabolic"] = ep.diabolic;
                out.append(d);
            }
            return out;
        });

    m.def(
        "reduce",
        [](const OscillatorParams& p, const std::string& method, const std::string& gauge,
           std::optional<double> f_ref, std::optional<ExceptionalPoint> ep) {
            const ExceptionalPoint at = ep ? *ep : locate_physical_ep(p);
            const Gauge gv = parse_gauge(gauge);
            if (parse_method(method) == ReductionMethod::Projection)
                return reduce_projection(p.with_coupling(at.f, at.g), f_ref.value_or(at.f + C::kProjectionOffset), gv);
            return reduce_secular(p, at, gv);
        },
        py::arg("params"), py::arg("method") = "secular", py::arg("gauge") = "symmetric-delta",
        py::arg("f_ref") = py::none(), py::arg("ep") = py::none(),
        "Effective 2x2 model h(f) = h0 + f v around the physical EP.");

    m.def(
        "t_matrix", [](const EffectiveModel& e, double f, cplx energy) { return to_numpy(t_matrix(e, f, energy)); },
        py::arg("model"), py::arg("f"), py::arg("e"));

    m.def(
        "cross_section",
        [](const EffectiveModel& e, double f, double e_min, double e_max, int points, bool include_background,
           double scale) {
            const auto s = cross_section_scan(e, f, e_min, e_max, points, {include_background, scale});
            std::vector<double> ev, t11, t22, p1, p2, inter;
            std::vector<bool> valid;
            for (const auto& x : s) {
                ev.push_back(x.e);
                t11.push_back(x.t11_sq);
                t22.push_back(x.t22_sq);
                p1.push_back(x.pole1_22_sq);
                p2.push_back(x.pole2_22_sq);
                inter.push_back(x.interference_22);
                valid.push_back(x.valid);
            }
            py::dict d;
            d["e"] = vec_to_numpy<double>(ev);
            d["t11_sq"] = vec_to_numpy<double>(t11);
            d["t22_sq"] = vec_to_numpy<double>(t22);
            d["pole1_22_sq"] = vec_to_numpy<double>(p1);
            d["pole2_22_sq"] = vec_to_numpy<double>(p2);
            d["interference_22"] = vec_to_numpy<double>(inter);
            d["valid"] = vec_to_numpy<bool>(valid);
            return d;
        },
        py::arg("model"), py::arg("f"), py::arg("e_min") = C::kEnergyMin, py::arg("e_max") = C::kEnergyMax,
        py::arg("points") = C::kEnergyPoints, py::arg("include_background") = false, py::arg("scale") = 1.0);

    m.def(
        "find_extrema",
        [](const std::vector<double>& x, const std::vector<double>& y, std::optional<std::vector<bool>> valid) {
            const Extrema ex = find_extrema(x, y, valid.value_or(std::vector<bool>{}));
            py::list peaks, minima;
            for (const auto& p : ex.peaks) peaks.append(py::make_tuple(p.e, p.value));
            for (const auto& p : ex.minima) minima.append(py::make_tuple(p.e, p.value, p.touches_zero));
            py::dict d;
            d["peaks"] = peaks;
            d["minima"] = minima;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("valid") = py::none(),
        "Parabola-refined peaks (e, value) and minima (e, value, touches_zero).");

    m.def(
        "trajectory",
        [](const OscillatorParams& p, double f_min, double f_max, int points) {
            return trajectory_dict(eigen_trajectory(p, f_min, f_max, points));
        },
        py::arg("params"), py::arg("f_min") = C::kTrajectoryFMin, py::arg("f_max") = C::kTrajectoryFMax,
        py::arg("points") = C::kTrajectoryPoints);
    m.def(
        "trajectory",
        [](const EffectiveModel& e, double f_min, double f_max, int points) {
            return trajectory_dict(eigen_trajectory(e, f_min, f_max, points));
        },
        py::arg("model"), py::arg("f_min") = C::kTrajectoryFMin, py::arg("f_max") = C::kTrajectoryFMax,
        py::arg("points") = C::kTrajectoryPoints);
    m.def(
        "max_branch_deviation",
        [](const py::dict& a, const py::dict& b) { return max_branch_deviation(trajectory_from(a), trajectory_from(b)); },
        py::arg("full"), py::arg("reduced"));

    m.def(
        "integrate",
        [](const OscillatorParams& p, double w, double t_end, double dt, std::optional<std::array<cplx, 4>> x0,
           int stride) {
            const StateVector init = x0 ? StateVector::from_array(*x0) : StateVector{};
            const IntegrationResult r = integrate(p, w, t_end, dt, init, stride);
            CArray states({r.states.size(), std::size_t{4}});
            auto s = states.mutable_unchecked<2>();
            for (std::size_t k = 0; k < r.states.size(); ++k) {
                const Vec4 v = r.states[k].as_array();
                for (std::size_t i = 0; i < 4; ++i) s(k, i) = v[i];
            }
            return py::make_tuple(vec_to_numpy<double>(r.times), states);
        },
        py::arg("params"), py::arg("omega_drive"), py::arg("t_end"), py::arg("dt"), py::arg("initial") = py::none(),
        py::arg("stride") = 1, "RK4 integration; returns (times, states) with states in (p1, p2, q1, q2) order.");
    m.def("default_settle_time", &default_settle_time, py::arg("params"));
    m.def(
        "stationary_residual",
        [](const OscillatorParams& p, double w, std::optional<double> t_settle, double dt) {
            return stationary_residual(p, w, t_settle.value_or(default_settle_time(p)), dt);
        },
        py::arg("params"), py::arg("omega_drive"), py::arg("t_settle") = py::none(), py::arg("dt") = 1e-3);
}
