#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "openlab/boundstate.hpp"
#include "openlab/errors.hpp"
#include "openlab/field_io.hpp"
#include "openlab/laplace.hpp"
#include "openlab/liouville.hpp"
#include "openlab/model.hpp"
#include "openlab/stationary.hpp"
#include "openlab/verify.hpp"
#include "openlab/wavepacket.hpp"
#include "openlab/wigner.hpp"

namespace py = pybind11;
using namespace openlab;

namespace {

using CArray = py::array_t<cplx>;

CArray to_numpy(const Field2D& f) {
    CArray a({f.grid.nx, f.grid.nxd});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

Field2D from_numpy(const Grid2D& g, const CArray& a) {
    if (a.ndim() != 2 || std::size_t(a.shape(0)) != g.nx || std::size_t(a.shape(1)) != g.nxd)
        throw GridError("array shape does not match the grid");
    Field2D f(g);
    auto r = a.unchecked<2>();
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.nxd; ++j) f.at(i, j) = r(i, j);
    return f;
}

// evaluate a state on broadcast-free 1-D coordinate arrays of equal length
CArray eval_points(const StateFn& s, const std::vector<double>& x, const std::vector<double>& xd) {
    if (x.size() != xd.size()) throw DomainError("x and xd must have equal length");
    CArray out(x.size());
    auto w = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < x.size(); ++i) w(i) = s(x[i], xd[i]);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "openlab: open quantum systems on a line";
    m.attr("__version__") = OPENLAB_VERSION;

    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    (void)validation;

    py::class_<EnvParams>(m, "EnvParams")
        .def(py::init([](double hbar, double mass, double nu, double d0, double d2, double xi, double f, double lambda_,
                         double kB) {
                 return EnvParams{hbar, mass, nu, d0, d2, xi, f, lambda_, kB};
             }),
             py::arg("hbar") = 1.0, py::arg("m") = 1.0, py::arg("nu") = 0.0, py::arg("d0") = 0.0, py::arg("d2") = 0.0,
             py::arg("xi") = 0.0, py::arg("f") = 0.0, py::arg("lam") = 0.0, py::arg("kB") = 1.0)
        .def_readwrite("hbar", &EnvParams::hbar)
        .def_readwrite("m", &EnvParams::m)
        .def_readwrite("nu", &EnvParams::nu)
        .def_readwrite("d0", &EnvParams::d0)
        .def_readwrite("d2", &EnvParams::d2)
        .def_readwrite("xi", &EnvParams::xi)
        .def_readwrite("f", &EnvParams::f)
        .def_readwrite("lam", &EnvParams::lambda)
        .def_readwrite("kB", &EnvParams::kB)
        .def("to_json", &params_to_json)
        .def("hash", &params_hash)
        .def_static("from_json", &params_from_json)
        .def_static("load", &load_params)
        .def("__repr__", [](const EnvParams& p) { return "EnvParams(" + params_to_json(p) + ")"; });

    m.def("validate", [](const EnvParams& p) {
        std::vector<std::string> out;
        for (const auto& v : validate(p).violations) out.push_back(v.what);
        return out;
    }, "list of violated constraints, empty when valid");
    m.def("make_params", &make_params, py::arg("params"), py::arg("allow_non_lindblad") = false);
    m.def("decoherence_length", &decoherence_length);
    m.def("drift_wavenumber", &drift_wavenumber);
    m.def("quantum_temperature", &quantum_temperature);

    py::class_<Grid2D>(m, "Grid2D")
        .def(py::init(&Grid2D::make), py::arg("x_min"), py::arg("x_max"), py::arg("nx"), py::arg("xd_max"),
             py::arg("nxd"))
        .def_readonly("nx", &Grid2D::nx)
        .def_readonly("nxd", &Grid2D::nxd)
        .def_property_readonly("hx", &Grid2D::hx)
        .def_property_readonly("hxd", &Grid2D::hxd)
        .def_property_readonly("x", [](const Grid2D& g) {
            std::vector<double> v(g.nx);
            for (std::size_t i = 0; i < g.nx; ++i) v[i] = g.x(i);
            return v;
        })
        .def_property_readonly("xd", [](const Grid2D& g) {
            std::vector<double> v(g.nxd);
            for (std::size_t j = 0; j < g.nxd; ++j) v[j] = g.xd(j);
            return v;
        });

    // states: callables (x, x_d) -> complex plus vectorized evaluation
    py::class_<TunnelingState>(m, "TunnelingState")
        .def_readonly("q", &TunnelingState::q)
        .def_readonly("Omega", &TunnelingState::Omega)
        .def_readonly("n", &TunnelingState::n)
        .def_readonly("r", &TunnelingState::r)
        .def_readonly("p", &TunnelingState::p)
        .def_readonly("k", &TunnelingState::k)
        .def("__call__", &TunnelingState::operator())
        .def("at", [](const TunnelingState& s, const std::vector<double>& x, const std::vector<double>& xd) {
            return eval_points(s, x, xd);
        });
    py::class_<PropagatingState>(m, "PropagatingState")
        .def_readonly("Omega", &PropagatingState::Omega)
        .def_readonly("ell_dec", &PropagatingState::ell_dec)
        .def_readonly("k_f", &PropagatingState::k_f)
        .def("__call__", &PropagatingState::operator())
        .def("at", [](const PropagatingState& s, const std::vector<double>& x, const std::vector<double>& xd) {
            return eval_points(s, x, xd);
        });

    m.def("tunneling", &tunneling, py::arg("params"), py::arg("q"), py::arg("Omega"), py::arg("n") = 0,
          py::arg("a") = 0.0);
    m.def("propagating", &propagating, py::arg("params"), py::arg("Omega") = 0.0, py::arg("ell0") = py::none());
    m.def("tunneling_level", &tunneling_level);
    m.def("tunneling_quadrature_oracle", &tunneling_quadrature_oracle);
    m.def("propagating_quadrature_oracle", &propagating_quadrature_oracle, py::arg("params"), py::arg("Omega"),
          py::arg("xd"), py::arg("ell0") = py::none());
    m.def("spectrum", &spectrum);

    m.def("bound_state",
          [](const EnvParams& p, std::optional<double> q) {
              const BoundStateAC b = q ? bound_state(p, *q) : bound_state(p);
              return py::cpp_function(b.as_state());
          },
          py::arg("params"), py::arg("q") = py::none(), "bound state as a callable (x, x_d) -> complex");
    m.def("adiabatic_q", &adiabatic_q);

    m.def("kspace_eigensolve",
          [](const EnvParams& p, double q, int n_max, int nk, bool extrapolate) {
              const KSpaceModes km = kspace_eigensolve(p, q, n_max, nk, extrapolate);
              py::dict d;
              d["k"] = km.k;
              d["eigenvalues"] = km.eigenvalues;
              d["eigenvectors"] = km.eigenvectors;
              d["sign_changes"] = km.sign_changes;
              return d;
          },
          py::arg("params"), py::arg("q"), py::arg("n_max"), py::arg("nk") = 512, py::arg("extrapolate") = false);

    py::class_<PacketObservables>(m, "PacketObservables")
        .def_readonly("t", &PacketObservables::t)
        .def_readonly("X", &PacketObservables::X)
        .def_readonly("Dx2", &PacketObservables::Dx2)
        .def_readonly("inv_ell_eff2", &PacketObservables::inv_ell_eff2)
        .def_readonly("k_eff", &PacketObservables::k_eff)
        .def_readonly("Q2", &PacketObservables::Q2)
        .def_readonly("kappa2", &PacketObservables::kappa2);
    m.def("packet_observables", &packet_observables, py::arg("params"), py::arg("sigma"), py::arg("t"));
    m.def("flow",
          [](const EnvParams& p, cplx q, cplx pw, cplx a_i, cplx d_i, cplx k_i, cplx r_i, double t) {
              const FlowParams f = flow(p, q, pw, FlowInit{a_i, d_i, k_i, r_i}, t);
              return py::make_tuple(f.a, f.d, f.k, f.r);
          },
          py::arg("params"), py::arg("q"), py::arg("p"), py::arg("a_i") = 0.0, py::arg("d_i") = 0.0,
          py::arg("k_i") = 0.0, py::arg("r_i") = 0.0, py::arg("t") = 0.0, "returns (a, d, k, r) at time t");

    // grid operations on (nx, nxd) complex arrays
    m.def("sample", [](const Grid2D& g, const std::function<cplx(double, double)>& fn) { return to_numpy(sample(g, fn)); });
    m.def("apply_liouvillian", [](const Grid2D& g, const CArray& a, const EnvParams& p) {
        return to_numpy(apply_liouvillian(from_numpy(g, a), p));
    });
    m.def("eigen_residual", [](const Grid2D& g, const CArray& a, const EnvParams& p, cplx omega) {
        return eigen_residual(from_numpy(g, a), p, omega);
    });
    m.def("stability_bound", &stability_bound, py::arg("grid"), py::arg("params"), py::arg("safety") = 0.25);
    m.def("evolve",
          [](const Grid2D& g, const CArray& a, const EnvParams& p, double t_end, double dt) {
              Field2D last;
              EvolveOptions opt;
              opt.store = false;
              opt.observer = [&](double, const Field2D& f) { last = f; };
              {
                  py::gil_scoped_release release;
                  evolve(from_numpy(g, a), p, t_end, dt, opt);
              }
              return to_numpy(last);
          },
          py::arg("grid"), py::arg("rho0"), py::arg("params"), py::arg("t_end"), py::arg("dt"),
          "state at t_end");
    m.def("wigner", [](const Grid2D& g, const CArray& a) {
        const WignerField w = transform(from_numpy(g, a));
        py::array_t<double> out({w.x.size(), w.k.size()});
        auto r = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < w.x.size(); ++i)
            for (std::size_t k = 0; k < w.k.size(); ++k) r(i, k) = w.at(i, k);
        return py::make_tuple(w.k, out);
    }, "returns (k, w[x, k])");

    m.def("polynomial_reconstruction", &polynomial_reconstruction);

    m.def("verify",
          [](const EnvParams& p, const std::string& suite) {
              VerifyReport r;
              {
                  py::gil_scoped_release release;
                  r = run_verify(p, parse_suite(suite));
              }
              return py::module_::import("json").attr("loads")(r.to_json());
          },
          py::arg("params"), py::arg("suite") = "fast", "report as {check: {value, tolerance, pass}}");
}
