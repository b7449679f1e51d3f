#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "neel/floquet.hpp"
#include "neel/runner.hpp"

namespace py = pybind11;
using namespace neel;

namespace {

Field to_field(const GridPtr& grid, const py::array_t<double>& a) {
    if (a.ndim() != 1 || a.shape(0) != grid->N()) {
        throw std::invalid_argument("array length does not match grid");
    }
    Field f(grid);
    auto r = a.unchecked<1>();
    for (int j = 0; j < grid->N(); ++j) f[j] = r(j);
    return f;
}

py::array_t<double> to_array(const Field& f) {
    py::array_t<double> out(f.size());
    auto w = out.mutable_unchecked<1>();
    for (int j = 0; j < f.size(); ++j) w(j) = f[j];
    return out;
}

py::array_t<double> grid_nodes(const GridPtr& grid) {
    py::array_t<double> out(grid->N());
    auto w = out.mutable_unchecked<1>();
    for (int j = 0; j < grid->N(); ++j) w(j) = grid->x(j);
    return out;
}

Forcing forcing_from(const std::string& kind, double amplitude, double period) {
    RunConfig cfg;
    cfg.physics.forcing = kind;
    cfg.physics.amplitude = amplitude;
    cfg.physics.T = period;
    return make_forcing(cfg);
}

}  // namespace

PYBIND11_MODULE(_neelsim, m) {
    m.doc() = "Pseudospectral Neel-wall dynamics: static profile, periodic "
              "orbits and Floquet stability";

    py::class_<StaticWall>(m, "StaticWall")
        .def_property_readonly("x", [](const StaticWall& w) { return grid_nodes(w.grid); })
        .def_property_readonly("w0", [](const StaticWall& w) { return to_array(w.w0); })
        .def_property_readonly("theta0",
                               [](const StaticWall& w) { return to_array(w.theta0()); })
        .def_property_readonly("dtheta0",
                               [](const StaticWall& w) { return to_array(w.dtheta0); })
        .def_readonly("residual", &StaticWall::residual)
        .def_readonly("energy", &StaticWall::energy_value)
        .def_readonly("norm_sq_dtheta0", &StaticWall::norm_sq_dtheta0)
        .def_property_readonly("L", [](const StaticWall& w) { return w.grid->L(); })
        .def_property_readonly("N", [](const StaticWall& w) { return w.grid->N(); });

    m.def(
        "solve_static",
        [](double L, int N, double tol) { return solve_static_profile(make_grid(L, N), tol, 400); },
        py::arg("L") = 60.0, py::arg("N") = 4096, py::arg("tol") = 1e-8);

    m.def(
        "half_laplacian",
        [](double L, const py::array_t<double>& f) {
            const auto grid = make_grid(L, static_cast<int>(f.shape(0)));
            return to_array(half_laplacian(to_field(grid, f)));
        },
        py::arg("L"), py::arg("values"));
    m.def(
        "derivative",
        [](double L, const py::array_t<double>& f) {
            const auto grid = make_grid(L, static_cast<int>(f.shape(0)));
            return to_array(derivative(to_field(grid, f)));
        },
        py::arg("L"), py::arg("values"));
    m.def(
        "h_half_form",
        [](double L, const py::array_t<double>& f, const py::array_t<double>& g) {
            const auto grid = make_grid(L, static_cast<int>(f.shape(0)));
            return h_half_form(to_field(grid, f), to_field(grid, g));
        },
        py::arg("L"), py::arg("f"), py::arg("g"));
    m.def(
        "energy",
        [](double L, const py::array_t<double>& w) {
            const auto grid = make_grid(L, static_cast<int>(w.shape(0)));
            return energy(to_field(grid, w));
        },
        py::arg("L"), py::arg("w"));
    m.def(
        "energy_gradient",
        [](double L, const py::array_t<double>& w) {
            const auto grid = make_grid(L, static_cast<int>(w.shape(0)));
            return to_array(energy_gradient(to_field(grid, w)));
        },
        py::arg("L"), py::arg("w"));

    m.def(
        "l0_eigenvalues",
        [](const StaticWall& wall, int k) {
            const auto pairs = smallest_eigenpairs(assemble_matrix(OperatorKind::L0, wall), k);
            std::vector<double> lam;
            std::vector<double> res;
            for (const auto& p : pairs) {
                lam.push_back(p.lambda);
                res.push_back(p.residual);
            }
            return py::make_tuple(lam, res);
        },
        py::arg("wall"), py::arg("k") = 8);

    m.def(
        "leading_order_Y",
        [](const StaticWall& wall, double nu, const std::string& kind, double amplitude,
           double period, int samples) {
            return leading_order_Y(wall, forcing_from(kind, amplitude, period), nu, samples);
        },
        py::arg("wall"), py::arg("nu") = 0.5, py::arg("forcing") = "cosine",
        py::arg("amplitude") = 1.0, py::arg("period") = 1.0, py::arg("samples") = 256);

    py::class_<PeriodicWall>(m, "PeriodicWall")
        .def_readonly("epsilon", &PeriodicWall::epsilon)
        .def_readonly("period", &PeriodicWall::T)
        .def_readonly("residual", &PeriodicWall::residual)
        .def_readonly("X", &PeriodicWall::X)
        .def_readonly("chi_norm", &PeriodicWall::chi_norm)
        .def_property_readonly("times", [](const PeriodicWall& o) {
            std::vector<double> t(o.n_snapshots());
            for (int i = 0; i < o.n_snapshots(); ++i) t[i] = o.snapshot_time(i);
            return t;
        });

    m.def(
        "find_periodic_wall",
        [](const StaticWall& wall, double epsilon, double T, double nu,
           const std::string& kind, double amplitude, double tol, int max_newton) {
            auto shared = std::make_shared<const StaticWall>(wall);
            OrbitSolveOptions opt;
            opt.nu = nu;
            return find_periodic_wall(shared, epsilon, T, forcing_from(kind, amplitude, T), tol,
                                      max_newton, opt);
        },
        py::arg("wall"), py::arg("epsilon"), py::arg("T") = 1.0, py::arg("nu") = 0.5,
        py::arg("forcing") = "cosine", py::arg("amplitude") = 1.0, py::arg("tol") = 1e-9,
        py::arg("max_newton") = 12);

    py::class_<FloquetResult>(m, "FloquetResult")
        .def_readonly("epsilon", &FloquetResult::epsilon)
        .def_readonly("multipliers", &FloquetResult::multipliers)
        .def_readonly("residuals", &FloquetResult::residuals)
        .def_readonly("unit_multiplier_error", &FloquetResult::unit_multiplier_error)
        .def_readonly("second_modulus", &FloquetResult::second_modulus)
        .def_readonly("stable", &FloquetResult::stable);

    m.def(
        "floquet_multipliers",
        [](const PeriodicWall& orbit, int k) { return floquet_multipliers(orbit, k); },
        py::arg("orbit"), py::arg("k") = 12);

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_text,
           const std::string& out_dir) {
            RunConfig cfg = RunConfig::parse(config_text);
            if (!out_dir.empty()) cfg.output.directory = out_dir;
            return run_command(command, cfg);
        },
        py::arg("command"), py::arg("config_text") = "", py::arg("out_dir") = "");
}
