#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "yspde/cli.hpp"
#include "yspde/config.hpp"
#include "yspde/drivers.hpp"
#include "yspde/sewing.hpp"
#include "yspde/solver.hpp"

#include <sstream>

namespace py = pybind11;
using namespace yspde;

namespace {

DriverPath path_from_array(const py::array_t<double>& values, const Grid& grid) {
    auto buf = values.request();
    int nodes = grid.nodes();
    int dims = 1;
    if (buf.ndim == 2) dims = static_cast<int>(buf.shape[1]);
    else if (buf.ndim != 1) throw ConfigError("path array must be 1-d or 2-d");
    if (static_cast<int>(buf.shape[0]) != nodes)
        throw ConfigError("path array must have one row per grid node");
    DriverPath p(grid, dims);
    auto v = values.unchecked();
    if (buf.ndim == 1) {
        auto a = values.unchecked<1>();
        for (int k = 0; k < nodes; ++k) p.at(k, 0) = a(k);
    } else {
        auto a = values.unchecked<2>();
        for (int k = 0; k < nodes; ++k)
            for (int d = 0; d < dims; ++d) p.at(k, d) = a(k, d);
    }
    (void)v;
    return p;
}

py::array_t<double> array_from_path(const DriverPath& p) {
    py::array_t<double> out({p.grid.nodes(), p.dims});
    auto a = out.mutable_unchecked<2>();
    for (int k = 0; k < p.grid.nodes(); ++k)
        for (int d = 0; d < p.dims; ++d) a(k, d) = p.at(k, d);
    return out;
}

// scalar single-mode helpers: fields are the k = 0 amplitude
py::array_t<double> young_integral_scalar(const py::array_t<double>& y,
                                          const py::array_t<double>& eta, const Grid& grid,
                                          double kappa) {
    DriverPath yp = path_from_array(y, grid);
    DriverPath ep = path_from_array(eta, grid);
    if (yp.dims != ep.dims) throw ConfigError("Y and eta need matching dimensions");
    SemigroupHandle sg = scalar_semigroup(kappa);
    SpectralField shape(1, yp.dims, 0);
    FieldPath yf(grid, shape);
    for (int k = 0; k < grid.nodes(); ++k)
        for (int j = 0; j < yp.dims; ++j) yf.values[k].at(j, 0) = Complex(yp.at(k, j), 0.0);
    FieldPath z = young_recursion(yf, ep, sg);
    py::array_t<double> out(std::vector<py::ssize_t>{grid.nodes()});
    auto a = out.mutable_unchecked<1>();
    for (int k = 0; k < grid.nodes(); ++k) a(k) = z.values[k].at(0, 0).real();
    return out;
}

py::array_t<double> solve_scalar_young(double kappa, double xi,
                                       const py::array_t<double>& eta, const Grid& grid,
                                       double picard_tol) {
    ProblemSpec spec;
    spec.K = 0;
    spec.mass_shift = kappa;
    spec.nu = 0.0;
    spec.lambda = 0.0;
    spec.m = 2.0;
    spec.xi = {"constant", {xi}};
    spec.G0 = {"constant", {1.0}};
    ProblemRealization prob(spec, 0);
    DriverPath ep = path_from_array(eta, grid);
    RngStream dummy(0, 0);
    DriverPath w(grid, 1);
    SolveOptions opt;
    opt.picard_tol = picard_tol;
    Trajectory traj = solve_mild(prob, ep, w, grid, opt);
    py::array_t<double> out(std::vector<py::ssize_t>{grid.nodes()});
    auto a = out.mutable_unchecked<1>();
    for (int k = 0; k < grid.nodes(); ++k) a(k) = traj.u.values[k].at(0, 0).real();
    return out;
}

}  // namespace

PYBIND11_MODULE(_yspde, m) {
    m.doc() = "Young-drift stochastic heat equation laboratory (core bindings)";

    py::register_exception<Error>(m, "YspdeError");

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, int, int>(), py::arg("horizon"), py::arg("base_intervals"),
             py::arg("level"))
        .def_property_readonly("intervals", &Grid::intervals)
        .def_property_readonly("nodes", &Grid::nodes)
        .def_property_readonly("dt", &Grid::dt)
        .def("node", &Grid::node)
        .def("refined", &Grid::refined)
        .def("times", [](const Grid& g) {
            py::array_t<double> out(std::vector<py::ssize_t>{g.nodes()});
            auto a = out.mutable_unchecked<1>();
            for (int k = 0; k < g.nodes(); ++k) a(k) = g.node(k);
            return out;
        });

    m.def("sample_fbm",
          [](double hurst, const Grid& grid, std::uint64_t seed, std::uint64_t stream,
             int dims, bool circulant, int cholesky_cap) {
              RngStream rng(seed, stream);
              FbmOptions opt;
              opt.circulant = circulant;
              opt.cholesky_cap = cholesky_cap;
              return array_from_path(sample_fbm(hurst, grid, rng, dims, opt));
          },
          py::arg("hurst"), py::arg("grid"), py::arg("seed"), py::arg("stream") = 0,
          py::arg("dims") = 1, py::arg("circulant") = false, py::arg("cholesky_cap") = 4096);

    m.def("sample_bm",
          [](const Grid& grid, std::uint64_t seed, std::uint64_t stream, int dims) {
              RngStream rng(seed, stream);
              return array_from_path(sample_bm(grid, rng, dims));
          },
          py::arg("grid"), py::arg("seed"), py::arg("stream") = 0, py::arg("dims") = 1);

    m.def("deterministic_driver",
          [](const std::string& formula, const std::vector<double>& params, const Grid& grid) {
              return array_from_path(deterministic_driver(formula, params, grid));
          },
          py::arg("formula"), py::arg("params"), py::arg("grid"));

    m.def("holder_seminorm",
          [](const py::array_t<double>& values, const Grid& grid, double beta) {
              return holder_seminorm(path_from_array(values, grid), beta);
          },
          py::arg("values"), py::arg("grid"), py::arg("beta"),
          "sup over grid pairs of |Y_t - Y_s| / (t-s)^beta");

    m.def("young_integral", &young_integral_scalar, py::arg("y"), py::arg("eta"),
          py::arg("grid"), py::arg("kappa") = 0.0,
          "single-mode Young convolution int_0^. e^{-kappa(.-r)} Y_r d eta_r");

    m.def("solve_scalar_young", &solve_scalar_young, py::arg("kappa"), py::arg("xi"),
          py::arg("eta"), py::arg("grid"), py::arg("picard_tol") = 1e-12,
          "solve du = -kappa u dt + u d eta on one mode, returning the trajectory");

    m.def("oracle_young_linear",
          [](double kappa, double xi, const py::array_t<double>& eta, const Grid& grid) {
              DriverPath ep = path_from_array(eta, grid);
              auto vals = oracle_young_linear(kappa, xi, ep);
              py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(vals.size())});
              auto a = out.mutable_unchecked<1>();
              for (std::size_t k = 0; k < vals.size(); ++k)
                  a(static_cast<py::ssize_t>(k)) = vals[k];
              return out;
          },
          py::arg("kappa"), py::arg("xi"), py::arg("eta"), py::arg("grid"));

    m.def("one_mode_constant", &SemigroupHandle::one_mode_constant, py::arg("theta"));

    m.def("canonical_config",
          [](const std::string& text) { return parse_config(text).emit(); },
          "parse, validate and re-emit a run configuration");

    m.def("run_check",
          [](const std::string& config_text) {
              RunConfig cfg =
                  config_text.empty() ? RunConfig{} : parse_config(config_text);
              std::ostringstream os;
              bool ok = run_check_suite(cfg, os);
              return py::make_tuple(ok, os.str());
          },
          py::arg("config_text") = "", "run the invariant suite; returns (ok, report)");
}
