// Python bindings. Nodal arrays are numpy float64 of shape (ny, nx), row j
// holding the nodes with y = y0 + j * hy.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>

#include "navier/error.hpp"
#include "navier/fourth_order.hpp"
#include "navier/homogenization.hpp"
#include "navier/relaxed_solver.hpp"
#include "navier/shape_opt.hpp"
#include "navier/symbols.hpp"

namespace py = pybind11;
using namespace navier;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Grid& g, std::span<const double> values) {
    Array out({g.ny(), g.nx()});
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

Array to_array(const Field& f) { return to_array(f.grid(), f.values()); }

std::vector<double> from_array(const Grid& g, const Array& a, const char* what) {
    if (a.size() != g.size()) {
        throw InvalidArgument(std::string(what) + ": expected " + std::to_string(g.size()) + " values, got " +
                              std::to_string(a.size()));
    }
    return {a.data(), a.data() + a.size()};
}

// Values at pinned nodes are ignored rather than rejected.
Field field_on(MaskPtr mask, const Array& a, const char* what) {
    auto v = from_array(mask->grid(), a, what);
    for (int k = 0; k < mask->grid().size(); ++k) {
        if (mask->is_pinned(k)) v[k] = 0.0;
    }
    return Field(std::move(mask), std::move(v));
}

MeasureWeights weights_from(const Grid& g, const py::object& w) {
    if (py::isinstance<py::float_>(w) || py::isinstance<py::int_>(w)) return MeasureWeights::constant(g, w.cast<double>());
    return MeasureWeights(g, from_array(g, w.cast<Array>(), "weights"));
}

MaskPtr mask_of(const Grid& g, const std::string& shape) { return mask_from_spec(g, parse_shape(shape)); }

py::dict opt_state_dict(const Grid& g, const OptState& st) {
    py::dict d;
    d["m"] = to_array(g, st.m.values());
    d["J"] = st.J;
    d["gradnorm"] = st.gradnorm;
    d["step"] = st.step;
    d["iterations"] = st.iterations;
    d["converged"] = st.converged;
    d["line_search_failed"] = st.line_search_failed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Split fourth-order plate solvers, relaxed Dirichlet problems and relaxed shape optimization";

    // translators run newest first, so the base class goes in first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](int nx, int ny, std::tuple<double, double, double, double> r) {
                 return Grid(nx, ny, {std::get<0>(r), std::get<1>(r), std::get<2>(r), std::get<3>(r)});
             }),
             py::arg("nx"), py::arg("ny"), py::arg("rect") = std::make_tuple(0.0, 0.0, 1.0, 1.0))
        .def_property_readonly("nx", &Grid::nx)
        .def_property_readonly("ny", &Grid::ny)
        .def_property_readonly("hx", &Grid::hx)
        .def_property_readonly("hy", &Grid::hy)
        .def("coordinates", [](const Grid& g) {
            std::vector<double> xs(g.size()), ys(g.size());
            for (int k = 0; k < g.size(); ++k) {
                xs[k] = g.x_of(k);
                ys[k] = g.y_of(k);
            }
            return py::make_tuple(to_array(g, xs), to_array(g, ys));
        }, "Node coordinates (X, Y), each of shape (ny, nx).")
        .def("__repr__", [](const Grid& g) {
            return "Grid(" + std::to_string(g.nx()) + ", " + std::to_string(g.ny()) + ")";
        });

    py::class_<Quadratic2>(m, "Quadratic2")
        .def(py::init<double, double, double>(), py::arg("a11") = 1.0, py::arg("a12") = 0.0, py::arg("a22") = 1.0)
        .def_readwrite("a11", &Quadratic2::a11)
        .def_readwrite("a12", &Quadratic2::a12)
        .def_readwrite("a22", &Quadratic2::a22)
        .def_static("laplacian", &Quadratic2::laplacian)
        .def("symbol", &Quadratic2::symbol)
        .def("__eq__", [](const Quadratic2& a, const Quadratic2& b) { return a == b; })
        .def("__repr__", [](const Quadratic2& q) { return "Quadratic2" + to_string(q); });

    py::class_<Quartic2>(m, "Quartic2")
        .def(py::init<double, double, double, double, double>(), py::arg("c40"), py::arg("c31"), py::arg("c22"),
             py::arg("c13"), py::arg("c04"))
        .def_readwrite("c40", &Quartic2::c40)
        .def_readwrite("c31", &Quartic2::c31)
        .def_readwrite("c22", &Quartic2::c22)
        .def_readwrite("c13", &Quartic2::c13)
        .def_readwrite("c04", &Quartic2::c04)
        .def("symbol", &Quartic2::symbol)
        .def("__eq__", [](const Quartic2& a, const Quartic2& b) { return a == b; })
        .def("__repr__", [](const Quartic2& p) { return "Quartic2" + to_string(p); });

    m.def("ellipticity_margin", py::overload_cast<const Quadratic2&>(&ellipticity_margin));
    m.def("ellipticity_margin", py::overload_cast<const Quartic2&>(&ellipticity_margin));
    m.def("compose", &compose);
    m.def("factor_quartic", [](const Quartic2& p) {
        const auto f = factor_quartic(p);
        return py::make_tuple(f.first, f.second, f.residual);
    }, "Returns (first, second, residual).");

    m.def("free_mask", [](const Grid& g, const std::string& shape) {
        auto mask = mask_of(g, shape);
        py::array_t<bool> out({g.ny(), g.nx()});
        for (int k = 0; k < g.size(); ++k) out.mutable_data()[k] = mask->is_free(k);
        return out;
    }, py::arg("grid"), py::arg("shape") = "full", "Boolean array, True on free nodes.");

    m.def("solve", [](const Quadratic2& a, const Grid& g, const Array& f, const py::object& weights,
                      const std::string& shape) {
        auto mask = mask_of(g, shape);
        auto s = assemble(a, weights_from(g, weights), mask);
        return to_array(solve(s, field_on(mask, f, "f")));
    }, py::arg("a"), py::arg("grid"), py::arg("f"), py::arg("weights") = 0.0, py::arg("shape") = "full",
          "Relaxed second-order solve A u + m u = f.");

    m.def("solve_navier", [](const Quadratic2& a, const Quadratic2& b, const Grid& g, const Array& f,
                             const std::string& shape) {
        auto mask = mask_of(g, shape);
        const auto sol = solve_navier(a, b, field_on(mask, f, "f"), mask);
        return py::make_tuple(to_array(sol.u), to_array(sol.v));
    }, py::arg("a"), py::arg("b"), py::arg("grid"), py::arg("f"), py::arg("shape") = "full",
          "B A u = f with u = A u = 0 on the boundary; returns (u, v).");

    m.def("solve_relaxed_system", [](const Quadratic2& a, const Quadratic2& b, const Grid& g, const Array& f,
                                     const py::object& m_a, const py::object& m_b) {
        const auto sol = solve_relaxed_system(a, b, weights_from(g, m_a), weights_from(g, m_b),
                                              field_on(full_mask(g), f, "f"));
        return py::make_tuple(to_array(sol.u), to_array(sol.v));
    }, py::arg("a"), py::arg("b"), py::arg("grid"), py::arg("f"), py::arg("m_a") = 0.0, py::arg("m_b") = 0.0);

    m.def("check_formulation_ii", [](const Quadratic2& a, const Quadratic2& b, const Grid& g, const Array& f,
                                     int trials, std::uint64_t seed) {
        auto mask = full_mask(g);
        const Field ff = field_on(mask, f, "f");
        return check_formulation_ii(solve_navier(a, b, ff, mask), ff, trials, seed);
    }, py::arg("a"), py::arg("b"), py::arg("grid"), py::arg("f"), py::arg("trials") = 20, py::arg("seed") = 42);

    m.def("nosol_instance", [](const Grid& g) {
        const auto inst = nosol_instance(g);
        return py::make_tuple(to_array(inst.w), to_array(inst.f));
    }, "Returns (w, f) with f built so that m = 1 reproduces w.");

    m.def("evaluate_J", [](const Grid& g, const py::object& weights, const Quadratic2& a, const Quadratic2& b,
                           const Array& f, const Array& target) {
        auto mask = full_mask(g);
        return evaluate_J(weights_from(g, weights), a, b, field_on(mask, f, "f"),
                          Objective::tracking(field_on(mask, target, "target")));
    }, py::arg("grid"), py::arg("weights"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("target"),
          "Tracking cost sum (u - target)^2 hx hy.");

    m.def("gradient_J", [](const Grid& g, const py::object& weights, const Quadratic2& a, const Quadratic2& b,
                           const Array& f, const Array& target) {
        auto mask = full_mask(g);
        const auto gr = gradient_J(weights_from(g, weights), a, b, field_on(mask, f, "f"),
                                   Objective::tracking(field_on(mask, target, "target")));
        return py::make_tuple(gr.value, to_array(g, gr.gradient));
    }, py::arg("grid"), py::arg("weights"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("target"));

    m.def("optimize", [](const Grid& g, const Quadratic2& a, const Quadratic2& b, const Array& f,
                         const Array& target, const py::object& m0, int max_iters) {
        auto mask = full_mask(g);
        const auto st = optimize(a, b, field_on(mask, f, "f"), Objective::tracking(field_on(mask, target, "target")),
                                 weights_from(g, m0), max_iters);
        return opt_state_dict(g, st);
    }, py::arg("grid"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("target"), py::arg("m0") = 0.0,
          py::arg("max_iters") = 100);

    m.def("fit_constant_mu", [](const Quadratic2& a, const Quadratic2& b, const Grid& g, const Array& f,
                                const Array& target) {
        auto mask = full_mask(g);
        const auto fit = fit_constant_mu(a, b, field_on(mask, f, "f"), field_on(mask, target, "target"));
        py::dict d;
        d["m_star"] = fit.m_star;
        d["distance"] = fit.distance;
        d["flat"] = fit.flat;
        d["evaluations"] = fit.evaluations;
        return d;
    }, py::arg("a"), py::arg("b"), py::arg("grid"), py::arg("f"), py::arg("target"));

    m.def("perforate", [](const Grid& g, int n, double scale, double exponent, const std::string& kind) {
        PerforationRule rule;
        if (kind == "power") {
            rule = PerforationRule::power(scale, exponent);
        } else if (kind == "exp") {
            rule = PerforationRule::exponential(scale, exponent);
        } else {
            throw InvalidArgument("kind must be 'power' or 'exp'");
        }
        auto mask = perforate(g, rule, n);
        py::array_t<bool> out({g.ny(), g.nx()});
        for (int k = 0; k < g.size(); ++k) out.mutable_data()[k] = mask->is_free(k);
        return out;
    }, py::arg("grid"), py::arg("n"), py::arg("scale") = 0.1, py::arg("exponent") = 1.0, py::arg("kind") = "power",
          "Free-node mask of the n x n perforated domain.");
}
