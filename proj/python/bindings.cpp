#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcube/bench.hpp"
#include "mcube/error.hpp"
#include "mcube/grid.hpp"
#include "mcube/quantize.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

mcube::MultiArray array_from_numpy(const DoubleArray& values) {
    if (values.ndim() < 1) {
        throw std::invalid_argument("values must have at least one dimension");
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(values.ndim()));
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        sizes[i] = static_cast<std::size_t>(values.shape(static_cast<py::ssize_t>(i)));
    }
    const double* begin = values.data();
    std::vector<double> data(begin, begin + values.size());
    return mcube::MultiArray(mcube::IndexSpec::dense(sizes), std::move(data));
}

mcube::Grid grid_from_values(std::vector<std::vector<double>> axes, const DoubleArray& values) {
    return mcube::Grid(mcube::Mesh(std::move(axes)), array_from_numpy(values));
}

std::vector<mcube::Interpolator1D> make_interpolators(std::size_t rank,
                                                      const std::vector<std::string>& kinds,
                                                      const std::vector<std::size_t>& orders) {
    if (kinds.size() != 1 && kinds.size() != rank) {
        throw std::invalid_argument("kinds must hold one entry or one per dimension");
    }
    if (orders.size() != 1 && orders.size() != rank) {
        throw std::invalid_argument("orders must hold one entry or one per dimension");
    }
    std::vector<mcube::Interpolator1D> interpolators(rank);
    for (std::size_t i = 0; i < rank; ++i) {
        interpolators[i].kind = mcube::parse_kind(kinds.size() == 1 ? kinds[0] : kinds[i]);
        interpolators[i].order = orders.size() == 1 ? orders[0] : orders[i];
    }
    return interpolators;
}

mcube::QuantizingFunction reducer_by_name(const std::string& name, std::size_t order) {
    if (name == "sum") {
        return mcube::make_sum(order);
    }
    if (name == "mean") {
        return mcube::make_mean(order);
    }
    if (name == "max") {
        return mcube::make_max(order);
    }
    if (name == "min") {
        return mcube::make_min(order);
    }
    throw std::invalid_argument("unknown reducer '" + name + "' (use sum/mean/max/min)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rectilinear grid interpolation as recursive quantization of flat storage";

    py::register_exception<mcube::io_error>(m, "IoError", PyExc_IOError);
    py::register_exception<mcube::pole_error>(m, "PoleError", PyExc_ArithmeticError);
    py::register_exception<mcube::domain_error>(m, "DomainError", PyExc_ValueError);
    py::register_exception<mcube::nonfinite_error>(m, "NonFiniteError", PyExc_ValueError);
    py::register_exception<mcube::memory_guard_error>(m, "MemoryGuardError", PyExc_MemoryError);

    py::class_<mcube::Grid>(m, "Grid")
        .def(py::init(&grid_from_values), py::arg("axes"), py::arg("values"),
             "Grid from knot axes and a value array of matching shape")
        .def_static(
            "from_function",
            [](std::vector<std::vector<double>> axes, const py::function& f) {
                return mcube::build_grid(mcube::Mesh(std::move(axes)),
                                         [&f](std::span<const double> point) {
                                             py::tuple args(point.size());
                                             for (std::size_t i = 0; i < point.size(); ++i) {
                                                 args[i] = point[i];
                                             }
                                             return f(*args).cast<double>();
                                         });
            },
            py::arg("axes"), py::arg("f"), "Grid filled with f evaluated at every knot tuple")
        .def(
            "interpolate",
            [](const mcube::Grid& grid, const std::vector<double>& point,
               const std::vector<std::string>& kinds, const std::vector<std::size_t>& orders,
               const std::string& method, bool allow_extrapolation) {
                const auto interpolators =
                    make_interpolators(grid.mesh().rank(), kinds, orders);
                const mcube::InterpOptions options{allow_extrapolation};
                if (method == "recursive") {
                    return mcube::interpolate_recursive(grid, point, interpolators, options);
                }
                if (method == "iterative") {
                    return mcube::interpolate_iterative(grid, point, interpolators, options);
                }
                throw std::invalid_argument("method must be 'recursive' or 'iterative'");
            },
            py::arg("point"), py::arg("kinds") = std::vector<std::string>{"linear"},
            py::arg("orders") = std::vector<std::size_t>{2}, py::arg("method") = "recursive",
            py::arg("allow_extrapolation") = false)
        .def("save",
             [](const mcube::Grid& grid, const std::string& path) {
                 std::ofstream out(path, std::ios::binary);
                 if (!out) {
                     throw mcube::io_error("cannot open '" + path + "' for writing");
                 }
                 grid.save(out);
             },
             py::arg("path"))
        .def_static("load",
                    [](const std::string& path) {
                        std::ifstream in(path, std::ios::binary);
                        if (!in) {
                            throw mcube::io_error("cannot open '" + path + "' for reading");
                        }
                        return mcube::Grid::load(in);
                    },
                    py::arg("path"))
        .def_property_readonly("axes",
                               [](const mcube::Grid& grid) { return grid.mesh().axes(); })
        .def_property_readonly("shape",
                               [](const mcube::Grid& grid) { return grid.mesh().shape(); })
        .def_property_readonly("values", [](const mcube::Grid& grid) {
            const auto& sizes = grid.data().spec().sizes();
            std::vector<py::ssize_t> shape(sizes.begin(), sizes.end());
            py::array_t<double> out(shape);
            std::copy(grid.data().data().begin(), grid.data().data().end(),
                      out.mutable_data());
            return out;
        });

    m.def("locate_window",
          [](const std::vector<double>& axis, double x, std::size_t window) {
              return mcube::locate_window(axis, x, window);
          },
          py::arg("axis"), py::arg("x"), py::arg("window"),
          "Zero-based start of the window-length knot run centered on x");

    m.def("r6", [](const std::vector<double>& v) { return mcube::r6(v); }, py::arg("v"),
          "Six-variable benchmark function");

    m.def("quantize",
          [](const DoubleArray& values, const std::vector<std::string>& reducers,
             const std::string& method) {
              const mcube::MultiArray array = array_from_numpy(values);
              if (reducers.size() != array.spec().rank()) {
                  throw std::invalid_argument("expected one reducer per dimension");
              }
              std::vector<mcube::QuantizingFunction> functions;
              functions.reserve(reducers.size());
              for (std::size_t i = 0; i < reducers.size(); ++i) {
                  functions.push_back(reducer_by_name(reducers[i], array.spec().size(i)));
              }
              if (method == "recursive") {
                  return mcube::quantize(array.full_view(), functions);
              }
              if (method == "iterative") {
                  return mcube::quantize_iterative(array.full_view(), functions);
              }
              throw std::invalid_argument("method must be 'recursive' or 'iterative'");
          },
          py::arg("values"), py::arg("reducers"), py::arg("method") = "recursive",
          "Collapse an N-dimensional array with one named reducer per dimension");

    m.attr("__version__") = "0.1.0";
}
