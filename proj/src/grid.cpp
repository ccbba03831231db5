#include "mcube/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mcube/error.hpp"

namespace mcube {

namespace {

std::string tuple_to_string(std::span<const double> values) {
    std::string out = "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += std::to_string(values[i]);
    }
    out += ")";
    return out;
}

}  // namespace

Mesh::Mesh(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) {
        throw std::invalid_argument("Mesh: at least one axis required");
    }
    for (std::size_t dim = 0; dim < axes_.size(); ++dim) {
        const std::vector<double>& axis = axes_[dim];
        if (axis.empty()) {
            throw std::invalid_argument("Mesh: axis " + std::to_string(dim + 1) + " is empty");
        }
        for (double knot : axis) {
            if (!std::isfinite(knot)) {
                throw std::invalid_argument("Mesh: axis " + std::to_string(dim + 1) +
                                            " contains a non-finite knot");
            }
        }
        for (std::size_t i = 1; i < axis.size(); ++i) {
            if (axis[i] <= axis[i - 1]) {
                if (axis.size() > 1 && axis.back() < axis.front()) {
                    throw std::invalid_argument(
                        "Mesh: axis " + std::to_string(dim + 1) +
                        " is decreasing; reverse the axis and the matching data order");
                }
                throw std::invalid_argument("Mesh: axis " + std::to_string(dim + 1) +
                                            " is not strictly increasing");
            }
        }
    }
}

std::vector<std::size_t> Mesh::shape() const {
    std::vector<std::size_t> sizes(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        sizes[i] = axes_[i].size();
    }
    return sizes;
}

Grid::Grid(Mesh mesh, MultiArray data) : mesh_(std::move(mesh)), data_(std::move(data)) {
    if (mesh_.shape() != data_.spec().sizes()) {
        throw std::invalid_argument("Grid: mesh shape does not match data shape");
    }
}

Grid Grid::build(Mesh mesh, const std::function<double(std::span<const double>)>& f) {
    const std::size_t n = mesh.rank();
    std::vector<double> point(n);
    MultiArray data = MultiArray::from_function(
        IndexSpec::dense(mesh.shape()),
        [&](std::span<const std::int64_t> index) {
            for (std::size_t i = 0; i < n; ++i) {
                point[i] = mesh.axis(i)[static_cast<std::size_t>(index[i] - 1)];
            }
            const double value = f(point);
            if (!std::isfinite(value)) {
                throw nonfinite_error("build_grid: non-finite value at knot tuple " +
                                      tuple_to_string(point));
            }
            return value;
        });
    return Grid(std::move(mesh), std::move(data));
}

Grid build_grid(Mesh mesh, const std::function<double(std::span<const double>)>& f) {
    return Grid::build(std::move(mesh), f);
}

void Grid::save(std::ostream& out) const {
    data_.save(out);
    for (std::size_t dim = 0; dim < mesh_.rank(); ++dim) {
        const std::span<const double> axis = mesh_.axis(dim);
        MultiArray record(IndexSpec({axis.size()}, {data_.spec().offset(dim)}),
                          std::vector<double>(axis.begin(), axis.end()));
        record.save(out);
    }
}

Grid Grid::load(std::istream& in) {
    MultiArray data = MultiArray::load(in);
    std::vector<std::vector<double>> axes(data.spec().rank());
    for (std::size_t dim = 0; dim < axes.size(); ++dim) {
        MultiArray record = MultiArray::load(in);
        if (record.spec().rank() != 1 || record.spec().size(0) != data.spec().size(dim)) {
            throw io_error("Grid::load: axis record " + std::to_string(dim + 1) +
                           " does not match data shape");
        }
        axes[dim].assign(record.data().begin(), record.data().end());
    }
    return Grid(Mesh(std::move(axes)), std::move(data));
}

std::size_t locate_window(std::span<const double> axis, double x, std::size_t window) {
    const std::size_t s = axis.size();
    if (window < 2 || window > s) {
        throw std::invalid_argument("locate_window: window length must be in [2, axis size]");
    }
    if (!std::isfinite(x)) {
        throw std::invalid_argument("locate_window: abscissa must be finite");
    }
    std::size_t bracket;
    if (x < axis.front()) {
        bracket = 0;
    } else if (x >= axis.back()) {
        bracket = s - 2;
    } else {
        bracket = static_cast<std::size_t>(std::upper_bound(axis.begin(), axis.end(), x) -
                                           axis.begin()) -
                  1;
    }
    const std::size_t half = (window - 1) / 2;
    const std::size_t start = bracket > half ? bracket - half : 0;
    return std::min(start, s - window);
}

GridInterpolator::GridInterpolator(const Grid& grid, std::vector<Interpolator1D> interpolators,
                                   InterpOptions options)
    : grid_(&grid), interpolators_(std::move(interpolators)), options_(options) {
    const std::size_t n = grid.mesh().rank();
    if (interpolators_.size() != n) {
        throw std::invalid_argument("GridInterpolator: expected one interpolator per dimension");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Interpolator1D& interp = interpolators_[i];
        if (interp.order < 2 || interp.order > grid.mesh().axis(i).size()) {
            throw std::invalid_argument("GridInterpolator: order in dimension " +
                                        std::to_string(i + 1) + " must be in [2, axis size]");
        }
        if (interp.kind == InterpKind::linear && interp.order != 2) {
            throw std::invalid_argument("GridInterpolator: linear kind has order exactly 2");
        }
    }

    window_.starts.resize(n);
    window_.lengths.resize(n);
    stages_.resize(n);
    functions_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        window_.lengths[i] = interpolators_[i].order;
        functions_.push_back(stages_[i].as_quantizing_function());
    }
    counters_.prepares.resize(n);
    counters_.quantizes.resize(n);
}

void GridInterpolator::select_windows(std::span<const double> query) {
    const std::size_t n = grid_->mesh().rank();
    if (query.size() != n) {
        throw std::invalid_argument("interpolate: query length does not match grid rank");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> axis = grid_->mesh().axis(i);
        if (!std::isfinite(query[i])) {
            throw std::invalid_argument("interpolate: query coordinate " + std::to_string(i + 1) +
                                        " is not finite");
        }
        if (!options_.allow_extrapolation &&
            (query[i] < axis.front() || query[i] > axis.back())) {
            throw domain_error("interpolate: query coordinate " + std::to_string(query[i]) +
                               " outside mesh hull in dimension " + std::to_string(i + 1) +
                               " (extrapolation disabled)");
        }
        window_.starts[i] = locate_window(axis, query[i], interpolators_[i].order);
    }
}

double GridInterpolator::recursive(std::span<const double> query) {
    select_windows(query);
    const std::size_t n = grid_->mesh().rank();
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> axis = grid_->mesh().axis(i);
        stages_[i].reset(interpolators_[i],
                         axis.subspan(window_.starts[i], interpolators_[i].order), query[i]);
    }
    const ArrayView view = grid_->data().subwindow(window_);
    const double result = quantize(view, functions_, {}, &workspace_);
    for (std::size_t i = 0; i < n; ++i) {
        counters_.prepares[i] = stages_[i].prepare_count();
        counters_.quantizes[i] = stages_[i].quantize_count();
    }
    return result;
}

double GridInterpolator::iterative(std::span<const double> query) {
    select_windows(query);
    const std::size_t n = grid_->mesh().rank();
    std::fill(counters_.prepares.begin(), counters_.prepares.end(), 0);
    std::fill(counters_.quantizes.begin(), counters_.quantizes.end(), 0);

    const ArrayView view = grid_->data().subwindow(window_);

    // First stage: fold the innermost dimension of the embedded window,
    // producing the first reduced database.
    MultiArray database = [&] {
        const std::size_t dim = n - 1;
        const std::size_t width = interpolators_[dim].order;
        const std::span<const double> axis = grid_->mesh().axis(dim);
        const std::span<const double> knots = axis.subspan(window_.starts[dim], width);
        row_.resize(width);

        std::vector<std::size_t> outer_shape(std::max<std::size_t>(n - 1, 1), 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            outer_shape[i] = interpolators_[i].order;
        }
        std::vector<std::size_t> position(n - 1, 0);
        std::vector<double> values;
        bool more = true;
        while (more) {
            std::size_t offset = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                offset += position[i] * view.stride(i);
            }
            for (std::size_t t = 0; t < width; ++t) {
                row_[t] = view.origin()[offset + t * view.stride(dim)];
            }
            PreparedStage stage(interpolators_[dim], knots, query[dim]);
            ++counters_.prepares[dim];
            values.push_back(stage.quantize(row_));
            ++counters_.quantizes[dim];

            more = false;
            for (std::size_t i = position.size(); i > 0; --i) {
                if (++position[i - 1] < interpolators_[i - 1].order) {
                    more = true;
                    break;
                }
                position[i - 1] = 0;
            }
            if (position.empty()) {
                more = false;
            }
        }
        return MultiArray(IndexSpec::dense(outer_shape), std::move(values));
    }();

    // Remaining stages shrink the database one dimension at a time.
    for (std::size_t dim = n - 1; dim > 0; --dim) {
        const std::size_t fold = dim - 1;
        const std::size_t width = interpolators_[fold].order;
        const std::span<const double> axis = grid_->mesh().axis(fold);
        const std::span<const double> knots = axis.subspan(window_.starts[fold], width);
        const std::span<const double> flat = database.data();
        const std::size_t rows = flat.size() / width;

        std::vector<double> values(rows);
        for (std::size_t row = 0; row < rows; ++row) {
            PreparedStage stage(interpolators_[fold], knots, query[fold]);
            ++counters_.prepares[fold];
            values[row] = stage.quantize(flat.subspan(row * width, width));
            ++counters_.quantizes[fold];
        }
        if (fold == 0) {
            return values.front();
        }
        std::vector<std::size_t> shape(fold, 1);
        for (std::size_t i = 0; i < fold; ++i) {
            shape[i] = interpolators_[i].order;
        }
        database = MultiArray(IndexSpec::dense(shape), std::move(values));
    }
    return database.data().front();
}

double interpolate_recursive(const Grid& grid, std::span<const double> query,
                             const std::vector<Interpolator1D>& interpolators,
                             InterpOptions options, QueryCounters* counters) {
    GridInterpolator context(grid, interpolators, options);
    const double result = context.recursive(query);
    if (counters != nullptr) {
        *counters = context.counters();
    }
    return result;
}

double interpolate_iterative(const Grid& grid, std::span<const double> query,
                             const std::vector<Interpolator1D>& interpolators,
                             InterpOptions options, QueryCounters* counters) {
    GridInterpolator context(grid, interpolators, options);
    const double result = context.iterative(query);
    if (counters != nullptr) {
        *counters = context.counters();
    }
    return result;
}

}  // namespace mcube
