#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "mcube/interp1d.hpp"
#include "mcube/multi_array.hpp"

namespace mcube {

// N knot axes, each strictly increasing.
class Mesh {
public:
    explicit Mesh(std::vector<std::vector<double>> axes);

    std::size_t rank() const noexcept { return axes_.size(); }
    std::span<const double> axis(std::size_t dim) const { return axes_[dim]; }
    const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }
    std::vector<std::size_t> shape() const;

private:
    std::vector<std::vector<double>> axes_;
};

// Mesh plus the array of function values at every mesh node. Immutable and
// shareable; concurrent queries need one evaluation context each.
class Grid {
public:
    Grid(Mesh mesh, MultiArray data);

    // Fills the value array lexicographically with f at the knot tuples.
    static Grid build(Mesh mesh, const std::function<double(std::span<const double>)>& f);

    const Mesh& mesh() const noexcept { return mesh_; }
    const MultiArray& data() const noexcept { return data_; }

    // One value record followed by one record per knot axis, all in the
    // array binary format.
    void save(std::ostream& out) const;
    static Grid load(std::istream& in);

private:
    Mesh mesh_;
    MultiArray data_;
};

Grid build_grid(Mesh mesh, const std::function<double(std::span<const double>)>& f);

// Zero-based start of the length-`window` knot run centered on x: with k the
// largest position satisfying axis[k] <= x (clamped to [0, S-2]), the start
// is k - floor((window-1)/2) clamped into [0, S-window].
std::size_t locate_window(std::span<const double> axis, double x, std::size_t window);

struct InterpOptions {
    // When false, queries outside the mesh hull are rejected; when true the
    // window clamps to the boundary and the algorithms extrapolate.
    bool allow_extrapolation = false;
};

// Per-dimension instrumentation from the most recent query.
struct QueryCounters {
    std::vector<std::size_t> prepares;
    std::vector<std::size_t> quantizes;
};

// Evaluation context for repeated queries against one grid: owns the
// window selection, prepared stages and recursion scratch, so the
// recursive path performs exactly N stage preparations per query and no
// allocation. Not shareable across concurrent calls.
class GridInterpolator {
public:
    GridInterpolator(const Grid& grid, std::vector<Interpolator1D> interpolators,
                     InterpOptions options = {});

    // Quantizes the embedded window view with the per-dimension prepared
    // stages as quantizing functions.
    double recursive(std::span<const double> query);

    // Dimensional-reduction baseline: materializes each stage database as a
    // fresh array and re-prepares the stage's constant arguments for every
    // interpolator call.
    double iterative(std::span<const double> query);

    const QueryCounters& counters() const noexcept { return counters_; }
    const std::vector<Interpolator1D>& interpolators() const noexcept { return interpolators_; }

private:
    void select_windows(std::span<const double> query);

    const Grid* grid_;
    std::vector<Interpolator1D> interpolators_;
    InterpOptions options_;
    WindowSpec window_;
    std::vector<PreparedStage> stages_;
    std::vector<QuantizingFunction> functions_;
    QuantizeWorkspace workspace_;
    QueryCounters counters_;
    std::vector<double> row_;
};

double interpolate_recursive(const Grid& grid, std::span<const double> query,
                             const std::vector<Interpolator1D>& interpolators,
                             InterpOptions options = {}, QueryCounters* counters = nullptr);

double interpolate_iterative(const Grid& grid, std::span<const double> query,
                             const std::vector<Interpolator1D>& interpolators,
                             InterpOptions options = {}, QueryCounters* counters = nullptr);

}  // namespace mcube
