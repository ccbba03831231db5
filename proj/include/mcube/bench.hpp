#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcube/grid.hpp"

namespace mcube {

// Six-variable benchmark: the ten formula symbols wrap onto six variables,
// symbol i binding to variable i mod 6. Every log/sqrt argument must be
// strictly positive; violations raise domain_error naming the constraint.
double r6(std::span<const double> v);

struct BenchmarkFunction {
    std::string name;
    std::size_t arity = 0;
    std::function<double(std::span<const double>)> eval;
    // Per-variable closed reference box; finiteness over it is verified by
    // dense sampling when the function is looked up.
    std::vector<std::pair<double, double>> domain;
};

// Named function bound to `dim` variables; throws std::invalid_argument for
// unknown names or an arity mismatch.
BenchmarkFunction find_benchmark(std::string_view name, std::size_t dim);
std::vector<std::string> benchmark_names();

struct BenchConfig {
    std::string function = "r6";
    std::size_t dim = 6;
    std::size_t size = 12;  // knots per dimension
    std::vector<double> spacings{0.5};
    // Center of the sampled region (and of the grid). NaN picks the lowest
    // anchor that keeps every knot at or above the function's reference box.
    double anchor = std::numeric_limits<double>::quiet_NaN();
    InterpKind kind = InterpKind::polynomial;
    std::size_t order = 5;
    std::size_t samples = 200;
    std::uint64_t seed = 42;
    bool allow_extrapolation = false;
};

struct BenchRow {
    double spacing = 0.0;
    std::size_t order = 0;
    InterpKind kind = InterpKind::linear;
    double max_abs_err = 0.0;
    double mean_abs_err = 0.0;
    double queries_per_sec = 0.0;
    double prepares_per_query = 0.0;
};

// Declared grids larger than this many elements are refused up front.
inline constexpr std::size_t kMaxGridElements = std::size_t{1} << 27;

// One row per configured spacing: builds the grid, draws seeded samples
// strictly inside the window-safe interior region, and compares direct
// function calls against grid interpolation. Error columns are
// deterministic for a fixed config.
std::vector<BenchRow> run_precision(const BenchConfig& config);

struct SpeedReport {
    BenchRow recursive;
    std::optional<BenchRow> iterative;
};

// Times the recursive path on the first configured spacing, and the
// stage-materializing baseline on the same workload when requested.
SpeedReport run_speed(const BenchConfig& config, bool compare_iterative);

enum class TableFormat { tsv, pretty };

std::string emit(std::span<const BenchRow> rows, TableFormat format);

// Equivalence and counter audits; prints one line per audit and returns the
// number of failures.
int run_verify(std::ostream& out);

}  // namespace mcube
