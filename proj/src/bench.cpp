#include "mcube/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "mcube/error.hpp"
#include "mcube/quantize.hpp"

namespace mcube {

namespace {

void require(bool condition, const char* constraint) {
    if (!condition) {
        throw domain_error(std::string("r6: domain violation: ") + constraint);
    }
}

BenchmarkFunction make_r6() {
    return BenchmarkFunction{
        "r6", 6, [](std::span<const double> v) { return r6(v); },
        std::vector<std::pair<double, double>>(6, {2.0, 6.0})};
}

BenchmarkFunction sum_benchmark(std::size_t dim) {
    return BenchmarkFunction{
        "sum", dim,
        [](std::span<const double> v) {
            double acc = 0.0;
            for (double x : v) {
                acc += x;
            }
            return acc;
        },
        std::vector<std::pair<double, double>>(dim, {-100.0, 100.0})};
}

BenchmarkFunction quadratic_benchmark(std::size_t dim) {
    return BenchmarkFunction{
        "quadratic", dim,
        [](std::span<const double> v) {
            double acc = 1.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                acc += v[i] + (0.5 + 0.1 * static_cast<double>(i)) * v[i] * v[i];
            }
            return acc;
        },
        std::vector<std::pair<double, double>>(dim, {-100.0, 100.0})};
}

BenchmarkFunction gauss_benchmark(std::size_t dim) {
    return BenchmarkFunction{
        "gauss", dim,
        [dim](std::span<const double> v) {
            double acc = 0.0;
            for (double x : v) {
                acc += x * x;
            }
            return std::exp(-acc / (2.0 * static_cast<double>(dim)));
        },
        std::vector<std::pair<double, double>>(dim, {-10.0, 10.0})};
}

// Finiteness over the reference box, by lattice plus random sampling.
void check_registration(const BenchmarkFunction& fn) {
    const std::size_t dim = fn.arity;
    std::size_t lattice = 2;
    while (std::pow(static_cast<double>(lattice + 1), static_cast<double>(dim)) <= 4096.0) {
        ++lattice;
    }
    std::vector<double> point(dim);
    std::vector<std::size_t> position(dim, 0);
    bool more = true;
    while (more) {
        for (std::size_t i = 0; i < dim; ++i) {
            const auto [lo, hi] = fn.domain[i];
            point[i] = lo + (hi - lo) * static_cast<double>(position[i]) /
                                static_cast<double>(lattice - 1);
        }
        if (!std::isfinite(fn.eval(point))) {
            throw nonfinite_error("benchmark '" + fn.name + "' is not finite on its domain");
        }
        more = false;
        for (std::size_t i = dim; i > 0; --i) {
            if (++position[i - 1] < lattice) {
                more = true;
                break;
            }
            position[i - 1] = 0;
        }
    }
    std::mt19937_64 rng(0x6d637562);
    for (int trial = 0; trial < 256; ++trial) {
        for (std::size_t i = 0; i < dim; ++i) {
            const auto [lo, hi] = fn.domain[i];
            point[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
        }
        if (!std::isfinite(fn.eval(point))) {
            throw nonfinite_error("benchmark '" + fn.name + "' is not finite on its domain");
        }
    }
}

struct SampleSet {
    Grid grid;
    std::vector<std::vector<double>> queries;
    std::vector<double> direct;
};

std::vector<std::vector<double>> make_axes(const BenchConfig& config,
                                           const BenchmarkFunction& fn, double spacing) {
    const double span = spacing * static_cast<double>(config.size - 1);
    std::vector<std::vector<double>> axes(config.dim);
    for (std::size_t i = 0; i < config.dim; ++i) {
        const double anchor =
            std::isnan(config.anchor) ? fn.domain[i].first + span / 2.0 : config.anchor;
        axes[i].resize(config.size);
        for (std::size_t k = 0; k < config.size; ++k) {
            axes[i][k] = anchor - span / 2.0 + spacing * static_cast<double>(k);
        }
    }
    return axes;
}

void validate_config(const BenchConfig& config) {
    if (config.dim < 1) {
        throw std::invalid_argument("bench: dim must be at least 1");
    }
    if (config.order < 2 || config.order > config.size) {
        throw std::invalid_argument("bench: order must be in [2, size]");
    }
    if (config.kind == InterpKind::linear && config.order != 2) {
        throw std::invalid_argument("bench: linear kind has order exactly 2");
    }
    if (config.spacings.empty()) {
        throw std::invalid_argument("bench: at least one spacing required");
    }
    for (double h : config.spacings) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw std::invalid_argument("bench: spacing must be positive and finite");
        }
    }
    if (config.samples < 1) {
        throw std::invalid_argument("bench: at least one sample required");
    }
    const std::size_t margin = (config.order + 1) / 2;
    if (config.size < 2 * margin + 2) {
        throw std::invalid_argument(
            "bench: window-safe interior region is empty; increase size or decrease order");
    }

    std::size_t count = 1;
    for (std::size_t i = 0; i < config.dim; ++i) {
        if (__builtin_mul_overflow(count, config.size, &count) || count > kMaxGridElements) {
            throw memory_guard_error(
                count, count * sizeof(double),
                "bench: declared grid of " + std::to_string(config.size) + "^" +
                    std::to_string(config.dim) +
                    " elements exceeds the allocation ceiling of 2^27 (would need at least " +
                    std::to_string((kMaxGridElements + 1) * sizeof(double) / (1 << 20)) +
                    " MiB); refusing before allocation");
        }
    }
}

SampleSet build_samples(const BenchConfig& config, const BenchmarkFunction& fn, double spacing) {
    Grid grid = build_grid(Mesh(make_axes(config, fn, spacing)), fn.eval);

    const std::size_t margin = (config.order + 1) / 2;
    std::mt19937_64 rng(config.seed);
    std::vector<std::uniform_real_distribution<double>> coord;
    coord.reserve(config.dim);
    for (std::size_t i = 0; i < config.dim; ++i) {
        const std::span<const double> axis = grid.mesh().axis(i);
        coord.emplace_back(axis[margin], axis[axis.size() - 1 - margin]);
    }

    std::vector<std::vector<double>> queries(config.samples, std::vector<double>(config.dim));
    std::vector<double> direct(config.samples);
    for (std::size_t s = 0; s < config.samples; ++s) {
        for (std::size_t i = 0; i < config.dim; ++i) {
            queries[s][i] = coord[i](rng);
        }
        direct[s] = fn.eval(queries[s]);
    }
    return SampleSet{std::move(grid), std::move(queries), std::move(direct)};
}

template <typename Evaluate>
BenchRow measure(const BenchConfig& config, double spacing, const SampleSet& samples,
                 GridInterpolator& context, Evaluate&& evaluate) {
    using clock = std::chrono::steady_clock;
    double max_err = 0.0;
    double sum_err = 0.0;
    const auto begin = clock::now();
    for (std::size_t s = 0; s < samples.queries.size(); ++s) {
        const double estimate = evaluate(samples.queries[s]);
        const double err = std::abs(estimate - samples.direct[s]);
        max_err = std::max(max_err, err);
        sum_err += err;
    }
    const auto end = clock::now();
    const double seconds = std::chrono::duration<double>(end - begin).count();

    std::size_t prepares = 0;
    for (std::size_t p : context.counters().prepares) {
        prepares += p;
    }
    BenchRow row;
    row.spacing = spacing;
    row.order = config.order;
    row.kind = config.kind;
    row.max_abs_err = max_err;
    row.mean_abs_err = sum_err / static_cast<double>(samples.queries.size());
    row.queries_per_sec =
        seconds > 0.0 ? static_cast<double>(samples.queries.size()) / seconds : 0.0;
    row.prepares_per_query = static_cast<double>(prepares);
    return row;
}

}  // namespace

double r6(std::span<const double> v) {
    if (v.size() != 6) {
        throw std::invalid_argument("r6: expected 6 variables");
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw domain_error("r6: domain violation: arguments must be finite");
        }
    }
    require(v[1] > 0.0, "log(v1) needs v1 > 0");
    const double log_v1 = std::log(v[1]);
    require(log_v1 >= 0.0, "sqrt(log(v1)) needs v1 >= 1");
    const double inner = v[0] * std::sqrt(log_v1);
    require(inner >= 0.0, "sqrt(v0*sqrt(log(v1))) needs v0 >= 0");
    require(std::sqrt(inner) * v[2] > 0.0, "log(sqrt(v0*sqrt(log(v1)))*v2) needs a positive argument");
    require(v[3] * v[4] > 0.0, "log(v3*v4) needs v3*v4 > 0");
    require(v[5] >= 0.0, "sqrt(v5) needs v5 >= 0");
    const double tail = std::log(v[3] * v[4]) * std::sqrt(v[5]);
    require(tail >= 0.0, "sqrt(log(v3*v4)*sqrt(v5)) needs a non-negative argument");

    return std::log(std::sqrt(inner) * v[2]) + v[1] * v[3] -
           std::exp(std::sin(v[2]) * std::sin(3.0 * v[3])) + std::sqrt(tail) +
           v[0] * std::sinh(v[1] + 12.0);
}

BenchmarkFunction find_benchmark(std::string_view name, std::size_t dim) {
    BenchmarkFunction fn;
    if (name == "r6") {
        if (dim != 6) {
            throw std::invalid_argument("benchmark 'r6' takes exactly 6 variables");
        }
        fn = make_r6();
    } else if (name == "sum") {
        fn = sum_benchmark(dim);
    } else if (name == "quadratic") {
        fn = quadratic_benchmark(dim);
    } else if (name == "gauss") {
        fn = gauss_benchmark(dim);
    } else {
        throw std::invalid_argument("unknown benchmark function '" + std::string(name) + "'");
    }
    check_registration(fn);
    return fn;
}

std::vector<std::string> benchmark_names() {
    return {"r6", "sum", "quadratic", "gauss"};
}

std::vector<BenchRow> run_precision(const BenchConfig& config) {
    validate_config(config);
    const BenchmarkFunction fn = find_benchmark(config.function, config.dim);

    std::vector<BenchRow> rows;
    rows.reserve(config.spacings.size());
    for (double spacing : config.spacings) {
        const SampleSet samples = build_samples(config, fn, spacing);
        GridInterpolator context(samples.grid,
                                 std::vector<Interpolator1D>(config.dim, {config.kind, config.order}),
                                 InterpOptions{config.allow_extrapolation});
        rows.push_back(measure(config, spacing, samples, context,
                               [&](std::span<const double> q) { return context.recursive(q); }));
    }
    return rows;
}

SpeedReport run_speed(const BenchConfig& config, bool compare_iterative) {
    validate_config(config);
    const BenchmarkFunction fn = find_benchmark(config.function, config.dim);
    const double spacing = config.spacings.front();
    const SampleSet samples = build_samples(config, fn, spacing);
    GridInterpolator context(samples.grid,
                             std::vector<Interpolator1D>(config.dim, {config.kind, config.order}),
                             InterpOptions{config.allow_extrapolation});

    // Warm caches and fault in the grid before timing.
    const std::size_t warmup = std::min<std::size_t>(8, samples.queries.size());
    for (std::size_t s = 0; s < warmup; ++s) {
        context.recursive(samples.queries[s]);
    }

    SpeedReport report;
    report.recursive = measure(config, spacing, samples, context,
                               [&](std::span<const double> q) { return context.recursive(q); });
    if (compare_iterative) {
        for (std::size_t s = 0; s < warmup; ++s) {
            context.iterative(samples.queries[s]);
        }
        report.iterative = measure(config, spacing, samples, context,
                                   [&](std::span<const double> q) { return context.iterative(q); });
    }
    return report;
}

std::string emit(std::span<const BenchRow> rows, TableFormat format) {
    const char* headers[] = {"spacing",      "order", "kind",              "max_abs_err",
                             "mean_abs_err", "qps",   "prepares_per_query"};
    std::vector<std::array<std::string, 7>> cells;
    cells.reserve(rows.size());
    char buf[64];
    for (const BenchRow& row : rows) {
        std::array<std::string, 7> line;
        std::snprintf(buf, sizeof(buf), "%g", row.spacing);
        line[0] = buf;
        std::snprintf(buf, sizeof(buf), "%zu", row.order);
        line[1] = buf;
        line[2] = std::string(kind_name(row.kind));
        std::snprintf(buf, sizeof(buf), "%.6e", row.max_abs_err);
        line[3] = buf;
        std::snprintf(buf, sizeof(buf), "%.6e", row.mean_abs_err);
        line[4] = buf;
        std::snprintf(buf, sizeof(buf), "%.6g", row.queries_per_sec);
        line[5] = buf;
        std::snprintf(buf, sizeof(buf), "%g", row.prepares_per_query);
        line[6] = buf;
        cells.push_back(std::move(line));
    }

    std::string out;
    if (format == TableFormat::tsv) {
        for (std::size_t c = 0; c < 7; ++c) {
            out += headers[c];
            out += (c + 1 < 7) ? '\t' : '\n';
        }
        for (const auto& line : cells) {
            for (std::size_t c = 0; c < 7; ++c) {
                out += line[c];
                out += (c + 1 < 7) ? '\t' : '\n';
            }
        }
        return out;
    }

    std::array<std::size_t, 7> widths{};
    for (std::size_t c = 0; c < 7; ++c) {
        widths[c] = std::string_view(headers[c]).size();
        for (const auto& line : cells) {
            widths[c] = std::max(widths[c], line[c].size());
        }
    }
    const auto append_line = [&](const auto& line) {
        for (std::size_t c = 0; c < 7; ++c) {
            std::string cell{line[c]};
            cell.resize(widths[c], ' ');
            out += cell;
            out += (c + 1 < 7) ? "  " : "\n";
        }
    };
    append_line(headers);
    for (const auto& line : cells) {
        append_line(line);
    }
    return out;
}

namespace {

// Smooth positive random field used by the verify audits.
std::function<double(std::span<const double>)> random_field(std::mt19937_64& rng,
                                                            std::size_t dim) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<double> linear(dim);
    std::vector<double> square(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        linear[i] = coeff(rng);
        square[i] = 0.5 * coeff(rng);
    }
    // Large positive floor keeps the field one-signed, which keeps the
    // rational kind away from poles on these audits.
    return [linear, square](std::span<const double> v) {
        double acc = 100.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            acc += linear[i] * v[i] + square[i] * v[i] * v[i];
        }
        return acc;
    };
}

QuantizingFunction random_reducer(std::mt19937_64& rng, std::size_t order) {
    switch (rng() % 5) {
        case 0:
            return make_sum(order);
        case 1:
            return make_mean(order);
        case 2:
            return make_max(order);
        case 3:
            return make_min(order);
        default: {
            std::uniform_real_distribution<double> coeff(-1.0, 1.0);
            std::vector<double> weights(order);
            for (double& w : weights) {
                w = coeff(rng);
            }
            return make_weighted_sum(std::move(weights));
        }
    }
}

IndexSpec random_shape(std::mt19937_64& rng, std::size_t max_rank, std::size_t max_elements) {
    const std::size_t rank = 1 + rng() % max_rank;
    std::vector<std::size_t> sizes(rank);
    std::vector<std::int64_t> offsets(rank);
    std::size_t count = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        sizes[i] = 1 + rng() % 8;
        while (count * sizes[i] > max_elements) {
            sizes[i] = std::max<std::size_t>(1, sizes[i] / 2);
        }
        count *= sizes[i];
        offsets[i] = static_cast<std::int64_t>(rng() % 21) - 10;
    }
    return IndexSpec(std::move(sizes), std::move(offsets));
}

}  // namespace

int run_verify(std::ostream& out) {
    int failures = 0;
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> value(-1.0, 1.0);

    {
        int bad = 0;
        const int trials = 80;
        for (int t = 0; t < trials; ++t) {
            const IndexSpec spec = random_shape(rng, 4, 4096);
            std::vector<double> data(spec.element_count());
            for (double& x : data) {
                x = value(rng);
            }
            MultiArray array(spec, std::move(data));
            std::vector<QuantizingFunction> functions;
            for (std::size_t i = 0; i < spec.rank(); ++i) {
                functions.push_back(random_reducer(rng, spec.size(i)));
            }
            if (!quantize_equivalence_check(array, functions, {}, 1e-12)) {
                ++bad;
            }
        }
        out << (bad == 0 ? "[ok] " : "[FAIL] ") << "recursive/iterative quantization: "
            << (trials - bad) << "/" << trials << " instances within 1e-12\n";
        failures += bad != 0;
    }

    {
        int bad = 0;
        const int trials = 60;
        for (int t = 0; t < trials; ++t) {
            const IndexSpec spec = random_shape(rng, 4, 4096);
            std::vector<double> data(spec.element_count());
            for (double& x : data) {
                x = value(rng);
            }
            MultiArray array(spec, std::move(data));
            WindowSpec window;
            window.starts.resize(spec.rank());
            window.lengths.resize(spec.rank());
            for (std::size_t i = 0; i < spec.rank(); ++i) {
                window.lengths[i] = 1 + rng() % spec.size(i);
                window.starts[i] = rng() % (spec.size(i) - window.lengths[i] + 1);
            }
            const ArrayView view = array.subwindow(window);
            MultiArray dense(IndexSpec::dense(window.lengths), view.materialize());
            std::vector<QuantizingFunction> functions;
            for (std::size_t i = 0; i < spec.rank(); ++i) {
                functions.push_back(random_reducer(rng, window.lengths[i]));
            }
            const double embedded = quantize(view, functions);
            const double standalone = quantize(dense.full_view(), functions);
            if (std::abs(embedded - standalone) > 1e-12 * std::max(1.0, std::abs(standalone))) {
                ++bad;
            }
        }
        out << (bad == 0 ? "[ok] " : "[FAIL] ") << "embedded window vs materialized sub-array: "
            << (trials - bad) << "/" << trials << " windows within 1e-12\n";
        failures += bad != 0;
    }

    {
        int bad = 0;
        const int trials = 60;
        const InterpKind kinds[] = {InterpKind::linear, InterpKind::polynomial,
                                    InterpKind::rational};
        for (int t = 0; t < trials; ++t) {
            const std::size_t dim = 2 + rng() % 3;
            std::vector<std::vector<double>> axes(dim);
            std::vector<Interpolator1D> interps(dim);
            std::vector<double> query(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                const std::size_t size = 4 + rng() % 5;
                axes[i].resize(size);
                double knot = -2.0 + value(rng);
                for (std::size_t k = 0; k < size; ++k) {
                    axes[i][k] = knot;
                    knot += 0.5 + 0.5 * std::abs(value(rng));
                }
                const InterpKind kind = kinds[rng() % 3];
                const std::size_t order =
                    kind == InterpKind::linear ? 2 : 2 + rng() % std::min<std::size_t>(3, size - 1);
                interps[i] = {kind, order};
                query[i] = axes[i].front() +
                           (axes[i].back() - axes[i].front()) * (0.5 + 0.45 * value(rng));
            }
            const Grid grid = build_grid(Mesh(axes), random_field(rng, dim));
            GridInterpolator context(grid, interps);
            const double recursive = context.recursive(query);
            const double iterative = context.iterative(query);
            if (std::abs(recursive - iterative) > 1e-10 * std::max(1.0, std::abs(iterative))) {
                ++bad;
            }
        }
        out << (bad == 0 ? "[ok] " : "[FAIL] ")
            << "recursive/iterative grid interpolation: " << (trials - bad) << "/" << trials
            << " queries within 1e-10\n";
        failures += bad != 0;
    }

    {
        int bad = 0;
        for (std::size_t dim : {2, 3, 4, 6}) {
            const std::size_t size = 5;
            const std::size_t order = 4;
            std::vector<std::vector<double>> axes(dim);
            std::vector<double> query(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                axes[i].resize(size);
                for (std::size_t k = 0; k < size; ++k) {
                    axes[i][k] = static_cast<double>(k);
                }
                query[i] = 1.7;
            }
            const Grid grid = build_grid(Mesh(axes), random_field(rng, dim));
            GridInterpolator context(grid,
                                     std::vector<Interpolator1D>(dim, {InterpKind::polynomial, order}));
            context.recursive(query);
            std::size_t expected_product = 1;
            for (std::size_t i = 0; i < dim; ++i) {
                if (context.counters().prepares[i] != 1) {
                    ++bad;
                }
            }
            context.iterative(query);
            for (std::size_t i = 0; i < dim; ++i) {
                if (context.counters().prepares[i] != expected_product) {
                    ++bad;
                }
                expected_product *= order;
            }
        }
        out << (bad == 0 ? "[ok] " : "[FAIL] ")
            << "stage preparation counters: recursive prepares once per dimension, baseline "
               "once per stage tuple\n";
        failures += bad != 0;
    }

    return failures;
}

}  // namespace mcube
