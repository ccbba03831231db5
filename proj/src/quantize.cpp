#include "mcube/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mcube/error.hpp"

namespace mcube {

namespace {

constexpr std::size_t kMaxRank = 32;

void check_shapes(const ArrayView& view, std::span<const QuantizingFunction> functions) {
    if (view.rank() > kMaxRank) {
        throw std::invalid_argument("quantize: rank exceeds supported maximum of 32");
    }
    if (functions.size() != view.rank()) {
        throw std::invalid_argument("quantize: expected one quantizing function per dimension");
    }
    for (std::size_t i = 0; i < view.rank(); ++i) {
        if (functions[i].order != view.length(i)) {
            throw std::invalid_argument("quantize: function order " +
                                        std::to_string(functions[i].order) +
                                        " does not match view length " +
                                        std::to_string(view.length(i)) + " in dimension " +
                                        std::to_string(i + 1));
        }
    }
}

double check_finite(double value, std::size_t dim) {
    if (!std::isfinite(value)) {
        throw nonfinite_error("quantize: non-finite intermediate in dimension " +
                              std::to_string(dim));
    }
    return value;
}

struct Recursion {
    const double* data;
    const ArrayView& view;
    std::span<const QuantizingFunction> functions;
    const Converter& convert;
    QuantizeWorkspace& workspace;

    double run(std::size_t depth, std::size_t offset) const {
        std::span<double> values = workspace.level(depth);
        const std::size_t stride = view.stride(depth);
        if (depth + 1 == view.rank()) {
            if (convert) {
                for (std::size_t t = 0; t < values.size(); ++t) {
                    values[t] = check_finite(convert(data[offset + t * stride]), depth + 1);
                }
            } else {
                for (std::size_t t = 0; t < values.size(); ++t) {
                    values[t] = data[offset + t * stride];
                }
            }
        } else {
            for (std::size_t t = 0; t < values.size(); ++t) {
                values[t] = run(depth + 1, offset + t * stride);
            }
        }
        return check_finite(functions[depth](values), depth + 1);
    }
};

}  // namespace

double QuantizingFunction::operator()(std::span<const double> values) const {
    if (values.size() != order) {
        throw std::invalid_argument("QuantizingFunction: expected " + std::to_string(order) +
                                    " values, got " + std::to_string(values.size()));
    }
    return evaluate(values);
}

QuantizingFunction make_sum(std::size_t order) {
    return {order, [](std::span<const double> v) {
                double acc = 0.0;
                for (double x : v) {
                    acc += x;
                }
                return acc;
            }};
}

QuantizingFunction make_mean(std::size_t order) {
    return {order, [](std::span<const double> v) {
                double acc = 0.0;
                for (double x : v) {
                    acc += x;
                }
                return acc / static_cast<double>(v.size());
            }};
}

QuantizingFunction make_max(std::size_t order) {
    return {order, [](std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }};
}

QuantizingFunction make_min(std::size_t order) {
    return {order, [](std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }};
}

QuantizingFunction make_weighted_sum(std::vector<double> weights) {
    const std::size_t order = weights.size();
    return {order, [w = std::move(weights)](std::span<const double> v) {
                double acc = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    acc += w[i] * v[i];
                }
                return acc;
            }};
}

void QuantizeWorkspace::fit(std::span<const QuantizingFunction> functions) {
    levels_.resize(functions.size());
    for (std::size_t i = 0; i < functions.size(); ++i) {
        levels_[i].resize(functions[i].order);
    }
}

double quantize(const ArrayView& view, std::span<const QuantizingFunction> functions,
                const Converter& convert, QuantizeWorkspace* workspace) {
    check_shapes(view, functions);
    QuantizeWorkspace local;
    QuantizeWorkspace& scratch = workspace ? *workspace : local;
    scratch.fit(functions);
    Recursion recursion{view.origin(), view, functions, convert, scratch};
    return recursion.run(0, 0);
}

double quantize_iterative(const ArrayView& view, std::span<const QuantizingFunction> functions,
                          const Converter& convert) {
    check_shapes(view, functions);

    std::vector<double> stage = view.materialize();
    if (convert) {
        for (double& value : stage) {
            value = check_finite(convert(value), view.rank());
        }
    }
    for (std::size_t depth = view.rank(); depth > 0; --depth) {
        const std::size_t width = view.length(depth - 1);
        const std::size_t rows = stage.size() / width;
        std::vector<double> next(rows);
        for (std::size_t row = 0; row < rows; ++row) {
            std::span<const double> values{stage.data() + row * width, width};
            next[row] = check_finite(functions[depth - 1](values), depth);
        }
        stage = std::move(next);
    }
    return stage.front();
}

bool quantize_equivalence_check(const MultiArray& array,
                                std::span<const QuantizingFunction> functions,
                                const Converter& convert, double rel_tol) {
    const ArrayView view = array.full_view();
    const double recursive = quantize(view, functions, convert);
    const double iterative = quantize_iterative(view, functions, convert);
    return std::abs(recursive - iterative) <= rel_tol * std::max(1.0, std::abs(iterative));
}

}  // namespace mcube
