#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mcube/multi_array.hpp"

namespace mcube {

// Pure map from an ordered list of exactly `order` scalars to one scalar.
struct QuantizingFunction {
    std::size_t order = 0;
    std::function<double(std::span<const double>)> evaluate;

    // Rejects value lists whose length differs from the declared order.
    double operator()(std::span<const double> values) const;
};

QuantizingFunction make_sum(std::size_t order);
QuantizingFunction make_mean(std::size_t order);
QuantizingFunction make_max(std::size_t order);
QuantizingFunction make_min(std::size_t order);
QuantizingFunction make_weighted_sum(std::vector<double> weights);

// Injective scalar map applied to raw data before the innermost quantizing
// function; an empty function means identity.
using Converter = std::function<double(double)>;

// One value buffer per recursion depth, reused across sibling sub-cubes so
// the recursion itself allocates nothing. A workspace belongs to a single
// in-flight call; independent calls need their own.
class QuantizeWorkspace {
public:
    void fit(std::span<const QuantizingFunction> functions);
    std::span<double> level(std::size_t depth) { return levels_[depth]; }

private:
    std::vector<std::vector<double>> levels_;
};

// Collapses an N-dimensional view to one scalar by applying functions[N-1]
// to converter-mapped raw values along the innermost dimension and each
// outer functions[i] to its children's results. functions[i].order must
// equal the view length in dimension i. Rank is capped at 32.
double quantize(const ArrayView& view, std::span<const QuantizingFunction> functions,
                const Converter& convert = {}, QuantizeWorkspace* workspace = nullptr);

// Stage-by-stage reference path: materializes every intermediate database
// explicitly, one per dimension, folding the innermost axis each stage.
// Agrees with quantize() up to floating-point reassociation.
double quantize_iterative(const ArrayView& view, std::span<const QuantizingFunction> functions,
                          const Converter& convert = {});

// True when the recursive and iterative paths agree on the full view of
// `array` within rel_tol * max(1, |iterative|).
bool quantize_equivalence_check(const MultiArray& array,
                                std::span<const QuantizingFunction> functions,
                                const Converter& convert, double rel_tol);

}  // namespace mcube
