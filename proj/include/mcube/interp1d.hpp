#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mcube/quantize.hpp"

namespace mcube {

enum class InterpKind { linear, polynomial, rational };

InterpKind parse_kind(std::string_view name);
std::string_view kind_name(InterpKind kind);

// A one-dimensional interpolation algorithm and the number of knots it
// consumes. Linear always consumes exactly two.
struct Interpolator1D {
    InterpKind kind = InterpKind::linear;
    std::size_t order = 2;
};

// One interpolation stage with its constant arguments preprocessed: every
// quantity derivable from (knots, x) alone is computed in reset(), so
// quantize() is a pure function of the values it is handed. The polynomial
// kind folds Neville's tableau with precomputed combination coefficients;
// the rational kind runs the diagonal rational recurrence over precomputed
// knot-abscissa differences, raising pole_error when a tableau denominator
// falls below 1e-300. A query landing exactly on a knot short-circuits to
// that knot's value for every kind.
//
// Stages carry mutable counters and scratch, so one stage serves one call
// at a time; independent stages may run concurrently.
class PreparedStage {
public:
    PreparedStage() = default;
    PreparedStage(const Interpolator1D& interpolator, std::span<const double> knots, double x);

    // Re-prepares in place, reusing buffer capacity. Counters restart at
    // prepare_count == 1, quantize_count == 0.
    void reset(const Interpolator1D& interpolator, std::span<const double> knots, double x);

    // Interpolated estimate at the prepared abscissa from exactly order()
    // values, one per knot.
    double quantize(std::span<const double> values);

    InterpKind kind() const noexcept { return interpolator_.kind; }
    std::size_t order() const noexcept { return interpolator_.order; }
    double abscissa() const noexcept { return x_; }
    std::span<const double> knots() const noexcept { return knots_; }

    std::size_t prepare_count() const noexcept { return prepare_count_; }
    std::size_t quantize_count() const noexcept { return quantize_count_; }

    // Values-only view of this stage. The stage must outlive the returned
    // function; calls delegate to quantize() and bump quantize_count.
    QuantizingFunction as_quantizing_function();

private:
    double quantize_linear(std::span<const double> values);
    double quantize_polynomial(std::span<const double> values);
    double quantize_rational(std::span<const double> values);

    Interpolator1D interpolator_{};
    double x_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> coefficients_;  // linear: {t}; polynomial: Neville triangle
    std::vector<double> diffs_;         // rational: knots[i] - x
    std::vector<double> work_;
    std::ptrdiff_t exact_knot_ = -1;
    std::size_t nearest_ = 0;
    std::size_t prepare_count_ = 0;
    std::size_t quantize_count_ = 0;
};

PreparedStage prepare(const Interpolator1D& interpolator, std::span<const double> knots, double x);
double stage_quantize(PreparedStage& stage, std::span<const double> values);
QuantizingFunction as_quantizing_function(PreparedStage& stage);

}  // namespace mcube
