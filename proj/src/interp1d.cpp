#include "mcube/interp1d.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mcube/error.hpp"

namespace mcube {

namespace {

constexpr double kPoleGuard = 1e-300;

void validate(const Interpolator1D& interpolator) {
    if (interpolator.order < 2) {
        throw std::invalid_argument("Interpolator1D: order must be at least 2");
    }
    if (interpolator.kind == InterpKind::linear && interpolator.order != 2) {
        throw std::invalid_argument("Interpolator1D: linear kind has order exactly 2");
    }
}

}  // namespace

InterpKind parse_kind(std::string_view name) {
    if (name == "linear") {
        return InterpKind::linear;
    }
    if (name == "polynomial") {
        return InterpKind::polynomial;
    }
    if (name == "rational") {
        return InterpKind::rational;
    }
    throw std::invalid_argument("unknown interpolation kind '" + std::string(name) + "'");
}

std::string_view kind_name(InterpKind kind) {
    switch (kind) {
        case InterpKind::linear:
            return "linear";
        case InterpKind::polynomial:
            return "polynomial";
        case InterpKind::rational:
            return "rational";
    }
    return "unknown";
}

PreparedStage::PreparedStage(const Interpolator1D& interpolator, std::span<const double> knots,
                             double x) {
    reset(interpolator, knots, x);
}

void PreparedStage::reset(const Interpolator1D& interpolator, std::span<const double> knots,
                          double x) {
    validate(interpolator);
    if (knots.size() != interpolator.order) {
        throw std::invalid_argument("prepare: expected " + std::to_string(interpolator.order) +
                                    " knots, got " + std::to_string(knots.size()));
    }
    if (!std::isfinite(x)) {
        throw std::invalid_argument("prepare: abscissa must be finite");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i - 1] < knots[i])) {
            throw std::invalid_argument("prepare: knots must be strictly increasing");
        }
    }

    interpolator_ = interpolator;
    x_ = x;
    knots_.assign(knots.begin(), knots.end());
    const std::size_t m = interpolator_.order;

    exact_knot_ = -1;
    for (std::size_t i = 0; i < m; ++i) {
        if (knots_[i] == x) {
            exact_knot_ = static_cast<std::ptrdiff_t>(i);
            break;
        }
    }

    coefficients_.clear();
    diffs_.clear();
    switch (interpolator_.kind) {
        case InterpKind::linear:
            coefficients_.push_back((x - knots_[0]) / (knots_[1] - knots_[0]));
            break;
        case InterpKind::polynomial:
            // Neville combination coefficients, one per tableau cell:
            // p[i] <- c * p[i] + (1 - c) * p[i + 1] for column j.
            coefficients_.reserve(m * (m - 1) / 2);
            for (std::size_t j = 1; j < m; ++j) {
                for (std::size_t i = 0; i + j < m; ++i) {
                    coefficients_.push_back((knots_[i + j] - x) / (knots_[i + j] - knots_[i]));
                }
            }
            work_.resize(m);
            break;
        case InterpKind::rational:
            diffs_.resize(m);
            nearest_ = 0;
            for (std::size_t i = 0; i < m; ++i) {
                diffs_[i] = knots_[i] - x;
                if (std::abs(diffs_[i]) < std::abs(diffs_[nearest_])) {
                    nearest_ = i;
                }
            }
            work_.resize(2 * m);
            break;
    }

    prepare_count_ = 1;
    quantize_count_ = 0;
}

double PreparedStage::quantize(std::span<const double> values) {
    if (values.size() != interpolator_.order) {
        throw std::invalid_argument("stage_quantize: expected " +
                                    std::to_string(interpolator_.order) + " values, got " +
                                    std::to_string(values.size()));
    }
    ++quantize_count_;
    if (exact_knot_ >= 0) {
        return values[static_cast<std::size_t>(exact_knot_)];
    }
    switch (interpolator_.kind) {
        case InterpKind::linear:
            return quantize_linear(values);
        case InterpKind::polynomial:
            return quantize_polynomial(values);
        case InterpKind::rational:
            return quantize_rational(values);
    }
    std::abort();
}

double PreparedStage::quantize_linear(std::span<const double> values) {
    const double t = coefficients_[0];
    return (1.0 - t) * values[0] + t * values[1];
}

double PreparedStage::quantize_polynomial(std::span<const double> values) {
    const std::size_t m = interpolator_.order;
    for (std::size_t i = 0; i < m; ++i) {
        work_[i] = values[i];
    }
    std::size_t cell = 0;
    for (std::size_t j = 1; j < m; ++j) {
        for (std::size_t i = 0; i + j < m; ++i) {
            const double c = coefficients_[cell++];
            work_[i] = c * work_[i] + (1.0 - c) * work_[i + 1];
        }
    }
    return work_[0];
}

double PreparedStage::quantize_rational(std::span<const double> values) {
    const std::size_t m = interpolator_.order;
    double* c = work_.data();
    double* d = work_.data() + m;
    for (std::size_t i = 0; i < m; ++i) {
        c[i] = values[i];
        d[i] = values[i];
    }

    std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(nearest_);
    double y = values[static_cast<std::size_t>(ns)];
    --ns;
    for (std::size_t col = 1; col < m; ++col) {
        for (std::size_t i = 0; i + col < m; ++i) {
            const double w = c[i + 1] - d[i];
            const double t = diffs_[i] * d[i] / diffs_[i + col];
            double dd = t - c[i + 1];
            if (std::abs(dd) < kPoleGuard) {
                throw pole_error(col, i,
                                 "rational interpolation pole at tableau cell (column " +
                                     std::to_string(col) + ", row " + std::to_string(i) + ")");
            }
            dd = w / dd;
            d[i] = c[i + 1] * dd;
            c[i] = t * dd;
        }
        if (2 * (ns + 1) < static_cast<std::ptrdiff_t>(m - col)) {
            y += c[ns + 1];
        } else {
            y += d[ns];
            --ns;
        }
    }
    return y;
}

QuantizingFunction PreparedStage::as_quantizing_function() {
    return {interpolator_.order,
            [this](std::span<const double> values) { return quantize(values); }};
}

PreparedStage prepare(const Interpolator1D& interpolator, std::span<const double> knots,
                      double x) {
    return PreparedStage(interpolator, knots, x);
}

double stage_quantize(PreparedStage& stage, std::span<const double> values) {
    return stage.quantize(values);
}

QuantizingFunction as_quantizing_function(PreparedStage& stage) {
    return stage.as_quantizing_function();
}

}  // namespace mcube
