#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mcube/error.hpp"
#include "mcube/quantize.hpp"

using namespace mcube;

namespace {

// Independent oracle: collapse a flat lexicographic value block dimension by
// dimension with plain nested loops, no views, no shared engine code.
double fold_oracle(std::vector<double> values, std::vector<std::size_t> shape,
                   std::span<const QuantizingFunction> functions) {
    while (!shape.empty()) {
        const std::size_t width = shape.back();
        std::vector<double> folded(values.size() / width);
        for (std::size_t row = 0; row < folded.size(); ++row) {
            folded[row] = functions[shape.size() - 1](
                std::span<const double>(values.data() + row * width, width));
        }
        values = std::move(folded);
        shape.pop_back();
    }
    return values.front();
}

MultiArray random_array(std::mt19937_64& rng, std::size_t max_rank, std::size_t max_elements) {
    const std::size_t rank = 1 + rng() % max_rank;
    std::vector<std::size_t> sizes(rank);
    std::size_t count = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        sizes[i] = 1 + rng() % 8;
        while (count * sizes[i] > max_elements) {
            sizes[i] = std::max<std::size_t>(1, sizes[i] / 2);
        }
        count *= sizes[i];
    }
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::vector<double> data(count);
    for (double& x : data) {
        x = value(rng);
    }
    return MultiArray(IndexSpec::dense(sizes), std::move(data));
}

std::vector<QuantizingFunction> random_functions(std::mt19937_64& rng, const IndexSpec& spec) {
    std::vector<QuantizingFunction> functions;
    for (std::size_t i = 0; i < spec.rank(); ++i) {
        const std::size_t order = spec.size(i);
        switch (rng() % 5) {
            case 0:
                functions.push_back(make_sum(order));
                break;
            case 1:
                functions.push_back(make_mean(order));
                break;
            case 2:
                functions.push_back(make_max(order));
                break;
            case 3:
                functions.push_back(make_min(order));
                break;
            default: {
                std::uniform_real_distribution<double> coeff(-1.0, 1.0);
                std::vector<double> weights(order);
                for (double& w : weights) {
                    w = coeff(rng);
                }
                functions.push_back(make_weighted_sum(std::move(weights)));
            }
        }
    }
    return functions;
}

}  // namespace

TEST_CASE("two-level folds") {
    const MultiArray array(IndexSpec::dense({2, 2}), {1, 2, 3, 4});
    {
        const std::vector<QuantizingFunction> functions{make_sum(2), make_sum(2)};
        CHECK(quantize(array.full_view(), functions) == 10.0);
        CHECK(quantize_iterative(array.full_view(), functions) == 10.0);
    }
    {
        // Outer max over inner row sums.
        const std::vector<QuantizingFunction> functions{make_max(2), make_sum(2)};
        const double expected = fold_oracle({1, 2, 3, 4}, {2, 2}, functions);
        CHECK(expected == 7.0);
        CHECK(quantize(array.full_view(), functions) == expected);
        CHECK(quantize_iterative(array.full_view(), functions) == expected);
    }
}

TEST_CASE("terminal case applies the converter") {
    const MultiArray array(IndexSpec::dense({3}), {5, 6, 7});
    const std::vector<QuantizingFunction> functions{make_mean(3)};
    const Converter doubler = [](double x) { return 2.0 * x; };
    CHECK(quantize(array.full_view(), functions, doubler) == 12.0);
    CHECK(quantize_iterative(array.full_view(), functions, doubler) == 12.0);
}

TEST_CASE("shape mismatches are rejected") {
    const MultiArray array(IndexSpec::dense({2, 3}), std::vector<double>(6, 1.0));
    const std::vector<QuantizingFunction> wrong_order{make_sum(2), make_sum(2)};
    CHECK_THROWS_AS(quantize(array.full_view(), wrong_order), std::invalid_argument);
    CHECK_THROWS_AS(quantize_iterative(array.full_view(), wrong_order), std::invalid_argument);

    const std::vector<QuantizingFunction> wrong_count{make_sum(2)};
    CHECK_THROWS_AS(quantize(array.full_view(), wrong_count), std::invalid_argument);

    const QuantizingFunction sum2 = make_sum(2);
    CHECK_THROWS_AS(sum2(std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("non-finite intermediates name the dimension") {
    const MultiArray array(IndexSpec::dense({2, 2}), {1, 2, 3, 4});
    const std::vector<QuantizingFunction> functions{
        make_sum(2), {2, [](std::span<const double>) { return NAN; }}};
    CHECK_THROWS_WITH_AS(quantize(array.full_view(), functions),
                         doctest::Contains("dimension 2"), nonfinite_error);

    const Converter bad = [](double) { return INFINITY; };
    const std::vector<QuantizingFunction> sums{make_sum(2), make_sum(2)};
    CHECK_THROWS_AS(quantize(array.full_view(), sums, bad), nonfinite_error);
}

TEST_CASE("recursive path matches the brute-force oracle") {
    std::mt19937_64 rng(9001);
    for (int trial = 0; trial < 50; ++trial) {
        const MultiArray array = random_array(rng, 4, 2048);
        const std::vector<QuantizingFunction> functions = random_functions(rng, array.spec());
        const double expected = fold_oracle({array.data().begin(), array.data().end()},
                                            array.spec().sizes(), functions);
        const double actual = quantize(array.full_view(), functions);
        CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("recursive and iterative paths agree within 1e-12") {
    std::mt19937_64 rng(9002);
    for (int trial = 0; trial < 120; ++trial) {
        const MultiArray array = random_array(rng, 4, 4096);
        const std::vector<QuantizingFunction> functions = random_functions(rng, array.spec());
        CHECK(quantize_equivalence_check(array, functions, {}, 1e-12));
    }
    // Mismatched orders are a precondition error, not a false verdict.
    const MultiArray array(IndexSpec::dense({3, 2}), std::vector<double>(6, 0.5));
    const std::vector<QuantizingFunction> wrong{make_sum(2), make_sum(3)};
    CHECK_THROWS_AS(quantize_equivalence_check(array, wrong, {}, 1e-12), std::invalid_argument);
}

TEST_CASE("identical addressed sequences quantize identically") {
    std::mt19937_64 rng(9003);
    for (int trial = 0; trial < 30; ++trial) {
        const MultiArray parent = random_array(rng, 3, 2048);
        WindowSpec window;
        window.starts.resize(parent.spec().rank());
        window.lengths.resize(parent.spec().rank());
        for (std::size_t i = 0; i < parent.spec().rank(); ++i) {
            window.lengths[i] = 1 + rng() % parent.spec().size(i);
            window.starts[i] = rng() % (parent.spec().size(i) - window.lengths[i] + 1);
        }
        const ArrayView embedded = parent.subwindow(window);
        const MultiArray standalone(IndexSpec::dense(window.lengths), embedded.materialize());

        std::vector<QuantizingFunction> functions;
        for (std::size_t len : window.lengths) {
            functions.push_back(make_mean(len));
        }
        // Same data-set, same functions: bit-identical results, window or not.
        CHECK(quantize(embedded, functions) == quantize(standalone.full_view(), functions));
    }
}

TEST_CASE("evaluation counts per dimension") {
    const MultiArray array(IndexSpec::dense({3, 4, 2}), std::vector<double>(24, 1.0));
    std::vector<std::size_t> calls(3, 0);
    std::vector<QuantizingFunction> functions;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t order = array.spec().size(i);
        functions.push_back({order, [&calls, i](std::span<const double> v) {
                                 ++calls[i];
                                 double acc = 0;
                                 for (double x : v) {
                                     acc += x;
                                 }
                                 return acc;
                             }});
    }
    quantize(array.full_view(), functions);
    CHECK(calls == std::vector<std::size_t>{1, 3, 12});
}

TEST_CASE("workspace reuse does not change results") {
    std::mt19937_64 rng(9004);
    QuantizeWorkspace workspace;
    for (int trial = 0; trial < 10; ++trial) {
        const MultiArray array = random_array(rng, 4, 1024);
        const std::vector<QuantizingFunction> functions = random_functions(rng, array.spec());
        const double fresh = quantize(array.full_view(), functions);
        const double reused = quantize(array.full_view(), functions, {}, &workspace);
        CHECK(fresh == reused);
    }
}
