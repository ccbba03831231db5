#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "mcube/error.hpp"
#include "mcube/multi_array.hpp"

using namespace mcube;

namespace {

MultiArray random_array(std::mt19937_64& rng, std::size_t max_rank, std::size_t max_elements) {
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
        offsets[i] = static_cast<std::int64_t>(rng() % 31) - 15;
    }
    std::uniform_real_distribution<double> value(-1e3, 1e3);
    std::vector<double> data(count);
    for (double& x : data) {
        x = value(rng);
    }
    return MultiArray(IndexSpec(std::move(sizes), std::move(offsets)), std::move(data));
}

std::vector<double> to_vec(std::span<const double> values) {
    return {values.begin(), values.end()};
}

}  // namespace

TEST_CASE("from_function fills lexicographically") {
    const MultiArray a = MultiArray::from_function(
        IndexSpec::dense({2, 2}),
        [](std::span<const std::int64_t> idx) { return double(10 * idx[0] + idx[1]); });
    CHECK(to_vec(a.data()) == std::vector<double>{11, 12, 21, 22});

    const MultiArray b = MultiArray::from_function(IndexSpec::dense({3}),
                                                   [](std::span<const std::int64_t>) { return 0.0; });
    CHECK(to_vec(b.data()) == std::vector<double>{0, 0, 0});

    const MultiArray c = MultiArray::from_function(
        IndexSpec::dense({2, 3}),
        [](std::span<const std::int64_t> idx) { return double(idx[0] * idx[1]); });
    CHECK(to_vec(c.data()) == std::vector<double>{1, 2, 3, 2, 4, 6});

    CHECK_THROWS_AS(MultiArray::from_function(
                        IndexSpec::dense({2, 2}),
                        [](std::span<const std::int64_t> idx) {
                            return idx[0] == 2 && idx[1] == 1 ? NAN : 1.0;
                        }),
                    nonfinite_error);
}

TEST_CASE("get respects shifted coordinates") {
    const MultiArray a = MultiArray::from_function(
        IndexSpec::dense({2, 3}),
        [](std::span<const std::int64_t> idx) { return double(idx[0] * idx[1]); });
    CHECK(a.get(std::vector<std::int64_t>{2, 3}) == 6);

    const MultiArray b = MultiArray::from_function(
        IndexSpec::dense({2, 2}),
        [](std::span<const std::int64_t> idx) { return double(10 * idx[0] + idx[1]); });
    CHECK(b.get(std::vector<std::int64_t>{1, 2}) == 12);

    const MultiArray shifted(IndexSpec({2}, {9}), {5, 7});
    CHECK(shifted.get(std::vector<std::int64_t>{10}) == 5);
    CHECK_THROWS_AS(shifted.get(std::vector<std::int64_t>{9}), std::out_of_range);
}

TEST_CASE("full view carries cartesian strides") {
    const MultiArray a(IndexSpec::dense({3, 4}), std::vector<double>(12, 0.0));
    const ArrayView va = a.full_view();
    CHECK(va.base() == 0);
    CHECK(va.dims() == std::vector<ViewDim>{{3, 4}, {4, 1}});

    const MultiArray b(IndexSpec::dense({7}), std::vector<double>(7, 0.0));
    CHECK(b.full_view().dims() == std::vector<ViewDim>{{7, 1}});

    const MultiArray c(IndexSpec::dense({2, 5, 3}), std::vector<double>(30, 0.0));
    CHECK(c.full_view().dims() == std::vector<ViewDim>{{2, 15}, {5, 3}, {3, 1}});
}

TEST_CASE("subwindow keeps parent strides") {
    const MultiArray a(IndexSpec::dense({4, 4}), std::vector<double>(16, 0.0));
    const ArrayView view = a.subwindow({{1, 1}, {2, 2}});
    CHECK(view.base() == 5);
    CHECK(view.dims() == std::vector<ViewDim>{{2, 4}, {2, 1}});

    const ArrayView identity = a.subwindow({{0, 0}, {4, 4}});
    CHECK(identity.base() == a.full_view().base());
    CHECK(identity.dims() == a.full_view().dims());

    std::vector<double> counted(9);
    for (std::size_t i = 0; i < counted.size(); ++i) {
        counted[i] = double(i);
    }
    const MultiArray b(IndexSpec::dense({3, 3}), counted);
    CHECK(b.subwindow({{1, 0}, {2, 2}}).materialize() == std::vector<double>{3, 4, 6, 7});

    CHECK_THROWS_AS(a.subwindow({{3, 0}, {2, 4}}), std::out_of_range);
}

TEST_CASE("view addresses match coordinate arithmetic on random windows") {
    std::mt19937_64 rng(8101);
    for (int trial = 0; trial < 40; ++trial) {
        const MultiArray array = random_array(rng, 4, 4096);
        const IndexSpec& spec = array.spec();
        WindowSpec window;
        window.starts.resize(spec.rank());
        window.lengths.resize(spec.rank());
        for (std::size_t i = 0; i < spec.rank(); ++i) {
            window.lengths[i] = 1 + rng() % spec.size(i);
            window.starts[i] = rng() % (spec.size(i) - window.lengths[i] + 1);
        }
        const ArrayView view = array.subwindow(window);

        // Oracle: walk the window by coordinates and read through get().
        std::vector<double> expected;
        std::vector<std::size_t> pos(spec.rank(), 0);
        for (;;) {
            MultiIndex index(spec.rank());
            for (std::size_t i = 0; i < spec.rank(); ++i) {
                index[i] = spec.offset(i) + 1 +
                           static_cast<std::int64_t>(window.starts[i] + pos[i]);
            }
            expected.push_back(array.get(index));
            std::size_t dim = spec.rank();
            while (dim > 0 && ++pos[dim - 1] >= window.lengths[dim - 1]) {
                pos[dim - 1] = 0;
                --dim;
            }
            if (dim == 0) {
                break;
            }
        }
        CHECK(view.materialize() == expected);
    }
}

TEST_CASE("window of a window composes") {
    std::mt19937_64 rng(8102);
    for (int trial = 0; trial < 25; ++trial) {
        const MultiArray array = random_array(rng, 3, 2048);
        const IndexSpec& spec = array.spec();
        WindowSpec outer, inner, composed;
        outer.starts.resize(spec.rank());
        outer.lengths.resize(spec.rank());
        inner.starts.resize(spec.rank());
        inner.lengths.resize(spec.rank());
        composed.starts.resize(spec.rank());
        composed.lengths.resize(spec.rank());
        for (std::size_t i = 0; i < spec.rank(); ++i) {
            outer.lengths[i] = 1 + rng() % spec.size(i);
            outer.starts[i] = rng() % (spec.size(i) - outer.lengths[i] + 1);
            inner.lengths[i] = 1 + rng() % outer.lengths[i];
            inner.starts[i] = rng() % (outer.lengths[i] - inner.lengths[i] + 1);
            composed.starts[i] = outer.starts[i] + inner.starts[i];
            composed.lengths[i] = inner.lengths[i];
        }
        // The inner window of the materialized outer window equals the
        // composed window of the parent.
        const MultiArray outer_copy(IndexSpec::dense(outer.lengths),
                                    array.subwindow(outer).materialize());
        CHECK(outer_copy.subwindow(inner).materialize() ==
              array.subwindow(composed).materialize());
    }
}

TEST_CASE("projection windows are contiguous") {
    std::mt19937_64 rng(8103);
    for (int trial = 0; trial < 10; ++trial) {
        const MultiArray array = random_array(rng, 3, 1000);
        const IndexSpec& spec = array.spec();
        // Fix the first coordinate, span the rest: one contiguous run.
        WindowSpec window;
        window.starts.assign(spec.rank(), 0);
        window.lengths = spec.sizes();
        window.starts[0] = spec.size(0) / 2;
        window.lengths[0] = 1;
        const ArrayView view = array.subwindow(window);
        const std::size_t run = view.element_count();
        const std::vector<double> flat = view.materialize();
        const CartesianStrides strides(spec);
        const Extent extent = projection_extent(
            spec, strides,
            std::vector<std::int64_t>{spec.offset(0) + 1 +
                                      static_cast<std::int64_t>(window.starts[0])});
        CHECK(view.base() == extent.start);
        CHECK(run == extent.length);
        for (std::size_t k = 0; k < run; ++k) {
            CHECK(flat[k] == array.data()[view.base() + k]);
        }
    }
}

TEST_CASE("binary round-trip is bit-exact") {
    std::mt19937_64 rng(8104);
    for (int trial = 0; trial < 10; ++trial) {
        const MultiArray array = random_array(rng, 4, 2048);
        std::stringstream buffer;
        array.save(buffer);
        const MultiArray loaded = MultiArray::load(buffer);
        CHECK(loaded.spec() == array.spec());
        REQUIRE(loaded.data().size() == array.data().size());
        for (std::size_t i = 0; i < array.data().size(); ++i) {
            CHECK(std::bit_cast<std::uint64_t>(loaded.data()[i]) ==
                  std::bit_cast<std::uint64_t>(array.data()[i]));
        }
    }
}

TEST_CASE("load rejects malformed payloads") {
    const MultiArray array(IndexSpec::dense({2, 2}), {1, 2, 3, 4});
    std::stringstream buffer;
    array.save(buffer);
    const std::string bytes = buffer.str();

    {
        std::stringstream bad("XCUB" + bytes.substr(4));
        CHECK_THROWS_WITH_AS(MultiArray::load(bad), doctest::Contains("bad magic"), io_error);
    }
    {
        std::stringstream truncated(bytes.substr(0, bytes.size() - 9));
        CHECK_THROWS_WITH_AS(MultiArray::load(truncated),
                             doctest::Contains("truncated data section"), io_error);
    }
    {
        // Declared shape wants 4 values; payload carries 3.
        std::stringstream short_payload(bytes.substr(0, bytes.size() - 8));
        CHECK_THROWS_AS(MultiArray::load(short_payload), io_error);
    }
    {
        std::stringstream empty("");
        CHECK_THROWS_AS(MultiArray::load(empty), io_error);
    }
}
