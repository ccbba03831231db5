#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "mcube/indexing.hpp"

using namespace mcube;

namespace {

// Every valid multi-index of a spec, in lexicographic order, by enumeration.
std::vector<MultiIndex> all_indices(const IndexSpec& spec) {
    std::vector<MultiIndex> out;
    MultiIndex index(spec.rank());
    for (std::size_t i = 0; i < spec.rank(); ++i) {
        index[i] = spec.offset(i) + 1;
    }
    for (;;) {
        out.push_back(index);
        std::size_t dim = spec.rank();
        while (dim > 0) {
            if (++index[dim - 1] <= spec.offset(dim - 1) + static_cast<std::int64_t>(spec.size(dim - 1))) {
                break;
            }
            index[dim - 1] = spec.offset(dim - 1) + 1;
            --dim;
        }
        if (dim == 0) {
            return out;
        }
    }
}

IndexSpec random_spec(std::mt19937_64& rng, std::size_t max_rank, std::size_t max_elements) {
    const std::size_t rank = 1 + rng() % max_rank;
    std::vector<std::size_t> sizes(rank);
    std::vector<std::int64_t> offsets(rank);
    std::size_t count = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        sizes[i] = 1 + rng() % 10;
        while (count * sizes[i] > max_elements) {
            sizes[i] = std::max<std::size_t>(1, sizes[i] / 2);
        }
        count *= sizes[i];
        offsets[i] = static_cast<std::int64_t>(rng() % 41) - 20;
    }
    return IndexSpec(std::move(sizes), std::move(offsets));
}

}  // namespace

TEST_CASE("IndexSpec construction and validation") {
    const IndexSpec spec({4, 3, 2}, {0, 0, 0});
    CHECK(spec.rank() == 3);
    CHECK(spec.element_count() == 24);

    const IndexSpec shifted({5}, {-2});
    CHECK(shifted.contains(std::vector<std::int64_t>{-1}));
    CHECK(shifted.contains(std::vector<std::int64_t>{3}));
    CHECK_FALSE(shifted.contains(std::vector<std::int64_t>{-2}));
    CHECK_FALSE(shifted.contains(std::vector<std::int64_t>{4}));

    CHECK_THROWS_AS(IndexSpec({4, 0}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(IndexSpec({4, 3}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(IndexSpec({}, {}), std::invalid_argument);
    // 2^32 * 2^32 overflows the addressable range on 64-bit.
    CHECK_THROWS_AS(IndexSpec({std::size_t{1} << 32, std::size_t{1} << 32}, {0, 0}),
                    std::invalid_argument);
}

TEST_CASE("cartesian strides") {
    CHECK(cartesian_strides(IndexSpec::dense({4, 3, 2})).values() ==
          std::vector<std::size_t>{6, 2, 1});
    CHECK(cartesian_strides(IndexSpec::dense({7})).values() == std::vector<std::size_t>{1});
    CHECK(cartesian_strides(IndexSpec::dense({2, 5, 3, 4})).values() ==
          std::vector<std::size_t>{60, 12, 4, 1});
}

TEST_CASE("linear offset") {
    const IndexSpec spec = IndexSpec::dense({3, 4});
    const CartesianStrides strides(spec);
    CHECK(linear_offset(spec, strides, std::vector<std::int64_t>{1, 1}) == 0);
    CHECK(linear_offset(spec, strides, std::vector<std::int64_t>{2, 3}) == 6);

    const IndexSpec shifted({3, 4}, {5, -1});
    const CartesianStrides shifted_strides(shifted);
    // Shift invariance: (7, 2) - (5, -1) = (2, 3), the unshifted case above.
    CHECK(linear_offset(shifted, shifted_strides, std::vector<std::int64_t>{7, 2}) == 6);
    CHECK(linear_offset(shifted, shifted_strides, std::vector<std::int64_t>{6, 2}) == 2);

    CHECK_THROWS_AS(linear_offset(spec, strides, std::vector<std::int64_t>{4, 1}),
                    std::out_of_range);
    CHECK_THROWS_AS(linear_offset(spec, strides, std::vector<std::int64_t>{1}),
                    std::invalid_argument);
}

TEST_CASE("projection extents") {
    {
        const IndexSpec spec = IndexSpec::dense({3, 4});
        const CartesianStrides strides(spec);
        CHECK(projection_extent(spec, strides, std::vector<std::int64_t>{2}) == Extent{4, 4});
        CHECK(projection_extent(spec, strides, std::vector<std::int64_t>{}) == Extent{0, 12});
    }
    {
        const IndexSpec spec = IndexSpec::dense({2, 3, 2});
        const CartesianStrides strides(spec);
        CHECK(projection_extent(spec, strides, std::vector<std::int64_t>{1, 3}) == Extent{4, 2});
        CHECK_THROWS_AS(projection_extent(spec, strides, std::vector<std::int64_t>{1, 3, 1, 1}),
                        std::invalid_argument);
        CHECK_THROWS_AS(projection_extent(spec, strides, std::vector<std::int64_t>{3}),
                        std::out_of_range);
    }
}

TEST_CASE("rank bijection over lexicographic enumeration") {
    std::mt19937_64 rng(7001);
    for (int trial = 0; trial < 25; ++trial) {
        const IndexSpec spec = random_spec(rng, 4, 10000);
        const CartesianStrides strides(spec);
        const std::vector<MultiIndex> indices = all_indices(spec);
        REQUIRE(indices.size() == spec.element_count());
        for (std::size_t rank = 0; rank < indices.size(); ++rank) {
            CHECK(linear_offset(spec, strides, indices[rank]) == rank);
        }
    }
}

TEST_CASE("shift invariance of linear offset") {
    std::mt19937_64 rng(7002);
    for (int trial = 0; trial < 25; ++trial) {
        const IndexSpec spec = random_spec(rng, 4, 4096);
        const IndexSpec unshifted = IndexSpec::dense(spec.sizes());
        const CartesianStrides strides(spec);
        for (const MultiIndex& index : all_indices(spec)) {
            MultiIndex reduced(index.size());
            for (std::size_t i = 0; i < index.size(); ++i) {
                reduced[i] = index[i] - spec.offset(i);
            }
            CHECK(linear_offset(spec, strides, index) ==
                  linear_offset(unshifted, strides, reduced));
        }
    }
}

TEST_CASE("projection extents partition the flat range at every depth") {
    std::mt19937_64 rng(7003);
    for (int trial = 0; trial < 25; ++trial) {
        const IndexSpec spec = random_spec(rng, 4, 10000);
        const CartesianStrides strides(spec);
        for (std::size_t depth = 0; depth <= spec.rank(); ++depth) {
            const IndexSpec prefix_spec(
                std::vector<std::size_t>(spec.sizes().begin(),
                                         spec.sizes().begin() + std::max<std::size_t>(depth, 1)),
                std::vector<std::int64_t>(spec.offsets().begin(),
                                          spec.offsets().begin() + std::max<std::size_t>(depth, 1)));
            std::vector<Extent> extents;
            if (depth == 0) {
                extents.push_back(projection_extent(spec, strides, {}));
            } else {
                for (const MultiIndex& prefix : all_indices(prefix_spec)) {
                    extents.push_back(projection_extent(spec, strides, prefix));
                }
            }
            std::sort(extents.begin(), extents.end(),
                      [](const Extent& a, const Extent& b) { return a.start < b.start; });
            std::size_t expected_start = 0;
            for (const Extent& extent : extents) {
                CHECK(extent.start == expected_start);  // disjoint and gap-free
                expected_start += extent.length;
            }
            CHECK(expected_start == spec.element_count());
        }
    }
}

TEST_CASE("each prefix has exactly the next dimension's size of children") {
    const IndexSpec spec({3, 4, 2}, {1, -2, 0});
    const CartesianStrides strides(spec);
    const Extent parent = projection_extent(spec, strides, std::vector<std::int64_t>{2, 0});
    std::size_t children = 0;
    std::size_t covered = 0;
    for (std::int64_t a = spec.offset(2) + 1; a <= spec.offset(2) + static_cast<std::int64_t>(spec.size(2)); ++a) {
        const Extent child = projection_extent(spec, strides, std::vector<std::int64_t>{2, 0, a});
        CHECK(child.start >= parent.start);
        CHECK(child.start + child.length <= parent.start + parent.length);
        covered += child.length;
        ++children;
    }
    CHECK(children == spec.size(2));
    CHECK(covered == parent.length);
}
