#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcube {

// A full N-dimensional coordinate tuple (a_1 .. a_N).
using MultiIndex = std::vector<std::int64_t>;

// Shape of an N-dimensional indexing set: per-dimension sizes S_i and index
// offsets s_i. Valid coordinates along dimension i run s_i+1 .. s_i+S_i, so
// coordinate a maps to zero-based axis position a - s_i - 1. Offsets shift
// coordinate validation only; they never affect storage layout.
class IndexSpec {
public:
    IndexSpec(std::vector<std::size_t> sizes, std::vector<std::int64_t> offsets);

    // All offsets zero: valid coordinates are 1 .. S_i.
    static IndexSpec dense(std::vector<std::size_t> sizes);

    std::size_t rank() const noexcept { return sizes_.size(); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    const std::vector<std::int64_t>& offsets() const noexcept { return offsets_; }
    std::size_t size(std::size_t dim) const { return sizes_[dim]; }
    std::int64_t offset(std::size_t dim) const { return offsets_[dim]; }

    // Product of all sizes; overflow is rejected at construction.
    std::size_t element_count() const noexcept { return count_; }

    // Zero-based axis position of coordinate `coord` along dimension `dim`.
    // Throws std::out_of_range when the coordinate is outside the dimension.
    std::size_t axis_position(std::size_t dim, std::int64_t coord) const;

    bool contains(std::span<const std::int64_t> index) const noexcept;

    friend bool operator==(const IndexSpec&, const IndexSpec&) = default;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::int64_t> offsets_;
    std::size_t count_ = 0;
};

// Cartesian strides of a shape: CS_N = 1 and CS_i = S_{i+1} * CS_{i+1}.
// These are the factors that turn a multi-index into its flat rank.
class CartesianStrides {
public:
    explicit CartesianStrides(const IndexSpec& spec);

    std::size_t rank() const noexcept { return strides_.size(); }
    std::size_t operator[](std::size_t dim) const { return strides_[dim]; }
    const std::vector<std::size_t>& values() const noexcept { return strides_; }

    friend bool operator==(const CartesianStrides&, const CartesianStrides&) = default;

private:
    std::vector<std::size_t> strides_;
};

CartesianStrides cartesian_strides(const IndexSpec& spec);

// Flat offset of a full multi-index: sum of (a_i - s_i - 1) * CS_i. This is
// the rank of the index in lexicographic order of the indexing set.
std::size_t linear_offset(const IndexSpec& spec, const CartesianStrides& strides,
                          std::span<const std::int64_t> index);

struct Extent {
    std::size_t start = 0;
    std::size_t length = 0;

    friend bool operator==(const Extent&, const Extent&) = default;
};

// Contiguous flat interval occupied by the projection that fixes the first
// prefix.size() coordinates: length is the product of the remaining sizes.
Extent projection_extent(const IndexSpec& spec, const CartesianStrides& strides,
                         std::span<const std::int64_t> prefix);

}  // namespace mcube
