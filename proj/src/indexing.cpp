#include "mcube/indexing.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace mcube {

IndexSpec::IndexSpec(std::vector<std::size_t> sizes, std::vector<std::int64_t> offsets)
    : sizes_(std::move(sizes)), offsets_(std::move(offsets)) {
    if (sizes_.empty()) {
        throw std::invalid_argument("IndexSpec: at least one dimension required");
    }
    if (sizes_.size() != offsets_.size()) {
        throw std::invalid_argument("IndexSpec: sizes and offsets must have equal length");
    }
    count_ = 1;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (sizes_[i] < 1) {
            throw std::invalid_argument("IndexSpec: size of dimension " + std::to_string(i + 1) +
                                        " must be at least 1");
        }
        if (__builtin_mul_overflow(count_, sizes_[i], &count_)) {
            throw std::invalid_argument("IndexSpec: element count overflows addressable range");
        }
    }
    if (count_ > std::numeric_limits<std::size_t>::max() / sizeof(double)) {
        throw std::invalid_argument("IndexSpec: element count overflows addressable range");
    }
}

IndexSpec IndexSpec::dense(std::vector<std::size_t> sizes) {
    std::vector<std::int64_t> offsets(sizes.size(), 0);
    return IndexSpec(std::move(sizes), std::move(offsets));
}

std::size_t IndexSpec::axis_position(std::size_t dim, std::int64_t coord) const {
    if (dim >= rank()) {
        throw std::out_of_range("IndexSpec: dimension index out of range");
    }
    const std::int64_t pos = coord - offsets_[dim] - 1;
    if (pos < 0 || static_cast<std::size_t>(pos) >= sizes_[dim]) {
        throw std::out_of_range("IndexSpec: coordinate " + std::to_string(coord) +
                                " outside dimension " + std::to_string(dim + 1));
    }
    return static_cast<std::size_t>(pos);
}

bool IndexSpec::contains(std::span<const std::int64_t> index) const noexcept {
    if (index.size() != rank()) {
        return false;
    }
    for (std::size_t i = 0; i < rank(); ++i) {
        const std::int64_t pos = index[i] - offsets_[i] - 1;
        if (pos < 0 || static_cast<std::size_t>(pos) >= sizes_[i]) {
            return false;
        }
    }
    return true;
}

CartesianStrides::CartesianStrides(const IndexSpec& spec) : strides_(spec.rank()) {
    const std::size_t n = spec.rank();
    strides_[n - 1] = 1;
    for (std::size_t i = n - 1; i > 0; --i) {
        strides_[i - 1] = spec.size(i) * strides_[i];
    }
}

CartesianStrides cartesian_strides(const IndexSpec& spec) {
    return CartesianStrides(spec);
}

std::size_t linear_offset(const IndexSpec& spec, const CartesianStrides& strides,
                          std::span<const std::int64_t> index) {
    if (index.size() != spec.rank()) {
        throw std::invalid_argument("linear_offset: index length does not match rank");
    }
    std::size_t offset = 0;
    for (std::size_t i = 0; i < spec.rank(); ++i) {
        offset += spec.axis_position(i, index[i]) * strides[i];
    }
    return offset;
}

Extent projection_extent(const IndexSpec& spec, const CartesianStrides& strides,
                         std::span<const std::int64_t> prefix) {
    if (prefix.size() > spec.rank()) {
        throw std::invalid_argument("projection_extent: prefix longer than rank");
    }
    std::size_t start = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        start += spec.axis_position(i, prefix[i]) * strides[i];
    }
    std::size_t length = 1;
    for (std::size_t i = prefix.size(); i < spec.rank(); ++i) {
        length *= spec.size(i);
    }
    return Extent{start, length};
}

}  // namespace mcube
