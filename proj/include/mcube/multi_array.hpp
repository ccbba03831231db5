#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "mcube/indexing.hpp"

namespace mcube {

struct ViewDim {
    std::size_t length = 0;
    std::size_t stride = 0;

    friend bool operator==(const ViewDim&, const ViewDim&) = default;
};

// Base offset plus per-dimension (length, stride) descriptor over a parent
// array's flat storage. A view never owns or copies data; copying the
// descriptor is trivial. Every addressed offset is bounds-checked against
// the parent at construction.
class ArrayView {
public:
    ArrayView(std::span<const double> parent, std::size_t base, std::vector<ViewDim> dims);

    std::size_t rank() const noexcept { return dims_.size(); }
    std::size_t base() const noexcept { return base_; }
    const std::vector<ViewDim>& dims() const noexcept { return dims_; }
    std::size_t length(std::size_t dim) const { return dims_[dim].length; }
    std::size_t stride(std::size_t dim) const { return dims_[dim].stride; }
    std::size_t element_count() const noexcept;

    // Pointer to the view's first element.
    const double* origin() const noexcept { return parent_.data() + base_; }

    // Element at zero-based per-dimension positions.
    double at(std::span<const std::size_t> position) const;

    // Copy of the addressed values in lexicographic view order.
    std::vector<double> materialize() const;

private:
    std::span<const double> parent_;
    std::size_t base_;
    std::vector<ViewDim> dims_;
};

// Zero-based axis start positions and window lengths of an embedded
// sub-window; start_i + length_i must not exceed the parent size.
struct WindowSpec {
    std::vector<std::size_t> starts;
    std::vector<std::size_t> lengths;
};

// Contiguous lexicographic storage of an N-dimensional scalar array.
// Immutable after construction and freely shareable across threads.
class MultiArray {
public:
    MultiArray(IndexSpec spec, std::vector<double> data);

    // Fills storage in lexicographic order, calling eval at every valid
    // multi-index (coordinates are the shifted s_i+1 .. s_i+S_i values).
    // A non-finite result raises nonfinite_error naming the index.
    static MultiArray from_function(
        IndexSpec spec, const std::function<double(std::span<const std::int64_t>)>& eval);

    const IndexSpec& spec() const noexcept { return spec_; }
    const CartesianStrides& strides() const noexcept { return strides_; }
    std::span<const double> data() const noexcept { return data_; }

    double get(std::span<const std::int64_t> index) const;

    // View of the whole array: base 0, dims (S_i, CS_i).
    ArrayView full_view() const;

    // View of an embedded sub-window. Parent strides are retained, so the
    // view is generally non-contiguous in flat storage.
    ArrayView subwindow(const WindowSpec& window) const;

    // Binary format, little-endian: magic "MCUB", version byte 0x01,
    // u32 N, N x (u32 size, i64 offset), then element_count float64 values
    // in lexicographic order. Round-trips are bit-exact.
    void save(std::ostream& out) const;
    static MultiArray load(std::istream& in);

private:
    IndexSpec spec_;
    CartesianStrides strides_;
    std::vector<double> data_;
};

}  // namespace mcube
