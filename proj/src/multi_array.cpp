#include "mcube/multi_array.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mcube/error.hpp"

namespace mcube {

namespace {

std::string index_to_string(std::span<const std::int64_t> index) {
    std::string out = "(";
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += std::to_string(index[i]);
    }
    out += ")";
    return out;
}

// Advance a zero-based odometer over the given sizes; returns false on wrap.
bool advance_odometer(std::vector<std::size_t>& position, std::span<const std::size_t> sizes) {
    for (std::size_t i = position.size(); i > 0; --i) {
        if (++position[i - 1] < sizes[i - 1]) {
            return true;
        }
        position[i - 1] = 0;
    }
    return false;
}

void write_bytes(std::ostream& out, const unsigned char* bytes, std::size_t count) {
    out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(count));
}

void write_u32(std::ostream& out, std::uint32_t value) {
    unsigned char bytes[4];
    for (int i = 0; i < 4; ++i) {
        bytes[i] = static_cast<unsigned char>(value >> (8 * i));
    }
    write_bytes(out, bytes, 4);
}

void write_u64(std::ostream& out, std::uint64_t value) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>(value >> (8 * i));
    }
    write_bytes(out, bytes, 8);
}

bool read_exact(std::istream& in, unsigned char* bytes, std::size_t count) {
    in.read(reinterpret_cast<char*>(bytes), static_cast<std::streamsize>(count));
    return static_cast<std::size_t>(in.gcount()) == count;
}

std::uint32_t load_u32(const unsigned char* bytes) {
    std::uint32_t value = 0;
    for (int i = 3; i >= 0; --i) {
        value = (value << 8) | bytes[i];
    }
    return value;
}

std::uint64_t load_u64(const unsigned char* bytes) {
    std::uint64_t value = 0;
    for (int i = 7; i >= 0; --i) {
        value = (value << 8) | bytes[i];
    }
    return value;
}

constexpr char kMagic[4] = {'M', 'C', 'U', 'B'};
constexpr unsigned char kVersion = 0x01;
constexpr std::uint32_t kMaxRankOnDisk = 1024;

}  // namespace

ArrayView::ArrayView(std::span<const double> parent, std::size_t base, std::vector<ViewDim> dims)
    : parent_(parent), base_(base), dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw std::invalid_argument("ArrayView: at least one dimension required");
    }
    std::size_t last = base_;
    for (const ViewDim& dim : dims_) {
        if (dim.length < 1 || dim.stride < 1) {
            throw std::invalid_argument("ArrayView: dimension lengths and strides must be positive");
        }
        last += (dim.length - 1) * dim.stride;
    }
    if (base_ >= parent_.size() || last >= parent_.size()) {
        throw std::out_of_range("ArrayView: window exceeds parent storage");
    }
}

std::size_t ArrayView::element_count() const noexcept {
    std::size_t count = 1;
    for (const ViewDim& dim : dims_) {
        count *= dim.length;
    }
    return count;
}

double ArrayView::at(std::span<const std::size_t> position) const {
    if (position.size() != rank()) {
        throw std::invalid_argument("ArrayView: position length does not match rank");
    }
    std::size_t offset = base_;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (position[i] >= dims_[i].length) {
            throw std::out_of_range("ArrayView: position outside window");
        }
        offset += position[i] * dims_[i].stride;
    }
    return parent_[offset];
}

std::vector<double> ArrayView::materialize() const {
    std::vector<double> out;
    out.reserve(element_count());
    std::vector<std::size_t> position(rank(), 0);
    std::vector<std::size_t> lengths(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        lengths[i] = dims_[i].length;
    }
    do {
        std::size_t offset = base_;
        for (std::size_t i = 0; i < rank(); ++i) {
            offset += position[i] * dims_[i].stride;
        }
        out.push_back(parent_[offset]);
    } while (advance_odometer(position, lengths));
    return out;
}

MultiArray::MultiArray(IndexSpec spec, std::vector<double> data)
    : spec_(std::move(spec)), strides_(spec_), data_(std::move(data)) {
    if (data_.size() != spec_.element_count()) {
        throw std::invalid_argument("MultiArray: data length " + std::to_string(data_.size()) +
                                    " does not match element count " +
                                    std::to_string(spec_.element_count()));
    }
}

MultiArray MultiArray::from_function(
    IndexSpec spec, const std::function<double(std::span<const std::int64_t>)>& eval) {
    const std::size_t n = spec.rank();
    std::vector<double> data;
    data.reserve(spec.element_count());

    MultiIndex index(n);
    for (std::size_t i = 0; i < n; ++i) {
        index[i] = spec.offset(i) + 1;
    }
    std::vector<std::size_t> position(n, 0);
    do {
        for (std::size_t i = 0; i < n; ++i) {
            index[i] = spec.offset(i) + 1 + static_cast<std::int64_t>(position[i]);
        }
        const double value = eval(index);
        if (!std::isfinite(value)) {
            throw nonfinite_error("from_function: non-finite value at index " +
                                  index_to_string(index));
        }
        data.push_back(value);
    } while (advance_odometer(position, spec.sizes()));

    return MultiArray(std::move(spec), std::move(data));
}

double MultiArray::get(std::span<const std::int64_t> index) const {
    return data_[linear_offset(spec_, strides_, index)];
}

ArrayView MultiArray::full_view() const {
    std::vector<ViewDim> dims(spec_.rank());
    for (std::size_t i = 0; i < spec_.rank(); ++i) {
        dims[i] = ViewDim{spec_.size(i), strides_[i]};
    }
    return ArrayView(data_, 0, std::move(dims));
}

ArrayView MultiArray::subwindow(const WindowSpec& window) const {
    if (window.starts.size() != spec_.rank() || window.lengths.size() != spec_.rank()) {
        throw std::invalid_argument("subwindow: window rank does not match array rank");
    }
    std::size_t base = 0;
    std::vector<ViewDim> dims(spec_.rank());
    for (std::size_t i = 0; i < spec_.rank(); ++i) {
        if (window.lengths[i] < 1 || window.starts[i] + window.lengths[i] > spec_.size(i)) {
            throw std::out_of_range("subwindow: window exceeds bounds of dimension " +
                                    std::to_string(i + 1));
        }
        base += window.starts[i] * strides_[i];
        dims[i] = ViewDim{window.lengths[i], strides_[i]};
    }
    return ArrayView(data_, base, std::move(dims));
}

void MultiArray::save(std::ostream& out) const {
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    write_u32(out, static_cast<std::uint32_t>(spec_.rank()));
    for (std::size_t i = 0; i < spec_.rank(); ++i) {
        write_u32(out, static_cast<std::uint32_t>(spec_.size(i)));
        write_u64(out, static_cast<std::uint64_t>(spec_.offset(i)));
    }
    for (double value : data_) {
        write_u64(out, std::bit_cast<std::uint64_t>(value));
    }
    if (!out) {
        throw io_error("save: write failed");
    }
}

MultiArray MultiArray::load(std::istream& in) {
    unsigned char header[5];
    if (!read_exact(in, header, 5)) {
        throw io_error("load: truncated header");
    }
    if (std::memcmp(header, kMagic, 4) != 0) {
        throw io_error("load: bad magic");
    }
    if (header[4] != kVersion) {
        throw io_error("load: unsupported version " + std::to_string(header[4]));
    }

    unsigned char word[8];
    if (!read_exact(in, word, 4)) {
        throw io_error("load: truncated header");
    }
    const std::uint32_t rank = load_u32(word);
    if (rank < 1 || rank > kMaxRankOnDisk) {
        throw io_error("load: implausible rank " + std::to_string(rank));
    }

    std::vector<std::size_t> sizes(rank);
    std::vector<std::int64_t> offsets(rank);
    for (std::uint32_t i = 0; i < rank; ++i) {
        if (!read_exact(in, word, 4)) {
            throw io_error("load: truncated header");
        }
        sizes[i] = load_u32(word);
        if (!read_exact(in, word, 8)) {
            throw io_error("load: truncated header");
        }
        offsets[i] = static_cast<std::int64_t>(load_u64(word));
    }

    IndexSpec spec(std::move(sizes), std::move(offsets));
    std::vector<double> data(spec.element_count());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!read_exact(in, word, 8)) {
            throw io_error("load: truncated data section (" + std::to_string(i) + " of " +
                           std::to_string(data.size()) + " values present)");
        }
        data[i] = std::bit_cast<double>(load_u64(word));
    }
    return MultiArray(std::move(spec), std::move(data));
}

}  // namespace mcube
