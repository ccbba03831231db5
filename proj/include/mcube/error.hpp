#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcube {

// Grid/array payloads that cannot be parsed: bad magic, truncation,
// declared element count not matching the data section.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// A rational interpolation tableau denominator fell below the pole guard.
// column/row identify the offending tableau cell.
class pole_error : public std::runtime_error {
public:
    pole_error(std::size_t column, std::size_t row, const std::string& what)
        : std::runtime_error(what), column_(column), row_(row) {}

    std::size_t column() const noexcept { return column_; }
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t column_;
    std::size_t row_;
};

// A function produced (or was asked to produce) a non-finite value.
class nonfinite_error : public std::runtime_error {
public:
    explicit nonfinite_error(const std::string& what) : std::runtime_error(what) {}
};

// A benchmark function was called outside the region where it is defined.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested grid would exceed the allocation ceiling; thrown before
// any storage is reserved.
class memory_guard_error : public std::runtime_error {
public:
    memory_guard_error(std::size_t elements, std::size_t bytes, const std::string& what)
        : std::runtime_error(what), elements_(elements), bytes_(bytes) {}

    std::size_t elements() const noexcept { return elements_; }
    std::size_t bytes() const noexcept { return bytes_; }

private:
    std::size_t elements_;
    std::size_t bytes_;
};

}  // namespace mcube
