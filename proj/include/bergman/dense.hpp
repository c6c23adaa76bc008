#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace bergman {

/// Row-major dense table. Everything in this library is small enough
/// (orders of a few hundred) that dense storage is the right call.
template <class T>
class Dense {
public:
    Dense() = default;
    Dense(std::size_t rows, std::size_t cols, const T& fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

}  // namespace bergman
