#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hypdim {

/// Square 0/1 matrix describing which symbol may follow which in the coding.
class TransitionMatrix {
public:
    TransitionMatrix() = default;
    /// Throws InvalidModel unless the rows form a square 0/1 matrix with a 1 in every row and column.
    explicit TransitionMatrix(const std::vector<std::vector<int>>& rows);

    static TransitionMatrix full(std::size_t symbols);

    std::size_t size() const { return size_; }
    bool allowed(std::size_t from, std::size_t to) const { return entries_[from * size_ + to] != 0; }
    std::vector<std::vector<int>> rows() const;

    bool operator==(const TransitionMatrix&) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint8_t> entries_;
};

}  // namespace hypdim
