#include "hypdim/transition.hpp"

#include "hypdim/error.hpp"

namespace hypdim {

TransitionMatrix::TransitionMatrix(const std::vector<std::vector<int>>& rows) : size_(rows.size()) {
    if (size_ == 0) throw Error(ErrorCode::InvalidModel, "transition matrix is empty");
    entries_.assign(size_ * size_, 0);
    std::vector<int> column_hits(size_, 0);
    for (std::size_t i = 0; i < size_; ++i) {
        if (rows[i].size() != size_) throw Error(ErrorCode::InvalidModel, "transition matrix is not square");
        int row_hits = 0;
        for (std::size_t j = 0; j < size_; ++j) {
            const int v = rows[i][j];
            if (v != 0 && v != 1) throw Error(ErrorCode::InvalidModel, "transition entries must be 0 or 1");
            entries_[i * size_ + j] = static_cast<std::uint8_t>(v);
            row_hits += v;
            column_hits[j] += v;
        }
        if (row_hits == 0) throw Error(ErrorCode::InvalidModel, "transition row without successor");
    }
    for (int hits : column_hits) {
        if (hits == 0) throw Error(ErrorCode::InvalidModel, "transition column without predecessor");
    }
}

TransitionMatrix TransitionMatrix::full(std::size_t symbols) {
    return TransitionMatrix(std::vector<std::vector<int>>(symbols, std::vector<int>(symbols, 1)));
}

std::vector<std::vector<int>> TransitionMatrix::rows() const {
    std::vector<std::vector<int>> out(size_, std::vector<int>(size_, 0));
    for (std::size_t i = 0; i < size_; ++i) {
        for (std::size_t j = 0; j < size_; ++j) out[i][j] = entries_[i * size_ + j];
    }
    return out;
}

}  // namespace hypdim
