#pragma once

#include <optional>
#include <vector>

#include "charp/fp.hpp"

namespace charp {

// Dense matrix over F_p. Desk-scale: full Gaussian elimination, no
// fraction-free tricks needed since the field is exact.
class FpMat {
public:
    FpMat() = default;
    FpMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), d_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    FpScalar& at(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
    FpScalar at(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }

    // In-place reduced row echelon form; returns pivot column per pivot row.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t sel = r;
            while (sel < rows_ && at(sel, c).is_zero()) ++sel;
            if (sel == rows_) continue;
            if (sel != r)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(at(sel, j), at(r, j));
            FpScalar inv = at(r, c).inv();
            for (std::size_t j = c; j < cols_; ++j) at(r, j) *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || at(i, c).is_zero()) continue;
                FpScalar f = at(i, c);
                for (std::size_t j = c; j < cols_; ++j)
                    at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const {
        FpMat tmp = *this;
        return tmp.rref().size();
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<FpScalar> d_;
};

// Solve A x = b. Returns the particular solution with all free
// variables set to zero (deterministic), or nullopt if inconsistent.
inline std::optional<std::vector<FpScalar>> solve(const FpMat& A,
                                                 const std::vector<FpScalar>& b) {
    FpMat aug(A.rows(), A.cols() + 1);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols()) = b[i];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
    std::vector<FpScalar> x(A.cols(), FpScalar::zero());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug.at(r, A.cols());
    return x;
}

// Basis of the null space of A, one vector per free column, in
// ascending free-column order (deterministic).
inline std::vector<std::vector<FpScalar>> kernel_basis(const FpMat& A) {
    FpMat R = A;
    auto pivots = R.rref();
    std::vector<bool> isPivot(A.cols(), false);
    for (auto c : pivots) isPivot[c] = true;
    std::vector<std::vector<FpScalar>> basis;
    for (std::size_t f = 0; f < A.cols(); ++f) {
        if (isPivot[f]) continue;
        std::vector<FpScalar> v(A.cols(), FpScalar::zero());
        v[f] = FpScalar::one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -R.at(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace charp
