#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chaincsg/errors.hpp"

namespace chaincsg {

struct Triplet {
    int row = 0;
    int col = 0;
    int val = 0;
};

// Sparse signed matrix over small integers; the carrier for characteristic
// matrices and all (co)boundary operators. Entries are stored CSR with int8
// values; duplicate triplets sum on construction and zeros are never kept.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int nrows, int ncols);
    static SparseMatrix from_triplets(int nrows, int ncols, std::span<const Triplet> ts);

    int rows() const { return nrows_; }
    int cols() const { return ncols_; }
    std::size_t nnz() const { return colidx_.size(); }

    int at(int r, int c) const;

    struct Row {
        const int* cols = nullptr;
        const std::int8_t* vals = nullptr;
        int size = 0;
    };
    Row row(int r) const;
    int row_nnz(int r) const { return rowptr_[r + 1] - rowptr_[r]; }

    SparseMatrix transpose() const;
    // integer product; throws ValidationError on dimension mismatch or when a
    // result entry leaves the int8 range
    SparseMatrix multiply(const SparseMatrix& b) const;
    // binary matrix keeping positions where the entry equals k
    SparseMatrix filter_equal(int k) const;

    std::vector<int> apply(std::span<const int> x) const;

    bool is_zero() const { return colidx_.empty(); }
    bool operator==(const SparseMatrix& o) const;

    std::vector<Triplet> triplets() const;

    // first non-zero as (row, col, value); only valid when !is_zero()
    Triplet first_entry() const;

private:
    int nrows_ = 0, ncols_ = 0;
    std::vector<int> rowptr_{0};
    std::vector<int> colidx_;
    std::vector<std::int8_t> vals_;
};

}  // namespace chaincsg
