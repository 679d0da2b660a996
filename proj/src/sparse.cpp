#include "chaincsg/sparse.hpp"

#include <algorithm>
#include <string>

namespace chaincsg {

SparseMatrix::SparseMatrix(int nrows, int ncols) : nrows_(nrows), ncols_(ncols) {
    if (nrows < 0 || ncols < 0) throw ValidationError("negative matrix dimension");
    rowptr_.assign(size_t(nrows) + 1, 0);
}

SparseMatrix SparseMatrix::from_triplets(int nrows, int ncols, std::span<const Triplet> ts) {
    SparseMatrix m(nrows, ncols);
    std::vector<Triplet> sorted(ts.begin(), ts.end());
    for (const Triplet& t : sorted)
        if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
            throw ValidationError("triplet index out of range");
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        long long sum = 0;
        while (j < sorted.size() && sorted[j].row == sorted[i].row &&
               sorted[j].col == sorted[i].col)
            sum += sorted[j++].val;
        if (sum != 0) {
            if (sum < -128 || sum > 127) throw ValidationError("matrix entry exceeds int8 range");
            m.colidx_.push_back(sorted[i].col);
            m.vals_.push_back(std::int8_t(sum));
            ++m.rowptr_[size_t(sorted[i].row) + 1];
        }
        i = j;
    }
    for (size_t r = 1; r < m.rowptr_.size(); ++r) m.rowptr_[r] += m.rowptr_[r - 1];
    return m;
}

int SparseMatrix::at(int r, int c) const {
    const int* begin = colidx_.data() + rowptr_[r];
    const int* end = colidx_.data() + rowptr_[r + 1];
    const int* it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return 0;
    return vals_[size_t(it - colidx_.data())];
}

SparseMatrix::Row SparseMatrix::row(int r) const {
    return {colidx_.data() + rowptr_[r], vals_.data() + rowptr_[r],
            rowptr_[r + 1] - rowptr_[r]};
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> ts;
    ts.reserve(nnz());
    for (int r = 0; r < nrows_; ++r) {
        Row row_r = row(r);
        for (int k = 0; k < row_r.size; ++k)
            ts.push_back({row_r.cols[k], r, row_r.vals[k]});
    }
    return from_triplets(ncols_, nrows_, ts);
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& b) const {
    if (ncols_ != b.nrows_)
        throw ValidationError("matrix product dimension mismatch: " + std::to_string(ncols_) +
                              " vs " + std::to_string(b.nrows_));
    std::vector<Triplet> out;
    std::vector<long long> acc(size_t(std::max(b.ncols_, 1)), 0);
    std::vector<int> touched;
    for (int r = 0; r < nrows_; ++r) {
        touched.clear();
        Row ra = row(r);
        for (int k = 0; k < ra.size; ++k) {
            int mid = ra.cols[k];
            int av = ra.vals[k];
            Row rb = b.row(mid);
            for (int j = 0; j < rb.size; ++j) {
                int c = rb.cols[j];
                if (acc[c] == 0) touched.push_back(c);
                acc[c] += (long long)av * rb.vals[j];
            }
        }
        for (int c : touched) {
            long long v = acc[c];
            acc[c] = 0;
            if (v == 0) continue;
            if (v < -128 || v > 127)
                throw ValidationError("matrix product entry exceeds int8 range");
            out.push_back({r, c, int(v)});
        }
    }
    return from_triplets(nrows_, b.ncols_, out);
}

SparseMatrix SparseMatrix::filter_equal(int k) const {
    std::vector<Triplet> out;
    for (int r = 0; r < nrows_; ++r) {
        Row rr = row(r);
        for (int i = 0; i < rr.size; ++i)
            if (rr.vals[i] == k) out.push_back({r, rr.cols[i], 1});
    }
    return from_triplets(nrows_, ncols_, out);
}

std::vector<int> SparseMatrix::apply(std::span<const int> x) const {
    if (int(x.size()) != ncols_) throw ValidationError("matrix-vector dimension mismatch");
    std::vector<int> y(size_t(nrows_), 0);
    for (int r = 0; r < nrows_; ++r) {
        Row rr = row(r);
        long long s = 0;
        for (int i = 0; i < rr.size; ++i) s += (long long)rr.vals[i] * x[rr.cols[i]];
        y[r] = int(s);
    }
    return y;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
    return nrows_ == o.nrows_ && ncols_ == o.ncols_ && rowptr_ == o.rowptr_ &&
           colidx_ == o.colidx_ && vals_ == o.vals_;
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> ts;
    ts.reserve(nnz());
    for (int r = 0; r < nrows_; ++r) {
        Row rr = row(r);
        for (int i = 0; i < rr.size; ++i) ts.push_back({r, rr.cols[i], rr.vals[i]});
    }
    return ts;
}

Triplet SparseMatrix::first_entry() const {
    for (int r = 0; r < nrows_; ++r)
        if (row_nnz(r) > 0) {
            Row rr = row(r);
            return {r, rr.cols[0], rr.vals[0]};
        }
    return {};
}

}  // namespace chaincsg
