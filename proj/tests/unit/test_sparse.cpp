#include "doctest.h"

#include "chaincsg/sparse.hpp"

using namespace chaincsg;

TEST_CASE("triplet construction sums duplicates and drops zeros") {
    std::vector<Triplet> ts = {{0, 0, 1}, {0, 0, 1}, {1, 2, -1}, {1, 2, 1}, {2, 1, 3}};
    SparseMatrix m = SparseMatrix::from_triplets(3, 3, ts);
    CHECK(m.nnz() == 2);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(1, 2) == 0);
    CHECK(m.at(2, 1) == 3);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(1, 1, std::vector<Triplet>{{0, 1, 1}}),
                    ValidationError);
}

TEST_CASE("transpose is an involution") {
    std::vector<Triplet> ts = {{0, 1, 1}, {2, 0, -1}, {1, 1, 2}};
    SparseMatrix m = SparseMatrix::from_triplets(3, 2, ts);
    SparseMatrix t = m.transpose();
    CHECK(t.rows() == 2);
    CHECK(t.cols() == 3);
    CHECK(t.at(1, 0) == 1);
    CHECK(t.at(0, 2) == -1);
    CHECK(t.transpose() == m);
}

TEST_CASE("product against dense reference") {
    // A = [1 2; 0 -1], B = [3 0; 1 1]
    SparseMatrix a =
        SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{0, 0, 1}, {0, 1, 2}, {1, 1, -1}});
    SparseMatrix b =
        SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{0, 0, 3}, {1, 0, 1}, {1, 1, 1}});
    SparseMatrix c = a.multiply(b);
    CHECK(c.at(0, 0) == 5);
    CHECK(c.at(0, 1) == 2);
    CHECK(c.at(1, 0) == -1);
    CHECK(c.at(1, 1) == -1);

    SparseMatrix wrong(3, 3);
    CHECK_THROWS_AS(a.multiply(wrong), ValidationError);
}

TEST_CASE("product cancellation yields structural zero") {
    // [1 1] * [1; -1] = [0]
    SparseMatrix a = SparseMatrix::from_triplets(1, 2, std::vector<Triplet>{{0, 0, 1}, {0, 1, 1}});
    SparseMatrix b = SparseMatrix::from_triplets(2, 1, std::vector<Triplet>{{0, 0, 1}, {1, 0, -1}});
    CHECK(a.multiply(b).is_zero());
}

TEST_CASE("filter_equal keeps exact matches as ones") {
    SparseMatrix m =
        SparseMatrix::from_triplets(2, 3, std::vector<Triplet>{{0, 0, 2}, {0, 1, 1}, {1, 2, 2}});
    SparseMatrix f = m.filter_equal(2);
    CHECK(f.nnz() == 2);
    CHECK(f.at(0, 0) == 1);
    CHECK(f.at(0, 1) == 0);
    CHECK(f.at(1, 2) == 1);
}

TEST_CASE("matrix-vector product") {
    SparseMatrix m =
        SparseMatrix::from_triplets(2, 3, std::vector<Triplet>{{0, 0, 1}, {0, 2, -1}, {1, 1, 2}});
    std::vector<int> x = {1, 2, 3};
    std::vector<int> y = m.apply(x);
    CHECK(y == std::vector<int>{-2, 4});
    CHECK_THROWS_AS(m.apply(std::vector<int>{1, 2}), ValidationError);
}

TEST_CASE("empty matrices multiply to empty") {
    SparseMatrix a(0, 5), b(5, 0);
    CHECK(a.multiply(b).is_zero());
    CHECK(a.multiply(b).rows() == 0);
}
