#pragma once

#include <map>
#include <optional>
#include <vector>

#include "odot/rational.hpp"

namespace odot {

// Sparse vector over an enumerated basis. Zero entries are never stored, so
// equality is value equality regardless of insertion order.
struct SparseVec {
    std::map<int, Scalar> c;

    SparseVec() = default;
    static SparseVec unitvec(int i) {
        SparseVec v;
        v.c[i] = Scalar(1);
        return v;
    }

    bool is_zero() const { return c.empty(); }
    Scalar get(int i) const {
        auto it = c.find(i);
        return it == c.end() ? Scalar() : it->second;
    }
    void add(int i, const Scalar& s) {
        if (s.is_zero())
            return;
        auto [it, fresh] = c.emplace(i, s);
        if (!fresh) {
            it->second += s;
            if (it->second.is_zero())
                c.erase(it);
        }
    }
    void axpy(const Scalar& a, const SparseVec& v) {
        if (a.is_zero())
            return;
        for (auto& [i, s] : v.c)
            add(i, a * s);
    }
    SparseVec scaled(const Scalar& a) const {
        SparseVec r;
        if (!a.is_zero())
            for (auto& [i, s] : c)
                r.c.emplace(i, a * s);
        return r;
    }
    bool operator==(const SparseVec& o) const { return c == o.c; }
};

// Column-major sparse matrix with explicit dimensions.
struct SparseMat {
    int rows = 0;  // codomain dimension
    int cols = 0;  // domain dimension
    std::vector<SparseVec> col;

    SparseMat() = default;
    SparseMat(int rows_, int cols_) : rows(rows_), cols(cols_), col(cols_) {}

    void set(int r, int c, const Scalar& s) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw ValidationError("matrix entry out of bounds");
        if (s.is_zero())
            col[c].c.erase(r);
        else
            col[c].c[r] = s;
    }
    SparseVec apply(const SparseVec& x) const {
        SparseVec y;
        for (auto& [j, s] : x.c) {
            if (j < 0 || j >= cols)
                throw ValidationError("vector index out of matrix domain");
            y.axpy(s, col[j]);
        }
        return y;
    }
    static SparseMat identity(int n) {
        SparseMat m(n, n);
        for (int i = 0; i < n; ++i)
            m.set(i, i, Scalar(1));
        return m;
    }
};

// Deterministic Gaussian elimination with smallest-index pivoting: pivot
// columns are chosen in ascending order, and within a column the lowest
// untouched row wins. Free variables are set to zero, which makes the
// returned solution the pivoting-convention representative.
std::optional<SparseVec> solve(const SparseMat& A, const SparseVec& b);

// Echelonized kernel basis; empty iff A is injective.
std::vector<SparseVec> kernel_basis(const SparseMat& A);

int rank_of(const SparseMat& A);
int rank_of_span(const std::vector<SparseVec>& vs, int dim);

// dim span(cycles) - dim span(boundaries); checks span containment and
// reports a broken differential upstream when it fails.
int quotient_dim(const std::vector<SparseVec>& cycles, const std::vector<SparseVec>& boundaries,
                 int dim);

SparseMat mat_from_columns(const std::vector<SparseVec>& cols, int rows);

}  // namespace odot
