#include "odot/sparse.hpp"

namespace odot {

namespace {

// Row-reduced echelon form worker shared by solve/kernel/rank.
struct Rref {
    std::vector<std::map<int, Scalar>> row;  // sparse rows
    std::vector<int> pivot_row_of_col;       // col -> row index, or -1
    std::vector<int> pivot_col_of_row;       // row -> col index, or -1

    Rref(const SparseMat& A, const SparseVec* rhs, std::vector<Scalar>* rhs_out) {
        row.resize(A.rows);
        for (int j = 0; j < A.cols; ++j)
            for (auto& [r, s] : A.col[j].c)
                row[r][j] = s;
        std::vector<Scalar> b(A.rows);
        if (rhs)
            for (auto& [r, s] : rhs->c) {
                if (r < 0 || r >= A.rows)
                    throw ValidationError("rhs index out of codomain");
                b[r] = s;
            }
        pivot_row_of_col.assign(A.cols, -1);
        pivot_col_of_row.assign(A.rows, -1);
        std::vector<bool> used(A.rows, false);
        for (int j = 0; j < A.cols; ++j) {
            int pr = -1;
            for (int r = 0; r < A.rows; ++r) {
                if (used[r])
                    continue;
                auto it = row[r].find(j);
                if (it != row[r].end()) {
                    pr = r;
                    break;
                }
            }
            if (pr < 0)
                continue;
            used[pr] = true;
            pivot_row_of_col[j] = pr;
            pivot_col_of_row[pr] = j;
            Scalar inv = row[pr][j].inverse();
            for (auto& [c, s] : row[pr])
                s *= inv;
            b[pr] *= inv;
            for (int r = 0; r < A.rows; ++r) {
                if (r == pr)
                    continue;
                auto it = row[r].find(j);
                if (it == row[r].end())
                    continue;
                Scalar f = it->second;
                for (auto& [c, s] : row[pr]) {
                    auto [jt, fresh] = row[r].emplace(c, Scalar());
                    jt->second -= f * s;
                    if (jt->second.is_zero())
                        row[r].erase(jt);
                }
                b[r] -= f * b[pr];
            }
        }
        if (rhs_out)
            *rhs_out = std::move(b);
    }
};

}  // namespace

std::optional<SparseVec> solve(const SparseMat& A, const SparseVec& b) {
    if (!b.c.empty() && b.c.rbegin()->first >= A.rows)
        throw ValidationError("solve: dimension mismatch");
    std::vector<Scalar> bred;
    Rref R(A, &b, &bred);
    for (int r = 0; r < A.rows; ++r)
        if (R.pivot_col_of_row[r] < 0 && !bred[r].is_zero())
            return std::nullopt;  // b outside image(A)
    SparseVec x;
    for (int j = 0; j < A.cols; ++j)
        if (R.pivot_row_of_col[j] >= 0)
            x.add(j, bred[R.pivot_row_of_col[j]]);
    return x;
}

std::vector<SparseVec> kernel_basis(const SparseMat& A) {
    Rref R(A, nullptr, nullptr);
    std::vector<SparseVec> basis;
    for (int jf = 0; jf < A.cols; ++jf) {
        if (R.pivot_row_of_col[jf] >= 0)
            continue;
        SparseVec v;
        v.add(jf, Scalar(1));
        for (int j = 0; j < A.cols; ++j) {
            int pr = R.pivot_row_of_col[j];
            if (pr < 0)
                continue;
            auto it = R.row[pr].find(jf);
            if (it != R.row[pr].end())
                v.add(j, -it->second);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

int rank_of(const SparseMat& A) {
    Rref R(A, nullptr, nullptr);
    int rk = 0;
    for (int j = 0; j < A.cols; ++j)
        if (R.pivot_row_of_col[j] >= 0)
            ++rk;
    return rk;
}

SparseMat mat_from_columns(const std::vector<SparseVec>& cols, int rows) {
    SparseMat M(rows, (int)cols.size());
    for (int j = 0; j < (int)cols.size(); ++j) {
        for (auto& [r, s] : cols[j].c) {
            if (r < 0 || r >= rows)
                throw ValidationError("column entry out of bounds");
            M.col[j].c[r] = s;
        }
    }
    return M;
}

int rank_of_span(const std::vector<SparseVec>& vs, int dim) {
    return rank_of(mat_from_columns(vs, dim));
}

int quotient_dim(const std::vector<SparseVec>& cycles, const std::vector<SparseVec>& boundaries,
                 int dim) {
    SparseMat Z = mat_from_columns(cycles, dim);
    for (auto& b : boundaries)
        if (!solve(Z, b))
            throw ValidationError(
                "quotient_dim: boundaries not contained in cycles (broken differential upstream)");
    return rank_of(Z) - rank_of_span(boundaries, dim);
}

}  // namespace odot
