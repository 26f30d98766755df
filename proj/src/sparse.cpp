#include "iga/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iga {

SparseMatrix SparseMatrix::from_triplets(int n, const std::vector<Triplet>& ts) {
    SparseMatrix A;
    A.n_ = n;
    std::vector<int> count(n, 0);
    for (const Triplet& t : ts) {
        if (t.r < 0 || t.r >= n || t.c < 0 || t.c >= n)
            throw std::out_of_range("triplet index out of range");
        ++count[t.r];
    }
    A.row_ptr_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) A.row_ptr_[i + 1] = A.row_ptr_[i] + count[i];
    std::vector<int> pos(A.row_ptr_.begin(), A.row_ptr_.end() - 1);
    std::vector<int> rc(ts.size());
    std::vector<double> rv(ts.size());
    for (const Triplet& t : ts) {
        rc[pos[t.r]] = t.c;
        rv[pos[t.r]] = t.v;
        ++pos[t.r];
    }
    // sort each row by column and merge duplicates
    A.col_.reserve(ts.size());
    A.val_.reserve(ts.size());
    std::vector<int> new_ptr(n + 1, 0);
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        const int lo = A.row_ptr_[i], hi = A.row_ptr_[i + 1];
        order.resize(hi - lo);
        for (int k = 0; k < hi - lo; ++k) order[k] = lo + k;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return rc[a] < rc[b]; });
        for (int k = 0; k < int(order.size()); ++k) {
            const int c = rc[order[k]];
            const double v = rv[order[k]];
            if (!A.col_.empty() && int(A.col_.size()) > new_ptr[i] && A.col_.back() == c)
                A.val_.back() += v;
            else {
                A.col_.push_back(c);
                A.val_.push_back(v);
            }
        }
        new_ptr[i + 1] = int(A.col_.size());
    }
    A.row_ptr_ = std::move(new_ptr);
    return A;
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += val_[p] * x[col_[p]];
        y[i] = s;
    }
}

double SparseMatrix::get(int r, int c) const {
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        if (col_[p] == c) return val_[p];
    return 0.0;
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : val_) m = std::max(m, std::fabs(v));
    return m;
}

double SparseMatrix::asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            m = std::max(m, std::fabs(val_[p] - get(col_[p], i)));
    return m;
}

DenseMatrix SparseMatrix::dense() const {
    DenseMatrix D(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) D(i, col_[p]) += val_[p];
    return D;
}

void AssembledSystem::finalize() {
    if (finalized) return;
    K = SparseMatrix::from_triplets(n_dof, triplets);
    finalized = true;
}

double AssembledSystem::reaction(int dof, const std::vector<double>& u) const {
    if (!unconstrained) throw std::logic_error("no unconstrained snapshot kept");
    double r = 0.0;
    const SparseMatrix& K0 = *unconstrained;
    for (int p = K0.row_ptr()[dof]; p < K0.row_ptr()[dof + 1]; ++p)
        r += K0.values()[p] * u[K0.cols()[p]];
    if (dof < int(F_unconstrained.size())) r -= F_unconstrained[dof];
    return r;
}

} // namespace iga
