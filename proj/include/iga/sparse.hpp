#pragma once

#include <memory>
#include <vector>

#include "iga/linalg.hpp"

namespace iga {

struct Triplet {
    int r = 0, c = 0;
    double v = 0.0;
};

/// Compressed-row square sparse matrix; duplicates are summed on build.
class SparseMatrix {
public:
    SparseMatrix() = default;
    static SparseMatrix from_triplets(int n, const std::vector<Triplet>& ts);

    int size() const { return n_; }
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    double get(int r, int c) const;
    double max_abs() const;
    /// max|K - K^T| over the pattern.
    double asymmetry() const;
    DenseMatrix dense() const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return col_; }
    const std::vector<double>& values() const { return val_; }

private:
    int n_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_;
    std::vector<double> val_;
};

/// Stiffness + load in assembly (triplet) form, finalized to CSR for the
/// solver. Also carries the constraint bookkeeping the bc module fills in.
struct AssembledSystem {
    int n_dof = 0;
    std::vector<Triplet> triplets;
    std::vector<double> F;

    // Lagrange-multiplier constraint rows (saddle-point extension)
    int n_lagrange = 0;
    std::vector<Triplet> constraints;  // r in [0, n_lagrange), c in [0, n_dof)
    std::vector<double> constraint_rhs;
    std::vector<Vec3> lagrange_points;  // physical collocation points already used

    // direct-elimination record, kept for reaction recovery
    std::vector<int> fixed_dofs;
    std::vector<double> fixed_values;
    std::shared_ptr<SparseMatrix> unconstrained;  // snapshot before elimination

    bool finalized = false;
    SparseMatrix K;

    void init(int n) {
        n_dof = n;
        F.assign(n, 0.0);
    }
    void add(int r, int c, double v) { triplets.push_back({r, c, v}); }
    void add_force(int r, double v) { F[r] += v; }

    /// Build the CSR matrix (idempotent).
    void finalize();

    /// Reaction force at an eliminated dof: K0[row,:]*u - F0[row]; valid
    /// only when the unconstrained snapshot was kept.
    double reaction(int dof, const std::vector<double>& u) const;
    std::vector<double> F_unconstrained;
};

} // namespace iga
