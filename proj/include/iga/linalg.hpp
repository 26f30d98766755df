#pragma once

// Small dense linear algebra used at the element level. Row-major, no views,
// sized for (p+1)^3-scale blocks, not for global systems.

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "iga/errors.hpp"

namespace iga {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
    void set_zero() { a_.assign(a_.size(), 0.0); }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// y = A x
inline void mat_vec(const DenseMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
    assert(int(x.size()) == A.cols());
    y.assign(A.rows(), 0.0);
    for (int i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
}

// C += wt * A^T B A with B symmetric (element stiffness accumulation).
// A is (m x n), B is (m x m), C is (n x n).
void accumulate_AtBA(const DenseMatrix& A, const DenseMatrix& B, double wt, DenseMatrix& C);

// LU with partial pivoting, in place; solves A x = b for one rhs.
// Throws SingularMatrixError when a pivot falls below tol * max|A|.
std::vector<double> lu_solve(DenseMatrix A, std::vector<double> b, double pivot_tol = 1e-14);

// Cholesky solve for a symmetric positive definite dense matrix.
std::vector<double> cholesky_solve(DenseMatrix A, std::vector<double> b);

// 2x2 / 3x3 inverse helpers; return determinant.
double invert2(const std::array<double, 4>& a, std::array<double, 4>& inv);
double invert3(const std::array<double, 9>& a, std::array<double, 9>& inv);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (test-scale
// sizes; used for kernel-dimension checks and the dense fallback paths).
std::vector<double> symmetric_eigenvalues(DenseMatrix A, int max_sweeps = 100);

} // namespace iga
