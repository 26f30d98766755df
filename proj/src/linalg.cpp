#include "iga/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace iga {

void accumulate_AtBA(const DenseMatrix& A, const DenseMatrix& B, double wt, DenseMatrix& C) {
    const int m = A.rows(), n = A.cols();
    assert(B.rows() == m && B.cols() == m && C.rows() == n && C.cols() == n);
    // T = B A  (m x n), then C += wt A^T T
    DenseMatrix T(m, n);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            const double b = B(i, k);
            if (b == 0.0) continue;
            for (int j = 0; j < n; ++j) T(i, j) += b * A(k, j);
        }
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i) {
            const double a = wt * A(k, i);
            if (a == 0.0) continue;
            for (int j = 0; j < n; ++j) C(i, j) += a * T(k, j);
        }
}

std::vector<double> lu_solve(DenseMatrix A, std::vector<double> b, double pivot_tol) {
    const int n = A.rows();
    assert(A.cols() == n && int(b.size()) == n);
    double amax = 0.0;
    for (double v : A.data()) amax = std::max(amax, std::fabs(v));
    if (amax == 0.0) throw SingularMatrixError(0);

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(A(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > best) { best = std::fabs(A(i, k)); piv = i; }
        if (best <= pivot_tol * amax) throw SingularMatrixError(k);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            std::swap(b[k], b[piv]);
            std::swap(perm[k], perm[piv]);
        }
        const double inv = 1.0 / A(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double l = A(i, k) * inv;
            if (l == 0.0) continue;
            A(i, k) = l;
            for (int j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
            b[i] -= l * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
        b[i] = s / A(i, i);
    }
    return b;
}

std::vector<double> cholesky_solve(DenseMatrix A, std::vector<double> b) {
    const int n = A.rows();
    assert(A.cols() == n && int(b.size()) == n);
    for (int j = 0; j < n; ++j) {
        double d = A(j, j);
        for (int k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (d <= 0.0) throw SingularMatrixError(j);
        const double l = std::sqrt(d);
        A(j, j) = l;
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / l;
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= A(i, k) * b[k];
        b[i] = s / A(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= A(k, i) * b[k];
        b[i] = s / A(i, i);
    }
    return b;
}

double invert2(const std::array<double, 4>& a, std::array<double, 4>& inv) {
    const double det = a[0] * a[3] - a[1] * a[2];
    const double d = 1.0 / det;
    inv = {a[3] * d, -a[1] * d, -a[2] * d, a[0] * d};
    return det;
}

double invert3(const std::array<double, 9>& a, std::array<double, 9>& inv) {
    const double c0 = a[4] * a[8] - a[5] * a[7];
    const double c1 = a[5] * a[6] - a[3] * a[8];
    const double c2 = a[3] * a[7] - a[4] * a[6];
    const double det = a[0] * c0 + a[1] * c1 + a[2] * c2;
    const double d = 1.0 / det;
    inv[0] = c0 * d;
    inv[1] = (a[2] * a[7] - a[1] * a[8]) * d;
    inv[2] = (a[1] * a[5] - a[2] * a[4]) * d;
    inv[3] = c1 * d;
    inv[4] = (a[0] * a[8] - a[2] * a[6]) * d;
    inv[5] = (a[2] * a[3] - a[0] * a[5]) * d;
    inv[6] = c2 * d;
    inv[7] = (a[1] * a[6] - a[0] * a[7]) * d;
    inv[8] = (a[0] * a[4] - a[1] * a[3]) * d;
    return det;
}

std::vector<double> symmetric_eigenvalues(DenseMatrix A, int max_sweeps) {
    const int n = A.rows();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = A(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace iga
