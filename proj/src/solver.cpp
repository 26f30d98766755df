#include "iga/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "iga/errors.hpp"

namespace iga {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

// Up-looking sparse LDL^T on the natural ordering. The tensor-product dof
// numbering keeps fill banded; enriched dofs appended at the end form an
// arrowhead whose fill stays in the border.
std::vector<double> sparse_ldlt_solve(const SparseMatrix& A, const std::vector<double>& b) {
    const int n = A.size();

    // Column-compressed view of the upper triangle: row i's entries with
    // col <= i form (by symmetry) column i of the upper triangle.
    const auto& ptr = A.row_ptr();
    const auto& col = A.cols();
    const auto& val = A.values();

    std::vector<int> parent(n, -1), flag(n, -1), lnz_count(n, 0);
    // symbolic: elimination tree + column counts of L
    for (int k = 0; k < n; ++k) {
        flag[k] = k;
        for (int p = ptr[k]; p < ptr[k + 1]; ++p) {
            int i = col[p];
            if (i >= k) continue;
            while (flag[i] != k) {
                if (parent[i] == -1) parent[i] = k;
                ++lnz_count[i];
                flag[i] = k;
                i = parent[i];
            }
        }
    }
    std::vector<int> Lp(n + 1, 0);
    for (int i = 0; i < n; ++i) Lp[i + 1] = Lp[i] + lnz_count[i];
    std::vector<int> Li(Lp[n]);
    std::vector<double> Lx(Lp[n]);
    std::vector<double> D(n, 0.0), Y(n, 0.0);
    std::vector<int> pattern(n), lnz(n, 0);

    double dmax = 0.0;
    for (int k = 0; k < n; ++k) {
        int top = n;
        flag[k] = k;
        Y[k] = 0.0;
        for (int p = ptr[k]; p < ptr[k + 1]; ++p) {
            int i = col[p];
            if (i > k) continue;
            Y[i] += val[p];
            int len = 0;
            while (flag[i] != k) {
                pattern[len++] = i;
                flag[i] = k;
                i = parent[i];
            }
            while (len > 0) pattern[--top] = pattern[--len];
        }
        D[k] = Y[k];
        Y[k] = 0.0;
        for (; top < n; ++top) {
            const int i = pattern[top];
            const double yi = Y[i];
            Y[i] = 0.0;
            for (int p = Lp[i]; p < Lp[i] + lnz[i]; ++p) Y[Li[p]] -= Lx[p] * yi;
            const double lki = yi / D[i];
            D[k] -= lki * yi;
            Li[Lp[i] + lnz[i]] = k;
            Lx[Lp[i] + lnz[i]] = lki;
            ++lnz[i];
        }
        dmax = std::max(dmax, std::fabs(D[k]));
        if (std::fabs(D[k]) <= 1e-14 * (dmax > 0 ? dmax : 1.0)) throw SingularMatrixError(k);
    }

    // L z = b (unit lower, stored by columns), z /= D, L^T x = z
    std::vector<double> x = b;
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        for (int p = Lp[j]; p < Lp[j] + lnz[j]; ++p) x[Li[p]] -= Lx[p] * xj;
    }
    for (int j = 0; j < n; ++j) x[j] /= D[j];
    for (int j = n - 1; j >= 0; --j) {
        double s = x[j];
        for (int p = Lp[j]; p < Lp[j] + lnz[j]; ++p) s -= Lx[p] * x[Li[p]];
        x[j] = s;
    }
    return x;
}

std::vector<double> pcg_solve(const SparseMatrix& A, const std::vector<double>& b, double tol,
                              int max_iter, int& iterations) {
    const int n = A.size();
    std::vector<double> diag(n, 1.0);
    for (int i = 0; i < n; ++i) {
        const double d = A.get(i, i);
        if (d <= 0.0) throw SingularMatrixError(i);
        diag[i] = 1.0 / d;
    }
    std::vector<double> x(n, 0.0), r = b, z(n), p(n), Ap(n);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        iterations = 0;
        return x;
    }
    for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    p = z;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[i] * z[i];
    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (pAp <= 0.0) throw SingularMatrixError(it - 1);
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        if (norm2(r) / bnorm < tol) {
            iterations = it;
            return x;
        }
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = diag[i] * r[i];
            rz_new += r[i] * z[i];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw ConvergenceError(max_iter, norm2(r) / bnorm);
}

SolveReport solve(AssembledSystem& sys, const SolveOptions& opts) {
    sys.finalize();
    SolveReport rep;

    if (sys.n_lagrange > 0) {
        // saddle point [[K, G^T],[G, 0]], dense LU fallback. Constraint rows
        // are scaled to the stiffness magnitude so pivots stay well sized.
        const int n = sys.n_dof, m = sys.n_lagrange, N = n + m;
        if (N > 6000) throw std::invalid_argument("saddle system too large for dense fallback");
        const double gscale = std::max(sys.K.max_abs(), 1.0);
        DenseMatrix A(N, N);
        {
            const auto& K = sys.K;
            for (int i = 0; i < n; ++i)
                for (int p = K.row_ptr()[i]; p < K.row_ptr()[i + 1]; ++p)
                    A(i, K.cols()[p]) += K.values()[p];
        }
        for (const Triplet& t : sys.constraints) {
            A(n + t.r, t.c) += t.v * gscale;
            A(t.c, n + t.r) += t.v * gscale;
        }
        std::vector<double> rhs(N, 0.0);
        for (int i = 0; i < n; ++i) rhs[i] = sys.F[i];
        for (int i = 0; i < m; ++i) rhs[n + i] = sys.constraint_rhs[i] * gscale;
        std::vector<double> full;
        try {
            full = lu_solve(A, rhs);
        } catch (const SingularMatrixError&) {
            throw SingularConstraintError("constraint rows are rank deficient");
        }
        rep.solution.assign(full.begin(), full.begin() + n);
        rep.method = "dense-lu-saddle";
        // residual on the primal block
        std::vector<double> Ku;
        sys.K.multiply(rep.solution, Ku);
        std::vector<double> Gt_lam(n, 0.0);
        for (const Triplet& t : sys.constraints)
            Gt_lam[t.c] += t.v * gscale * full[n + t.r];
        double rn = 0.0, fn = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ri = Ku[i] + Gt_lam[i] - sys.F[i];
            rn += ri * ri;
            fn += sys.F[i] * sys.F[i];
        }
        rep.residual = fn > 0 ? std::sqrt(rn / fn) : std::sqrt(rn);
        return rep;
    }

    if (opts.method == SolveOptions::Method::CG) {
        rep.solution = pcg_solve(sys.K, sys.F, opts.cg_tol, opts.cg_max_iter, rep.iterations);
        rep.method = "jacobi-cg";
    } else {
        rep.solution = sparse_ldlt_solve(sys.K, sys.F);
        rep.method = "sparse-ldlt";
    }
    std::vector<double> Ku;
    sys.K.multiply(rep.solution, Ku);
    double rn = 0.0;
    const double fn = norm2(sys.F);
    for (int i = 0; i < sys.n_dof; ++i) rn += (Ku[i] - sys.F[i]) * (Ku[i] - sys.F[i]);
    rep.residual = fn > 0 ? std::sqrt(rn) / fn : std::sqrt(rn);
    if (opts.method == SolveOptions::Method::DirectSymmetric) {
        // backward-error check; penalty terms can make ||F|| a poor scale
        const double scale = sys.K.max_abs() * norm2(rep.solution) + fn;
        const double backward = scale > 0 ? std::sqrt(rn) / scale : std::sqrt(rn);
        if (backward > opts.direct_check_tol) throw ConvergenceError(0, backward);
    }
    return rep;
}

} // namespace iga
