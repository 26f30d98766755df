#pragma once

#include <string>

#include "iga/sparse.hpp"

namespace iga {

struct SolveOptions {
    enum class Method { DirectSymmetric, CG };
    Method method = Method::DirectSymmetric;
    double cg_tol = 1e-8;
    int cg_max_iter = 20000;
    double direct_check_tol = 1e-10;  // relative residual verified after a direct solve
};

struct SolveReport {
    std::vector<double> solution;
    double residual = 0.0;  // ||K u - F|| / ||F||
    int iterations = 0;
    std::string method;
};

/// Solve the finalized system. SPD systems go through the sparse LDL^T path
/// (or Jacobi-preconditioned CG when requested); systems with Lagrange
/// multiplier rows form the saddle-point matrix [[K, G^T], [G, 0]] and use a
/// dense LU fallback, sized for desk-scale constraint problems.
SolveReport solve(AssembledSystem& sys, const SolveOptions& opts = {});

/// Sparse LDL^T without pivoting (natural order). Throws SingularMatrixError
/// naming the dof where a pivot vanishes.
std::vector<double> sparse_ldlt_solve(const SparseMatrix& A, const std::vector<double>& b);

/// Jacobi-preconditioned conjugate gradients.
std::vector<double> pcg_solve(const SparseMatrix& A, const std::vector<double>& b, double tol,
                              int max_iter, int& iterations);

} // namespace iga
