#pragma once

#include <stdexcept>
#include <string>

namespace iga {

/// Geometry mapping degenerated (|J| ~ 0) at a quadrature or evaluation point.
class SingularGeometryError : public std::runtime_error {
public:
    SingularGeometryError(int element, double xi, double eta, double zeta)
        : std::runtime_error("singular geometry in element " + std::to_string(element) +
                             " at parametric point (" + std::to_string(xi) + ", " +
                             std::to_string(eta) + ", " + std::to_string(zeta) + ")"),
          element_id(element), u(xi), v(eta), w(zeta) {}
    int element_id;
    double u, v, w;
};

/// Constraint rows are linearly dependent (duplicate or conflicting constraints).
class SingularConstraintError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear system is singular; message names the offending dof where known.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(int dof)
        : std::runtime_error("singular matrix: zero pivot at dof " + std::to_string(dof)),
          dof_index(dof) {}
    int dof_index;
};

/// Iterative solver failed to reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(int iterations, double residual)
        : std::runtime_error("no convergence after " + std::to_string(iterations) +
                             " iterations (residual " + std::to_string(residual) + ")"),
          iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// Crack topology could not be classified (e.g. crack grazing a mesh corner).
class UnresolvedTopologyError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace iga
