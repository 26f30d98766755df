#pragma once

#include <vector>

namespace iga {

/// Non-decreasing knot sequence with a polynomial degree. The open (clamped)
/// form, where the end knots repeat degree+1 times, is the default everywhere;
/// basis evaluation itself works for any valid knot vector.
class KnotVector {
public:
    KnotVector() = default;
    KnotVector(int degree, std::vector<double> knots);

    int degree() const { return p_; }
    const std::vector<double>& knots() const { return knots_; }
    double front() const { return knots_.front(); }
    double back() const { return knots_.back(); }

    /// Number of basis functions n = len(knots) - p - 1.
    int num_basis() const { return int(knots_.size()) - p_ - 1; }

    /// Number of non-degenerate knot spans (= elements in 1D).
    int num_spans() const;

    bool is_open() const;
    int multiplicity(double xi, double tol = 0.0) const;

    /// Sorted unique knot values (breakpoints).
    std::vector<double> unique_knots() const;

    /// 0-based span index s with knots[s] <= xi < knots[s+1]; xi at the upper
    /// end of the domain is clamped into the last non-degenerate span.
    int find_span(double xi) const;

    /// The p+1 non-zero basis functions N_{s-p..s} at xi (Cox-de-Boor).
    std::vector<double> basis(double xi) const;
    void basis(double xi, int span, std::vector<double>& N) const;

    /// Rows 0..order of values and derivatives of the non-zero functions:
    /// ders(k, a) = d^k N_{s-p+a} / dxi^k. Requires order <= degree. The
    /// span-taking overload evaluates one-sided limits at span edges.
    void basis_ders(double xi, int order, std::vector<std::vector<double>>& ders) const;
    void basis_ders(double xi, int order, std::vector<std::vector<double>>& ders,
                    int span) const;

    /// Greville abscissa of basis function i (mean of p consecutive knots).
    double greville(int i) const;

    /// Knot-interval form of an open vector: successive differences of the
    /// reduced (p-fold end repetition) notation. Conversion only; no
    /// interval-based evaluation is built on it.
    std::vector<double> knot_intervals() const;

private:
    int p_ = 0;
    std::vector<double> knots_;
};

} // namespace iga
