#include "iga/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iga {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : p_(degree), knots_(std::move(knots)) {
    if (p_ < 0) throw std::invalid_argument("knot vector: negative degree");
    if (int(knots_.size()) < 2 * (p_ + 1))
        throw std::invalid_argument("knot vector: too few knots for degree");
    for (size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i] < knots_[i - 1])
            throw std::invalid_argument("knot vector: knots must be non-decreasing");
}

int KnotVector::num_spans() const {
    int n = 0;
    for (size_t i = 0; i + 1 < knots_.size(); ++i)
        if (knots_[i + 1] > knots_[i]) ++n;
    return n;
}

bool KnotVector::is_open() const {
    const int m = int(knots_.size());
    for (int i = 0; i <= p_; ++i)
        if (knots_[i] != knots_[0] || knots_[m - 1 - i] != knots_[m - 1]) return false;
    return true;
}

int KnotVector::multiplicity(double xi, double tol) const {
    int m = 0;
    for (double k : knots_)
        if (std::fabs(k - xi) <= tol) ++m;
    return m;
}

std::vector<double> KnotVector::unique_knots() const {
    std::vector<double> u;
    for (double k : knots_)
        if (u.empty() || k > u.back()) u.push_back(k);
    return u;
}

int KnotVector::find_span(double xi) const {
    const int n = num_basis();
    if (xi < knots_.front() || xi > knots_.back())
        throw std::domain_error("parameter outside knot range");
    // last non-degenerate span for the upper domain end
    if (xi >= knots_[n]) {
        int s = n;
        while (s > p_ && knots_[s] == knots_[s - 1]) --s;
        return s - 1;
    }
    int lo = p_, hi = n;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (xi < knots_[mid] ? hi : lo) = mid;
    }
    return lo;
}

std::vector<double> KnotVector::basis(double xi) const {
    std::vector<double> N(p_ + 1);
    basis(xi, find_span(xi), N);
    return N;
}

void KnotVector::basis(double xi, int span, std::vector<double>& N) const {
    // Cox-de-Boor recursion on the non-zero functions; 0/0 never arises in
    // this arrangement because left/right spans are taken from the live span.
    N.assign(p_ + 1, 0.0);
    std::vector<double> left(p_ + 1), right(p_ + 1);
    N[0] = 1.0;
    for (int j = 1; j <= p_; ++j) {
        left[j] = xi - knots_[span + 1 - j];
        right[j] = knots_[span + j] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        N[j] = saved;
    }
}

void KnotVector::basis_ders(double xi, int order, std::vector<std::vector<double>>& ders) const {
    basis_ders(xi, order, ders, find_span(xi));
}

void KnotVector::basis_ders(double xi, int order, std::vector<std::vector<double>>& ders,
                            int span) const {
    if (order > p_) throw std::invalid_argument("derivative order exceeds degree");
    const int p = p_;

    // triangular table of basis values plus the knot differences
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1), right(p + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = xi - knots_[span + 1 - j];
        right[j] = knots_[span + j] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double tmp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu[j][j] = saved;
    }

    ders.assign(order + 1, std::vector<double>(p + 1, 0.0));
    for (int a = 0; a <= p; ++a) ders[0][a] = ndu[a][p];

    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= order; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double fac = p;
    for (int k = 1; k <= order; ++k) {
        for (int a2 = 0; a2 <= p; ++a2) ders[k][a2] *= fac;
        fac *= (p - k);
    }
}

std::vector<double> KnotVector::knot_intervals() const {
    if (!is_open()) throw std::invalid_argument("knot intervals: open knot vector required");
    // reduced notation drops the first and last knot
    std::vector<double> d;
    for (size_t i = 2; i + 1 < knots_.size(); ++i) d.push_back(knots_[i] - knots_[i - 1]);
    return d;
}

double KnotVector::greville(int i) const {
    double s = 0.0;
    for (int k = 1; k <= p_; ++k) s += knots_[i + k];
    return p_ > 0 ? s / p_ : 0.5 * (knots_[i] + knots_[i + 1]);
}

} // namespace iga
