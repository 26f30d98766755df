#include "iga/extraction.hpp"

#include <cmath>
#include <stdexcept>

namespace iga {

std::vector<double> bernstein(int p, double xt) {
    std::vector<double> B(p + 1, 0.0);
    B[0] = 1.0;
    const double u = 0.5 * (1.0 + xt);  // map to [0,1]
    for (int j = 1; j <= p; ++j) {
        double saved = 0.0;
        for (int k = 0; k < j; ++k) {
            const double tmp = B[k];
            B[k] = saved + (1.0 - u) * tmp;
            saved = u * tmp;
        }
        B[j] = saved;
    }
    return B;
}

std::vector<DenseMatrix> bezier_extract(const KnotVector& kv) {
    if (!kv.is_open()) throw std::invalid_argument("bezier_extract: open knot vector required");
    const int p = kv.degree();
    const std::vector<double>& knots = kv.knots();
    const int m = int(knots.size());
    // 1-based view of the knot vector to keep the classical indexing
    auto U = [&](int i) { return knots[i - 1]; };

    const int nel = kv.num_spans();
    std::vector<DenseMatrix> C;
    C.reserve(nel);
    auto identity = [&] {
        DenseMatrix I(p + 1, p + 1);
        for (int i = 0; i <= p; ++i) I(i, i) = 1.0;
        return I;
    };
    C.push_back(identity());

    std::vector<double> alphas(std::max(p, 1), 0.0);
    int a = p + 1, b = a + 1, nb = 0;  // nb: current operator (0-based)
    while (b < m) {
        int i = b;
        while (b < m && U(b + 1) == U(b)) ++b;
        const int mult = b - i + 1;
        if (mult < p) {
            const double numer = U(b) - U(a);
            for (int j = p; j >= mult + 1; --j) alphas[j - mult - 1] = numer / (U(a + j) - U(a));
            const int r = p - mult;
            if (int(C.size()) == nb + 1) C.push_back(identity());
            for (int j = 1; j <= r; ++j) {
                const int save = r - j + 1, s = mult + j;
                for (int k = p + 1; k >= s + 1; --k) {
                    const double alpha = alphas[k - s - 1];
                    for (int row = 0; row <= p; ++row)
                        C[nb](row, k - 1) =
                            alpha * C[nb](row, k - 1) + (1.0 - alpha) * C[nb](row, k - 2);
                }
                if (b < m) {
                    // overlapping coefficients of the next operator
                    for (int row = 0; row <= j; ++row)
                        C[nb + 1](save - 1 + row, save - 1) = C[nb](p - j + row, p);
                }
            }
            ++nb;
            if (b < m) { a = b; ++b; }
        } else {
            // already a Bezier segment boundary
            ++nb;
            if (b < m) {
                if (int(C.size()) == nb) C.push_back(identity());
                a = b;
                ++b;
            }
        }
    }
    C.resize(nel, identity());
    return C;
}

} // namespace iga
