#include "iga/refine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iga {

namespace {

using HPoint = std::array<double, 4>;

HPoint lerp(const HPoint& a, const HPoint& b, double alpha) {
    HPoint r;
    for (int c = 0; c < 4; ++c) r[c] = alpha * b[c] + (1.0 - alpha) * a[c];
    return r;
}

int span_of(const std::vector<double>& U, int p, double u) {
    const int n = int(U.size()) - p - 1;
    if (u >= U[n]) {
        int s = n;
        while (s > p && U[s] == U[s - 1]) --s;
        return s - 1;
    }
    int lo = p, hi = n;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (u < U[mid] ? hi : lo) = mid;
    }
    return lo;
}

// Boehm single knot insertion on a homogeneous curve.
void insert_once(int p, std::vector<double>& U, std::vector<HPoint>& P, double u) {
    const int k = span_of(U, p, u);
    const int n = int(P.size());
    std::vector<HPoint> Q(n + 1);
    for (int i = 0; i <= k - p; ++i) Q[i] = P[i];
    for (int i = k + 1; i <= n; ++i) Q[i] = P[i - 1];
    for (int i = k - p + 1; i <= k; ++i) {
        const double denom = U[i + p] - U[i];
        const double alpha = (u - U[i]) / denom;
        Q[i] = lerp(P[i - 1], P[i], alpha);
    }
    U.insert(U.begin() + k + 1, u);
    P = std::move(Q);
}

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Degree elevation of a (homogeneous) B-spline curve by t. Bezier-segment
// elevation with on-the-fly knot removal, after Piegl & Tiller A5.9.
void elevate_curve(int p, int t, std::vector<double>& U, std::vector<HPoint>& Pw) {
    const int n = int(Pw.size()) - 1;
    const int m = n + p + 1;
    const int ph = p + t, ph2 = ph / 2;

    std::vector<std::vector<double>> bezalfs(ph + 1, std::vector<double>(p + 1, 0.0));
    bezalfs[0][0] = bezalfs[ph][p] = 1.0;
    for (int i = 1; i <= ph2; ++i) {
        const double inv = 1.0 / double(binom(ph, i));
        const int mpi = std::min(p, i);
        for (int j = std::max(0, i - t); j <= mpi; ++j)
            bezalfs[i][j] = inv * double(binom(p, j)) * double(binom(t, i - j));
    }
    for (int i = ph2 + 1; i <= ph - 1; ++i) {
        const int mpi = std::min(p, i);
        for (int j = std::max(0, i - t); j <= mpi; ++j) bezalfs[i][j] = bezalfs[ph - i][p - j];
    }

    int uniq = 1;
    for (int i = 1; i <= m; ++i)
        if (U[i] > U[i - 1]) ++uniq;
    const int new_knot_count = m + 1 + t * uniq;

    std::vector<double> Uh(new_knot_count, 0.0);
    std::vector<HPoint> Qw(new_knot_count - ph - 1);
    std::vector<HPoint> bpts(p + 1), ebpts(ph + 1), Nextbpts(std::max(p - 1, 1));
    std::vector<double> alfs(std::max(p - 1, 1), 0.0);

    int mh = ph, kind = ph + 1, r = -1, a = p, b = p + 1, cind = 1;
    double ua = U[0];
    Qw[0] = Pw[0];
    for (int i = 0; i <= ph; ++i) Uh[i] = ua;
    for (int i = 0; i <= p; ++i) bpts[i] = Pw[i];

    while (b < m) {
        const int i0 = b;
        while (b < m && U[b] == U[b + 1]) ++b;
        const int mul = b - i0 + 1;
        mh += mul + t;
        const double ub = U[b];
        const int oldr = r;
        r = p - mul;
        const int lbz = (oldr > 0) ? (oldr + 2) / 2 : 1;
        const int rbz = (r > 0) ? ph - (r + 1) / 2 : ph;
        if (r > 0) {
            const double numer = ub - ua;
            for (int k = p; k > mul; --k) alfs[k - mul - 1] = numer / (U[a + k] - ua);
            for (int j = 1; j <= r; ++j) {
                const int save = r - j, s = mul + j;
                for (int k = p; k >= s; --k) bpts[k] = lerp(bpts[k - 1], bpts[k], alfs[k - s]);
                Nextbpts[save] = bpts[p];
            }
        }
        for (int i = lbz; i <= ph; ++i) {
            ebpts[i] = {0, 0, 0, 0};
            const int mpi = std::min(p, i);
            for (int j = std::max(0, i - t); j <= mpi; ++j)
                for (int c = 0; c < 4; ++c) ebpts[i][c] += bezalfs[i][j] * bpts[j][c];
        }
        if (oldr > 1) {
            int first = kind - 2, last = kind;
            const double den = ub - ua;
            const double bet = (ub - Uh[kind - 1]) / den;
            for (int tr = 1; tr < oldr; ++tr) {
                int i = first, j = last, kj = j - kind + 1;
                while (j - i > tr) {
                    if (i < cind) {
                        const double alf = (ub - Uh[i]) / (ua - Uh[i]);
                        Qw[i] = lerp(Qw[i - 1], Qw[i], alf);
                    }
                    if (j >= lbz) {
                        if (j - tr <= kind - ph + oldr) {
                            const double gam = (ub - Uh[j - tr]) / den;
                            ebpts[kj] = lerp(ebpts[kj + 1], ebpts[kj], gam);
                        } else {
                            ebpts[kj] = lerp(ebpts[kj + 1], ebpts[kj], bet);
                        }
                    }
                    ++i; --j; --kj;
                }
                --first; ++last;
            }
        }
        if (a != p)
            for (int i = 0; i < ph - oldr; ++i) Uh[kind++] = ua;
        for (int j = lbz; j <= rbz; ++j) Qw[cind++] = ebpts[j];
        if (b < m) {
            for (int j = 0; j < r; ++j) bpts[j] = Nextbpts[j];
            for (int j = r; j <= p; ++j) bpts[j] = Pw[b - p + j];
            a = b; ++b; ua = ub;
        } else {
            for (int i = 0; i <= ph; ++i) Uh[kind + i] = ub;
        }
    }
    const int nh = mh - ph - 1;
    Qw.resize(nh + 1);
    Uh.resize(nh + ph + 2);
    U = std::move(Uh);
    Pw = std::move(Qw);
}

// Apply a univariate transform to every line of the net along `dir`.
template <typename Fn>
NurbsPatch transform_direction(const NurbsPatch& patch, int dir, Fn&& fn) {
    const HomogeneousNet hnet = to_homogeneous(patch.net());
    const auto& dims = hnet.dims;
    const int p = patch.degree(dir);

    std::vector<double> newU;
    std::array<int, 3> line_len{dims[0], dims[1], dims[2]};

    // other-direction extents
    std::array<int, 3> o{0, 1, 2};
    std::swap(o[0], o[dir]);  // o[0] = dir, o[1], o[2] = others
    const int nb = line_len[o[1]], nc = line_len[o[2]];

    std::vector<std::vector<HPoint>> lines(size_t(nb) * nc);
    for (int c = 0; c < nc; ++c)
        for (int b = 0; b < nb; ++b) {
            std::vector<HPoint> line(line_len[dir]);
            std::array<int, 3> ijk;
            ijk[o[1]] = b;
            ijk[o[2]] = c;
            for (int a = 0; a < line_len[dir]; ++a) {
                ijk[dir] = a;
                line[a] = hnet.points[ijk[0] + dims[0] * (ijk[1] + size_t(dims[1]) * ijk[2])];
            }
            std::vector<double> Uwork(patch.kv(dir).knots());
            fn(p, Uwork, line);
            if (b == 0 && c == 0) newU = Uwork;
            lines[b + size_t(nb) * c] = std::move(line);
        }

    const int new_len = int(lines[0].size());
    HomogeneousNet out;
    out.dims = dims;
    out.dims[dir] = new_len;
    out.points.resize(size_t(out.dims[0]) * out.dims[1] * out.dims[2]);
    for (int c = 0; c < nc; ++c)
        for (int b = 0; b < nb; ++b)
            for (int a = 0; a < new_len; ++a) {
                std::array<int, 3> ijk;
                ijk[o[1]] = b;
                ijk[o[2]] = c;
                ijk[dir] = a;
                out.points[ijk[0] + out.dims[0] * (ijk[1] + size_t(out.dims[1]) * ijk[2])] =
                    lines[b + size_t(nb) * c][a];
            }

    std::vector<KnotVector> kvs;
    for (int d = 0; d < patch.dim(); ++d)
        kvs.push_back(d == dir ? KnotVector(fn.new_degree(p), newU) : patch.kv(d));
    return NurbsPatch(std::move(kvs), from_homogeneous(out), patch.spatial_dim());
}

struct InsertOp {
    double u;
    int times;
    void operator()(int p, std::vector<double>& U, std::vector<HPoint>& P) const {
        for (int k = 0; k < times; ++k) insert_once(p, U, P, u);
    }
    int new_degree(int p) const { return p; }
};

struct ElevateOp {
    int t;
    void operator()(int p, std::vector<double>& U, std::vector<HPoint>& P) const {
        elevate_curve(p, t, U, P);
    }
    int new_degree(int p) const { return p + t; }
};

} // namespace

NurbsPatch insert_knot(const NurbsPatch& patch, int direction, double xi_new, int times) {
    if (direction < 0 || direction >= patch.dim())
        throw std::invalid_argument("insert_knot: invalid direction");
    const KnotVector& kv = patch.kv(direction);
    if (xi_new <= kv.front() || xi_new >= kv.back())
        throw std::invalid_argument("insert_knot: knot must lie strictly inside the domain");
    if (kv.multiplicity(xi_new) + times > kv.degree())
        throw std::invalid_argument("insert_knot: multiplicity would exceed degree");
    if (times < 1) throw std::invalid_argument("insert_knot: times must be >= 1");
    return transform_direction(patch, direction, InsertOp{xi_new, times});
}

NurbsPatch elevate_degree(const NurbsPatch& patch, int direction, int raise) {
    if (direction < 0 || direction >= patch.dim())
        throw std::invalid_argument("elevate_degree: invalid direction");
    if (raise < 1) throw std::invalid_argument("elevate_degree: raise must be >= 1");
    if (!patch.kv(direction).is_open())
        throw std::invalid_argument("elevate_degree: open knot vector required");
    return transform_direction(patch, direction, ElevateOp{raise});
}

NurbsPatch refine_uniform(const NurbsPatch& patch, int levels) {
    NurbsPatch out = patch;
    for (int lvl = 0; lvl < levels; ++lvl)
        for (int d = 0; d < out.dim(); ++d) {
            const std::vector<double> uniq = out.kv(d).unique_knots();
            for (size_t i = 0; i + 1 < uniq.size(); ++i)
                out = insert_knot(out, d, 0.5 * (uniq[i] + uniq[i + 1]), 1);
        }
    return out;
}

} // namespace iga
