#include "iga/assembly.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace iga {

DenseMatrix elasticity_D(const MaterialModel& mat) {
    const double E = mat.E, nu = mat.nu;
    if (!(E > 0.0) || nu <= -1.0 || nu >= 0.5)
        throw std::invalid_argument("material: need E > 0 and -1 < nu < 0.5");
    if (mat.mode != ElasticityMode::PlaneStress && nu > 0.49999)
        std::cerr << "warning: nu ~ 0.5, near-incompressible conditioning\n";

    if (mat.mode == ElasticityMode::PlaneStress) {
        DenseMatrix D(3, 3);
        const double f = E / (1.0 - nu * nu);
        D(0, 0) = D(1, 1) = f;
        D(0, 1) = D(1, 0) = f * nu;
        D(2, 2) = f * 0.5 * (1.0 - nu);
        return D;
    }
    if (mat.mode == ElasticityMode::PlaneStrain) {
        DenseMatrix D(3, 3);
        const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
        D(0, 0) = D(1, 1) = f * (1.0 - nu);
        D(0, 1) = D(1, 0) = f * nu;
        D(2, 2) = f * 0.5 * (1.0 - 2.0 * nu);
        return D;
    }
    DenseMatrix D(6, 6);
    const double lam = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double mu = E / (2.0 * (1.0 + nu));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) D(i, j) = lam;
        D(i, i) = lam + 2.0 * mu;
        D(3 + i, 3 + i) = mu;
    }
    return D;
}

void strain_displacement(const MappedPoint& mp, int ds, DenseMatrix& B) {
    const int n = int(mp.R.size());
    if (ds == 2) {
        if (B.rows() != 3 || B.cols() != 2 * n) B = DenseMatrix(3, 2 * n);
        B.set_zero();
        for (int a = 0; a < n; ++a) {
            const double dx = mp.dRdx(a, 0), dy = mp.dRdx(a, 1);
            B(0, 2 * a) = dx;
            B(1, 2 * a + 1) = dy;
            B(2, 2 * a) = dy;
            B(2, 2 * a + 1) = dx;
        }
    } else {
        if (B.rows() != 6 || B.cols() != 3 * n) B = DenseMatrix(6, 3 * n);
        B.set_zero();
        for (int a = 0; a < n; ++a) {
            const double dx = mp.dRdx(a, 0), dy = mp.dRdx(a, 1), dz = mp.dRdx(a, 2);
            B(0, 3 * a) = dx;
            B(1, 3 * a + 1) = dy;
            B(2, 3 * a + 2) = dz;
            B(3, 3 * a + 1) = dz;  // yz
            B(3, 3 * a + 2) = dy;
            B(4, 3 * a) = dz;      // xz
            B(4, 3 * a + 2) = dx;
            B(5, 3 * a) = dy;      // xy
            B(5, 3 * a + 1) = dx;
        }
    }
}

std::array<int, 3> default_orders(const NurbsPatch& patch) {
    std::array<int, 3> o{1, 1, 1};
    for (int d = 0; d < patch.dim(); ++d) o[d] = patch.degree(d) + 1;
    return o;
}

int assembly_thread_count() {
    if (const char* env = std::getenv("IGACORE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

void parallel_elements(int n_el, const std::function<void(int)>& body) {
    const int nthreads = std::min(assembly_thread_count(), n_el > 0 ? n_el : 1);
    if (nthreads <= 1) {
        for (int e = 0; e < n_el; ++e) body(e);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            try {
                for (int e = next.fetch_add(1); e < n_el; e = next.fetch_add(1)) body(e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

AssembledSystem assemble_poisson_1d(const NurbsPatch& patch, const IgaMesh& mesh,
                                    const std::function<double(double)>& source, int quad_order,
                                    int source_quad_order) {
    if (patch.dim() != 1) throw std::invalid_argument("assemble_poisson_1d: 1D patch required");
    AssembledSystem sys;
    sys.init(mesh.n_np);

    const int korder = quad_order > 0 ? quad_order : patch.degree(0) + 1;
    const int forder = source_quad_order > 0 ? source_quad_order : korder;
    const QuadratureRule krule = gauss_rule(korder, 1);
    const QuadratureRule frule = gauss_rule(forder, 1);

    std::vector<std::vector<Triplet>> slots(mesh.n_el);
    std::vector<std::vector<double>> floads(mesh.n_el);
    parallel_elements(mesh.n_el, [&](int e) {
        const auto& conn = mesh.element[e];
        const int n = int(conn.size());
        DenseMatrix ke(n, n);
        for (size_t g = 0; g < krule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, krule.points[g]);
            const double w = mp.detJ * krule.weights[g];
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) ke(a, b) += mp.dRdx(a, 0) * mp.dRdx(b, 0) * w;
        }
        std::vector<double> fe(n, 0.0);
        for (size_t g = 0; g < frule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, frule.points[g]);
            const double w = mp.detJ * frule.weights[g];
            for (int a = 0; a < n; ++a) fe[a] += mp.R[a] * source(mp.phys.x) * w;
        }
        auto& out = slots[e];
        out.reserve(size_t(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out.push_back({conn[a], conn[b], ke(a, b)});
        floads[e] = std::move(fe);
    });
    for (int e = 0; e < mesh.n_el; ++e) {
        sys.triplets.insert(sys.triplets.end(), slots[e].begin(), slots[e].end());
        const auto& conn = mesh.element[e];
        for (size_t a = 0; a < conn.size(); ++a) sys.F[conn[a]] += floads[e][a];
    }
    return sys;
}

AssembledSystem assemble_elasticity(const NurbsPatch& patch, const IgaMesh& mesh,
                                    const MaterialModel& mat, int quad_order) {
    const int ds = patch.spatial_dim();
    if (ds != 2 && ds != 3) throw std::invalid_argument("assemble_elasticity: 2D/3D only");
    if ((ds == 3) != (mat.mode == ElasticityMode::Solid3D))
        throw std::invalid_argument("assemble_elasticity: material mode inconsistent with patch");

    AssembledSystem sys;
    sys.init(ds * mesh.n_np);
    const DenseMatrix D = elasticity_D(mat);

    std::array<int, 3> orders = default_orders(patch);
    if (quad_order > 0) orders = {quad_order, quad_order, quad_order};
    const QuadratureRule rule = gauss_rule(orders, patch.dim());

    std::vector<std::vector<Triplet>> slots(mesh.n_el);
    parallel_elements(mesh.n_el, [&](int e) {
        const auto& conn = mesh.element[e];
        const int n = int(conn.size());
        DenseMatrix ke(ds * n, ds * n);
        DenseMatrix B;
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            strain_displacement(mp, ds, B);
            accumulate_AtBA(B, D, mp.detJ * rule.weights[g], ke);
        }
        // scatter via the sctrB pattern: control point A owns dofs ds*A..ds*A+ds-1
        auto& out = slots[e];
        out.reserve(size_t(ds * n) * ds * n);
        for (int a = 0; a < n; ++a)
            for (int ca = 0; ca < ds; ++ca)
                for (int b = 0; b < n; ++b)
                    for (int cb = 0; cb < ds; ++cb)
                        out.push_back({ds * conn[a] + ca, ds * conn[b] + cb,
                                       ke(ds * a + ca, ds * b + cb)});
    });
    for (auto& s : slots) sys.triplets.insert(sys.triplets.end(), s.begin(), s.end());
    return sys;
}

void assemble_body_force(const NurbsPatch& patch, const IgaMesh& mesh,
                         const std::function<Vec3(const Vec3&)>& body, AssembledSystem& sys,
                         int quad_order) {
    const int ds = patch.spatial_dim();
    std::array<int, 3> orders = default_orders(patch);
    if (quad_order > 0) orders = {quad_order, quad_order, quad_order};
    const QuadratureRule rule = gauss_rule(orders, patch.dim());
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& conn = mesh.element[e];
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            const Vec3 b = body(mp.phys);
            const double w = mp.detJ * rule.weights[g];
            for (size_t a = 0; a < conn.size(); ++a)
                for (int c = 0; c < ds; ++c) sys.F[ds * conn[a] + c] += mp.R[a] * b[c] * w;
        }
    }
}

void assemble_traction(const BoundaryMesh& bnd, const std::function<Vec3(const Vec3&)>& traction,
                       AssembledSystem& sys, int quad_order) {
    const NurbsPatch& bp = bnd.patch;
    const int ds = bp.spatial_dim();
    std::array<int, 3> orders = default_orders(bp);
    if (quad_order > 0) orders = {quad_order, quad_order, quad_order};
    const QuadratureRule rule = gauss_rule(orders, bp.dim());
    for (int e = 0; e < bnd.mesh.n_el; ++e) {
        const auto& conn = bnd.mesh.element[e];
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(bp, bnd.mesh, e, rule.points[g]);
            const Vec3 t = traction(mp.phys);
            const double w = mp.detJ * rule.weights[g];
            for (size_t a = 0; a < conn.size(); ++a) {
                const int A = bnd.control_map[conn[a]];
                for (int c = 0; c < ds; ++c) sys.F[ds * A + c] += mp.R[a] * t[c] * w;
            }
        }
    }
}

} // namespace iga
