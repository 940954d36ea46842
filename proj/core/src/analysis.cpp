#include "cwg/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cwg {

namespace {

constexpr double kPi = std::numbers::pi;

Mesh build_family(MeshKind kind, int n, const ConvergenceOptions& opts) {
    switch (kind) {
        case MeshKind::UniformTriangle: return build_uniform_triangle_mesh(n);
        case MeshKind::UniformRectangle: return build_uniform_rectangle_mesh(n);
        case MeshKind::PerturbedTriangle:
            return build_perturbed_triangle_mesh(n, opts.jitter, opts.seed);
    }
    throw std::invalid_argument("unknown mesh family");
}

}  // namespace

ManufacturedCase manufactured_case_1() {
    ManufacturedCase mc;
    mc.name = "example1";
    mc.u = [](const Eigen::Vector2d& p) { return std::sin(kPi * p.x()) * std::sin(kPi * p.y()); };
    mc.grad_u = [](const Eigen::Vector2d& p) {
        return Eigen::Vector2d(kPi * std::cos(kPi * p.x()) * std::sin(kPi * p.y()),
                               kPi * std::sin(kPi * p.x()) * std::cos(kPi * p.y()));
    };
    mc.a = identity_coefficient();
    mc.f = [](const Eigen::Vector2d& p) {
        return 2.0 * kPi * kPi * std::sin(kPi * p.x()) * std::sin(kPi * p.y());
    };
    return mc;
}

ManufacturedCase manufactured_case_2() {
    ManufacturedCase mc;
    mc.name = "example2";
    mc.u = [](const Eigen::Vector2d& p) {
        return p.x() * (1.0 - p.x()) * p.y() * (1.0 - p.y());
    };
    mc.grad_u = [](const Eigen::Vector2d& p) {
        return Eigen::Vector2d((1.0 - 2.0 * p.x()) * p.y() * (1.0 - p.y()),
                               p.x() * (1.0 - p.x()) * (1.0 - 2.0 * p.y()));
    };
    mc.a = identity_coefficient();
    mc.f = [](const Eigen::Vector2d& p) {
        return 2.0 * (p.x() * (1.0 - p.x()) + p.y() * (1.0 - p.y()));
    };
    return mc;
}

ManufacturedCase manufactured_case_by_name(const std::string& name) {
    if (name == "example1") return manufactured_case_1();
    if (name == "example2") return manufactured_case_2();
    throw std::invalid_argument("unknown case: " + name + " (expected example1 or example2)");
}

namespace {

/// Coefficients of Qt_h u minus u_h on one cell, local layout.
Eigen::VectorXd interpolant_residual(const Mesh& mesh, const DofMap& dofmap, int cell,
                                     const WeakFunction& u_h, const ManufacturedCase& mc) {
    const int k = dofmap.degree();
    const auto poly = mesh.cell_polygon(cell);
    const int m = static_cast<int>(poly.size());
    const LocalDofLayout layout = LocalDofLayout::create(m, k);
    const std::vector<int> dofs = dofmap.cell_dofs(mesh, cell);

    Eigen::VectorXd e(layout.total());
    e.head(layout.n0) = project_q0(mc.u, poly, k);

    const EdgeBasis ebasis(k);
    for (int side = 0; side < m; ++side) {
        const Eigen::Vector2d a = poly[side];
        const Eigen::Vector2d b = poly[(side + 1) % m];
        for (int node = 0; node <= k; ++node)
            e[layout.boundary_dof(side, node)] = mc.u(a + ebasis.node(node) * (b - a));
    }
    for (int i = 0; i < layout.total(); ++i) e[i] -= u_h.coeffs[dofs[i]];
    return e;
}

}  // namespace

double energy_error(const Mesh& mesh, int k, const WeakFunction& u_h, const ManufacturedCase& mc) {
    const DofMap dofmap(mesh, k);
    double acc = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalSystem local = build_local_system(mesh, c, k, mc.a, mc.f);
        const Eigen::VectorXd e = interpolant_residual(mesh, dofmap, c, u_h, mc);
        acc += e.dot(local.energy() * e);
    }
    return std::sqrt(std::max(acc, 0.0));
}

double l2_error(const Mesh& mesh, int k, const WeakFunction& u_h, const ManufacturedCase& mc) {
    const DofMap dofmap(mesh, k);
    double acc = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto poly = mesh.cell_polygon(c);
        const CellBasis basis = CellBasis::for_polygon(k, poly);
        const QuadratureRule quad = polygon_quadrature(poly, default_exactness(k));
        Eigen::VectorXd d = project_q0(mc.u, poly, k);
        for (int j = 0; j < basis.size(); ++j) d[j] -= u_h.coeffs[dofmap.cell_interior_dof(c, j)];
        acc += d.dot(cell_mass_matrix(basis, quad) * d);
    }
    return std::sqrt(std::max(acc, 0.0));
}

std::vector<ConvergenceRow> run_convergence(const ManufacturedCase& mc, MeshKind kind,
                                            const std::vector<int>& levels,
                                            const ConvergenceOptions& opts) {
    if (levels.empty()) throw std::invalid_argument("run_convergence: empty level list");
    std::vector<ConvergenceRow> rows;
    rows.reserve(levels.size());
    for (int n : levels) {
        const Mesh mesh = build_family(kind, n, opts);
        const DofMap dofmap(mesh, opts.k);

        WeakFunction u_h;
        if (opts.path == SolvePath::Full) {
            const GlobalSystem sys = assemble(mesh, opts.k, mc.a, mc.f, opts.exactness);
            u_h = solve_full(sys, dofmap, opts.cg);
        } else {
            u_h = solve_condensed(mesh, opts.k, mc.a, mc.f, opts.cg, nullptr, opts.exactness);
        }

        ConvergenceRow row;
        row.h = 1.0 / n;
        row.dof = dofmap.total();
        row.energy_err = energy_error(mesh, opts.k, u_h, mc);
        row.l2_err = l2_error(mesh, opts.k, u_h, mc);
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double hr = std::log(prev.h / row.h);
            row.energy_rate = std::log(prev.energy_err / row.energy_err) / hr;
            row.l2_rate = std::log(prev.l2_err / row.l2_err) / hr;
        }
        rows.push_back(row);
    }
    return rows;
}

long dof_count(Scheme scheme, MeshKind family, int n, int k) {
    if (n < 1) throw std::invalid_argument("dof_count: n must be >= 1");
    if (k < 1) throw std::invalid_argument("dof_count: k must be >= 1");
    const long nl = n;
    const bool tri = family != MeshKind::UniformRectangle;
    const long n_cells = tri ? 2 * nl * nl : nl * nl;
    const long n_vertices = (nl + 1) * (nl + 1);
    const long n_edges = tri ? 3 * nl * nl + 2 * nl : 2 * nl * nl + 2 * nl;

    switch (scheme) {
        case Scheme::CWG:
            return n_cells * (k + 1) * (k + 2) / 2 + n_vertices + (k - 1) * n_edges;
        case Scheme::CWGSchur:
            return n_vertices + (k - 1) * n_edges;
        case Scheme::CG:
            if (k != 1) throw std::invalid_argument("dof_count: CG column is defined for k=1");
            return n_vertices;
        case Scheme::WG:
            if (k != 1 || !tri)
                throw std::invalid_argument(
                    "dof_count: WG column is defined for k=1 triangle meshes");
            return 9 * nl * nl + 2 * nl;
        case Scheme::WGSchur:
            if (k != 1 || !tri)
                throw std::invalid_argument(
                    "dof_count: WG-Schur column is defined for k=1 triangle meshes");
            return 3 * nl * nl + 2 * nl;
    }
    throw std::invalid_argument("dof_count: unknown scheme");
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    out << "h,dof,energy_error,energy_rate,l2_error,l2_rate\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.10g,%ld,%.6e,", row.h, row.dof, row.energy_err);
        out << buf;
        if (row.energy_rate) {
            std::snprintf(buf, sizeof(buf), "%.4f", *row.energy_rate);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.6e,", row.l2_err);
        out << buf;
        if (row.l2_rate) {
            std::snprintf(buf, sizeof(buf), "%.4f", *row.l2_rate);
            out << buf;
        }
        out << '\n';
    }
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %-10s %-14s %-8s %-14s %-8s\n", "h", "dof",
                  "energy_err", "order", "l2_err", "order");
    out << line;
    for (const auto& row : rows) {
        char er[16] = "";
        char lr[16] = "";
        if (row.energy_rate) std::snprintf(er, sizeof(er), "%.4f", *row.energy_rate);
        if (row.l2_rate) std::snprintf(lr, sizeof(lr), "%.4f", *row.l2_rate);
        std::snprintf(line, sizeof(line), "%-10.6g %-10ld %-14.4e %-8s %-14.4e %-8s\n", row.h,
                      row.dof, row.energy_err, er, row.l2_err, lr);
        out << line;
    }
    return out.str();
}

}  // namespace cwg
