#include "cwg/wgcore.hpp"

#include <cmath>
#include <stdexcept>

namespace cwg {

Coefficient identity_coefficient() {
    return [](const Eigen::Vector2d&) { return Eigen::Matrix2d::Identity(); };
}

LocalDofLayout LocalDofLayout::create(int edge_count, int k) {
    if (edge_count < 3) throw std::invalid_argument("LocalDofLayout: fewer than 3 edges");
    if (k < 1) throw std::invalid_argument("LocalDofLayout: k must be >= 1");
    LocalDofLayout layout;
    layout.k = k;
    layout.m = edge_count;
    layout.n0 = (k + 1) * (k + 2) / 2;
    layout.nb = edge_count * k;
    return layout;
}

int LocalDofLayout::boundary_dof(int side, int node) const {
    if (node == 0) return vertex_dof(side);
    if (node == k) return vertex_dof((side + 1) % m);
    return edge_interior_dof(side, node);
}

namespace {

void check_spd_coefficient(const Eigen::Matrix2d& a, const Eigen::Vector2d& p) {
    const double scale = a.cwiseAbs().maxCoeff();
    if (std::abs(a(0, 1) - a(1, 0)) > 1e-10 * std::max(scale, 1.0) || a(0, 0) <= 0.0 ||
        a.determinant() <= 0.0) {
        throw std::runtime_error("coefficient a is not SPD at point (" + std::to_string(p.x()) +
                                 ", " + std::to_string(p.y()) + ")");
    }
}

/// Outward unit normal of side `side` of a CCW cell.
Eigen::Vector2d side_normal(const std::vector<Eigen::Vector2d>& poly, int side) {
    const int m = static_cast<int>(poly.size());
    const Eigen::Vector2d d = poly[(side + 1) % m] - poly[side];
    return Eigen::Vector2d(d.y(), -d.x()).normalized();
}

Eigen::MatrixXd vector_mass_matrix(const VectorBasis& vbasis, const QuadratureRule& quad) {
    const int ns = vbasis.scalar().size();
    Eigen::MatrixXd ms = cell_mass_matrix(vbasis.scalar(), quad);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * ns, 2 * ns);
    m.topLeftCorner(ns, ns) = ms;
    m.bottomRightCorner(ns, ns) = ms;
    return m;
}

}  // namespace

Eigen::MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell, int k,
                                     const LocalDofLayout& layout, int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    const auto poly = mesh.cell_polygon(cell);
    const CellBasis cbasis = CellBasis::for_polygon(k, poly);
    const VectorBasis vbasis(k, cbasis.center(), cbasis.scale());
    const EdgeBasis ebasis(k);
    const int nq = vbasis.size();

    const QuadratureRule cell_quad = polygon_quadrature(poly, exactness);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nq, layout.total());

    // -(phi_j, div q_i)_T
    for (int q = 0; q < cell_quad.size(); ++q) {
        const auto& p = cell_quad.points[q];
        const double w = cell_quad.weights[q];
        for (int i = 0; i < nq; ++i) {
            const double div = vbasis.divergence(i, p);
            if (div == 0.0) continue;
            for (int j = 0; j < layout.n0; ++j)
                b(i, j) -= w * div * cbasis.eval(j, p);
        }
    }

    // <phi_b, q . n>_{dT}
    for (int side = 0; side < layout.m; ++side) {
        const Eigen::Vector2d a = poly[side];
        const Eigen::Vector2d bb = poly[(side + 1) % layout.m];
        const Eigen::Vector2d n = side_normal(poly, side);
        const QuadratureRule equad = edge_quadrature(a, bb, exactness);
        const double len = (bb - a).norm();
        for (int q = 0; q < equad.size(); ++q) {
            const auto& p = equad.points[q];
            const double w = equad.weights[q];
            const double t = (p - a).norm() / len;
            for (int i = 0; i < nq; ++i) {
                const double qn = vbasis.eval(i, p).dot(n);
                if (qn == 0.0) continue;
                for (int node = 0; node <= k; ++node)
                    b(i, layout.boundary_dof(side, node)) += w * qn * ebasis.eval(node, t);
            }
        }
    }

    const Eigen::MatrixXd mvec = vector_mass_matrix(vbasis, cell_quad);
    Eigen::LLT<Eigen::MatrixXd> llt(mvec);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("weak_gradient_matrix: degenerate cell " + std::to_string(cell));
    return llt.solve(b);
}

namespace {

Eigen::MatrixXd stiffness_from_gradient(const Mesh& mesh, int cell, int k, const Coefficient& a,
                                        const Eigen::MatrixXd& g, int exactness) {
    const auto poly = mesh.cell_polygon(cell);
    const VectorBasis vbasis = VectorBasis::for_polygon(k, poly);
    const QuadratureRule quad = polygon_quadrature(poly, exactness);
    const int nq = vbasis.size();

    Eigen::MatrixXd ma = Eigen::MatrixXd::Zero(nq, nq);
    Eigen::MatrixXd vals(2, nq);
    for (int q = 0; q < quad.size(); ++q) {
        const auto& p = quad.points[q];
        const Eigen::Matrix2d aq = a(p);
        check_spd_coefficient(aq, p);
        for (int i = 0; i < nq; ++i) vals.col(i) = vbasis.eval(i, p);
        ma += quad.weights[q] * vals.transpose() * aq * vals;
    }
    return g.transpose() * ma * g;
}

}  // namespace

Eigen::MatrixXd local_stiffness(const Mesh& mesh, int cell, int k, const Coefficient& a,
                                const LocalDofLayout& layout, int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    const Eigen::MatrixXd g = weak_gradient_matrix(mesh, cell, k, layout, exactness);
    return stiffness_from_gradient(mesh, cell, k, a, g, exactness);
}

Eigen::MatrixXd local_stabilizer(const Mesh& mesh, int cell, int k, const LocalDofLayout& layout) {
    const auto poly = mesh.cell_polygon(cell);
    const CellBasis cbasis = CellBasis::for_polygon(k, poly);
    const EdgeBasis ebasis(k);
    // Penalty length scale: the longest edge of the cell. For triangles
    // this is the diameter; on quadrilaterals it keeps the weight tied
    // to the edge geometry the trace terms live on.
    double h_edge = 0.0;
    for (int side = 0; side < layout.m; ++side)
        h_edge = std::max(h_edge, (poly[(side + 1) % layout.m] - poly[side]).norm());
    const double inv_h = 1.0 / h_edge;

    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(layout.total(), layout.total());
    for (int side = 0; side < layout.m; ++side) {
        const Eigen::Vector2d a = poly[side];
        const Eigen::Vector2d b = poly[(side + 1) % layout.m];
        const double len = (b - a).norm();

        // trace difference v_0|_e - v_b in the edge Lagrange basis
        Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(k + 1, layout.total());
        for (int node = 0; node <= k; ++node) {
            const Eigen::Vector2d p = a + ebasis.node(node) * (b - a);
            for (int j = 0; j < layout.n0; ++j) diff(node, j) = cbasis.eval(j, p);
            diff(node, layout.boundary_dof(side, node)) = -1.0;
        }
        s += inv_h * diff.transpose() * edge_mass_matrix(k, len) * diff;
    }
    return s;
}

Eigen::VectorXd local_load(const Mesh& mesh, int cell, int k, const ScalarField& f,
                           const LocalDofLayout& layout, int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    const auto poly = mesh.cell_polygon(cell);
    const CellBasis cbasis = CellBasis::for_polygon(k, poly);
    const QuadratureRule quad = polygon_quadrature(poly, exactness);

    Eigen::VectorXd load = Eigen::VectorXd::Zero(layout.total());
    for (int q = 0; q < quad.size(); ++q) {
        const double fv = quad.weights[q] * f(quad.points[q]);
        for (int j = 0; j < layout.n0; ++j) load[j] += fv * cbasis.eval(j, quad.points[q]);
    }
    return load;
}

LocalSystem build_local_system(const Mesh& mesh, int cell, int k, const Coefficient& a,
                               const ScalarField& f, int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    const LocalDofLayout layout =
        LocalDofLayout::create(static_cast<int>(mesh.cells[cell].size()), k);
    LocalSystem sys;
    sys.G = weak_gradient_matrix(mesh, cell, k, layout, exactness);
    sys.K = stiffness_from_gradient(mesh, cell, k, a, sys.G, exactness);
    sys.S = local_stabilizer(mesh, cell, k, layout);
    sys.F = local_load(mesh, cell, k, f, layout, exactness);
    sys.h_T = mesh.cell_diameter[cell];
    return sys;
}

}  // namespace cwg
