#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cwg/assembly.hpp"
#include "cwg/analysis.hpp"

#include <algorithm>
#include <numeric>

using namespace cwg;

namespace {

ScalarField zero_field() {
    return [](const Eigen::Vector2d&) { return 0.0; };
}
ScalarField unit_field() {
    return [](const Eigen::Vector2d&) { return 1.0; };
}

Eigen::VectorXd global_constant(const Mesh& mesh, const DofMap& dofmap, double c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dofmap.total());
    for (int cell = 0; cell < mesh.num_cells(); ++cell)
        v[dofmap.cell_interior_dof(cell, 0)] = c;  // constant basis function
    for (int dof = dofmap.interior_size(); dof < dofmap.total(); ++dof) v[dof] = c;
    return v;
}

}  // namespace

TEST_CASE("dofmap totals reproduce the published counts") {
    CHECK(DofMap(build_uniform_triangle_mesh(8), 1).total() == 465);
    CHECK(DofMap(build_uniform_triangle_mesh(32), 1).total() == 7233);
    CHECK(DofMap(build_uniform_rectangle_mesh(8), 1).total() == 273);
}

TEST_CASE("dofmap totals match the closed forms across k and n") {
    for (int n : {8, 16, 32, 64, 128}) {
        for (int k : {1, 2, 3}) {
            const Mesh tri = build_uniform_triangle_mesh(n);
            CHECK(DofMap(tri, k).total() ==
                  dof_count(Scheme::CWG, MeshKind::UniformTriangle, n, k));
            const Mesh rect = build_uniform_rectangle_mesh(n);
            CHECK(DofMap(rect, k).total() ==
                  dof_count(Scheme::CWG, MeshKind::UniformRectangle, n, k));
        }
    }
}

TEST_CASE("skeleton dofs are shared and boundary mask covers the boundary") {
    const Mesh mesh = build_uniform_triangle_mesh(4);
    const DofMap dofmap(mesh, 2);
    // every cell sees its vertices' skeleton dofs
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto dofs = dofmap.cell_dofs(mesh, c);
        for (size_t i = 0; i < mesh.cells[c].size(); ++i)
            CHECK(dofs[3 * 2 + i] == dofmap.vertex_dof(mesh.cells[c][i]));
    }
    int masked = 0;
    for (int d = 0; d < dofmap.total(); ++d) masked += dofmap.is_boundary(d) ? 1 : 0;
    // 16 boundary vertices + 16 boundary edges with one interior node each
    CHECK(masked == 32);
    CHECK(dofmap.num_boundary() == 32);
}

TEST_CASE("one-cell system is solvable with positive interior mean") {
    const Mesh mesh = build_uniform_rectangle_mesh(1);
    const DofMap dofmap(mesh, 1);
    const GlobalSystem sys = assemble(mesh, 1, identity_coefficient(), unit_field());
    // all skeleton dofs are constrained; 3 interior unknowns remain
    CHECK(sys.A.dim() == 3);
    const WeakFunction u = solve_full(sys, dofmap);

    // dense oracle on the same free system
    const Eigen::VectorXd dense = dense_solve_spd(sys.A.to_dense(), sys.b);
    for (int i = 0; i < 3; ++i)
        CHECK(u.coeffs[sys.global_index[i]] == doctest::Approx(dense[i]).epsilon(1e-10));

    const auto poly = mesh.cell_polygon(0);
    const CellBasis basis = CellBasis::for_polygon(1, poly);
    const QuadratureRule quad = polygon_quadrature(poly, 4);
    double mean = 0.0;
    for (int q = 0; q < quad.size(); ++q)
        for (int j = 0; j < basis.size(); ++j)
            mean += quad.weights[q] * u.coeffs[j] * basis.eval(j, quad.points[q]);
    CHECK(mean > 0.0);
}

TEST_CASE("assembled matrix is symmetric") {
    const Mesh mesh = build_uniform_triangle_mesh(4);
    const GlobalSystem sys = assemble(mesh, 1, identity_coefficient(), unit_field());
    double amax = 0.0;
    for (double v : sys.A.values()) amax = std::max(amax, std::abs(v));
    CHECK(sys.A.symmetry_defect() <= 1e-12 * amax);
}

TEST_CASE("global constant has zero energy before boundary elimination") {
    const Mesh mesh = build_uniform_triangle_mesh(3);
    const DofMap dofmap(mesh, 1);
    auto [a, rhs] = assemble_unconstrained(mesh, 1, identity_coefficient(), zero_field());
    const Eigen::VectorXd ones = global_constant(mesh, dofmap, 1.0);
    CHECK(std::abs(ones.dot(a * ones)) <= 1e-11);
}

TEST_CASE("SPD certificate on small constrained systems") {
    for (int k : {1, 2}) {
        const Mesh mesh = build_uniform_triangle_mesh(3);
        const GlobalSystem sys = assemble(mesh, k, identity_coefficient(), unit_field());
        REQUIRE(sys.A.dim() <= 500);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.A.to_dense());
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("zero forcing gives the zero solution") {
    const Mesh mesh = build_uniform_triangle_mesh(4);
    const DofMap dofmap(mesh, 1);
    const GlobalSystem sys = assemble(mesh, 1, identity_coefficient(), zero_field());
    const WeakFunction u = solve_full(sys, dofmap);
    CHECK(u.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("CG agrees with the dense oracle on a n=2 mesh") {
    const Mesh mesh = build_uniform_triangle_mesh(2);
    const DofMap dofmap(mesh, 1);
    const GlobalSystem sys = assemble(mesh, 1, identity_coefficient(), unit_field());
    SolverReport report;
    const WeakFunction u = solve_full(sys, dofmap, {1e-12, -1}, &report);
    CHECK(report.converged);
    const Eigen::VectorXd dense = dense_solve_spd(sys.A.to_dense(), sys.b);
    for (size_t i = 0; i < sys.global_index.size(); ++i)
        CHECK(u.coeffs[sys.global_index[i]] ==
              doctest::Approx(dense[static_cast<int>(i)]).epsilon(1e-10));
}

TEST_CASE("solution is invariant under cell renumbering") {
    const Mesh mesh = build_uniform_triangle_mesh(3);
    // reversed cell order
    std::vector<std::vector<int>> perm_cells(mesh.cells.rbegin(), mesh.cells.rend());
    const Mesh permuted = Mesh::from_cells(mesh.vertices, perm_cells);

    const int k = 1;
    const auto mc = manufactured_case_1();
    const DofMap d1(mesh, k);
    const DofMap d2(permuted, k);
    const WeakFunction u1 = solve_full(assemble(mesh, k, mc.a, mc.f), d1, {1e-12, -1});
    const WeakFunction u2 = solve_full(assemble(permuted, k, mc.a, mc.f), d2, {1e-12, -1});

    const int nc = mesh.num_cells();
    for (int c = 0; c < nc; ++c) {
        const int c2 = nc - 1 - c;
        for (int j = 0; j < 3; ++j)
            CHECK(u1.coeffs[d1.cell_interior_dof(c, j)] ==
                  doctest::Approx(u2.coeffs[d2.cell_interior_dof(c2, j)]).epsilon(1e-10));
    }
    for (int v = 0; v < mesh.num_vertices(); ++v)
        CHECK(u1.coeffs[d1.vertex_dof(v)] ==
              doctest::Approx(u2.coeffs[d2.vertex_dof(v)]).epsilon(1e-10));
}
