#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cwg/analysis.hpp"
#include "cwg/condensation.hpp"

using namespace cwg;

namespace {

ScalarField zero_field() {
    return [](const Eigen::Vector2d&) { return 0.0; };
}

Mesh single_triangle() {
    return Mesh::from_cells({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {{0, 1, 2}});
}

}  // namespace

TEST_CASE("zero skeleton trace and zero load recover zero interiors") {
    const Mesh mesh = single_triangle();
    const LocalDofLayout layout = LocalDofLayout::create(3, 2);
    const LocalSystem local =
        build_local_system(mesh, 0, 2, identity_coefficient(), zero_field());
    const CondensedLocal cl = condense_local(local, layout);
    CHECK(cl.load.cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(cl.recover(Eigen::VectorXd::Zero(layout.nb)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("constant skeleton trace recovers the constant interior") {
    for (int k : {1, 2, 3}) {
        const Mesh mesh = single_triangle();
        const LocalDofLayout layout = LocalDofLayout::create(3, k);
        const LocalSystem local =
            build_local_system(mesh, 0, k, identity_coefficient(), zero_field());
        const CondensedLocal cl = condense_local(local, layout);
        const double c = 3.25;
        const Eigen::VectorXd u0 = cl.recover(Eigen::VectorXd::Constant(layout.nb, c));
        // scaled monomial basis: constant has coefficient c in slot 0
        CHECK(u0[0] == doctest::Approx(c).epsilon(1e-11));
        for (int j = 1; j < layout.n0; ++j) CHECK(std::abs(u0[j]) <= 1e-10);
    }
}

TEST_CASE("schur complement rows sum to zero (constants in the kernel)") {
    const Mesh mesh = build_uniform_triangle_mesh(2);
    for (int cell = 0; cell < mesh.num_cells(); ++cell) {
        const LocalDofLayout layout = LocalDofLayout::create(3, 1);
        const LocalSystem local =
            build_local_system(mesh, cell, 1, identity_coefficient(), zero_field());
        const CondensedLocal cl = condense_local(local, layout);
        const Eigen::VectorXd rowsum = cl.schur * Eigen::VectorXd::Ones(layout.nb);
        CHECK(rowsum.cwiseAbs().maxCoeff() <= 1e-11);
        CHECK((cl.schur - cl.schur.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("condensed system size equals the skeleton dof count") {
    {
        const Mesh mesh = build_uniform_triangle_mesh(8);
        const DofMap dofmap(mesh, 1);
        CHECK(dofmap.skeleton_size() == 81);
        const auto mc = manufactured_case_1();
        const CondensedSystem sys = assemble_condensed(mesh, 1, mc.a, mc.f);
        // free system excludes the 32 boundary vertices
        CHECK(sys.A.dim() == 49);
        CHECK(static_cast<int>(sys.locals.size()) == mesh.num_cells());
        double amax = 0.0;
        for (double v : sys.A.values()) amax = std::max(amax, std::abs(v));
        CHECK(sys.A.symmetry_defect() <= 1e-12 * amax);
    }
    CHECK(DofMap(build_uniform_triangle_mesh(64), 1).skeleton_size() == 4225);
}

TEST_CASE("zero forcing gives the zero condensed solution") {
    const Mesh mesh = build_uniform_triangle_mesh(4);
    const WeakFunction u = solve_condensed(mesh, 1, identity_coefficient(), zero_field());
    CHECK(u.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("condensed and full paths produce the same weak function") {
    for (int k : {1, 2}) {
        for (bool rect : {false, true}) {
            for (int n : {2, 4}) {
                const Mesh mesh =
                    rect ? build_uniform_rectangle_mesh(n) : build_uniform_triangle_mesh(n);
                const DofMap dofmap(mesh, k);
                const auto mc = manufactured_case_1();
                const WeakFunction full =
                    solve_full(assemble(mesh, k, mc.a, mc.f), dofmap, {1e-13, -1});
                const WeakFunction schur =
                    solve_condensed(mesh, k, mc.a, mc.f, {1e-13, -1});
                const double scale = full.coeffs.cwiseAbs().maxCoeff();
                CHECK((full.coeffs - schur.coeffs).cwiseAbs().maxCoeff() <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("recovered interiors satisfy the per-cell residual") {
    const Mesh mesh = build_uniform_triangle_mesh(4);
    const int k = 1;
    const auto mc = manufactured_case_2();
    const DofMap dofmap(mesh, k);
    const WeakFunction u = solve_condensed(mesh, k, mc.a, mc.f, {1e-13, -1});
    for (int cell = 0; cell < mesh.num_cells(); ++cell) {
        const LocalDofLayout layout = LocalDofLayout::create(3, k);
        const LocalSystem local = build_local_system(mesh, cell, k, mc.a, mc.f);
        const auto dofs = dofmap.cell_dofs(mesh, cell);
        Eigen::VectorXd v(layout.total());
        for (int j = 0; j < layout.total(); ++j) v[j] = u.coeffs[dofs[j]];
        const Eigen::MatrixXd e = local.energy();
        // interior rows of (K+S) v = F must hold exactly after recovery
        const Eigen::VectorXd res =
            e.topRows(layout.n0) * v - local.F.head(layout.n0);
        CHECK(res.cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("both paths agree on the discrete energy") {
    const Mesh mesh = build_uniform_triangle_mesh(4);
    const int k = 1;
    const auto mc = manufactured_case_1();
    const DofMap dofmap(mesh, k);
    auto [a_full, rhs] = assemble_unconstrained(mesh, k, mc.a, mc.f);
    const WeakFunction full = solve_full(assemble(mesh, k, mc.a, mc.f), dofmap, {1e-13, -1});
    const WeakFunction schur = solve_condensed(mesh, k, mc.a, mc.f, {1e-13, -1});
    const double e1 = full.coeffs.dot(a_full * full.coeffs);
    const double e2 = schur.coeffs.dot(a_full * schur.coeffs);
    CHECK(e1 == doctest::Approx(e2).epsilon(1e-9));
}
