#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cwg/analysis.hpp"

#include <cmath>
#include <sstream>

using namespace cwg;

namespace {

/// Global interpolant {Q_0 u, nodal values of u on the skeleton}.
WeakFunction interpolate(const Mesh& mesh, const DofMap& dofmap, const ScalarField& u) {
    const int k = dofmap.degree();
    WeakFunction w{Eigen::VectorXd::Zero(dofmap.total())};
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto poly = mesh.cell_polygon(c);
        const Eigen::VectorXd q0 = project_q0(u, poly, k);
        for (int j = 0; j < q0.size(); ++j)
            w.coeffs[dofmap.cell_interior_dof(c, j)] = q0[j];
    }
    for (int v = 0; v < mesh.num_vertices(); ++v)
        w.coeffs[dofmap.vertex_dof(v)] = u(mesh.vertices[v]);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Eigen::Vector2d a = mesh.vertices[mesh.edges[e].v0];
        const Eigen::Vector2d b = mesh.vertices[mesh.edges[e].v1];
        for (int s = 1; s < k; ++s) {
            const double t = static_cast<double>(s) / k;
            w.coeffs[dofmap.edge_interior_dof(e, s)] = u(a + t * (b - a));
        }
    }
    return w;
}

}  // namespace

TEST_CASE("manufactured case 1 values") {
    const auto mc = manufactured_case_1();
    const double pi = std::acos(-1.0);
    CHECK(mc.u({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mc.u({0.0, 0.3}) == doctest::Approx(0.0));
    CHECK(mc.u({0.7, 1.0}) == doctest::Approx(0.0));
    CHECK(mc.f({0.5, 0.5}) == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));
    const Eigen::Vector2d g = mc.grad_u({0.5, 0.25});
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(pi * std::cos(pi * 0.25)).epsilon(1e-13));
    CHECK((mc.a({0.3, 0.6}) - Eigen::Matrix2d::Identity()).norm() == 0.0);
}

TEST_CASE("manufactured case 2 values") {
    const auto mc = manufactured_case_2();
    CHECK(mc.u({0.5, 0.5}) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(mc.u({0.0, 0.4}) == doctest::Approx(0.0));
    CHECK(mc.f({0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(mc.f({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("case lookup by name") {
    CHECK(manufactured_case_by_name("example1").name == "example1");
    CHECK(manufactured_case_by_name("example2").name == "example2");
    CHECK_THROWS(manufactured_case_by_name("example3"));
}

TEST_CASE("both error measures vanish on the exact interpolant") {
    for (int k : {1, 2}) {
        const Mesh mesh = build_uniform_triangle_mesh(3);
        const DofMap dofmap(mesh, k);
        const auto mc = manufactured_case_2();
        const WeakFunction w = interpolate(mesh, dofmap, mc.u);
        CHECK(energy_error(mesh, k, w, mc) <= 1e-11);
        CHECK(l2_error(mesh, k, w, mc) <= 1e-13);
    }
}

TEST_CASE("errors are positive for the zero function") {
    const Mesh mesh = build_uniform_triangle_mesh(2);
    const DofMap dofmap(mesh, 1);
    const WeakFunction zero{Eigen::VectorXd::Zero(dofmap.total())};
    const auto mc = manufactured_case_1();
    CHECK(energy_error(mesh, 1, zero, mc) > 0.1);
    CHECK(l2_error(mesh, 1, zero, mc) > 0.1);
}

TEST_CASE("closed-form dof counts reproduce the published table") {
    CHECK(dof_count(Scheme::WG, MeshKind::UniformTriangle, 8, 1) == 592);
    CHECK(dof_count(Scheme::CWG, MeshKind::UniformTriangle, 8, 1) == 465);
    CHECK(dof_count(Scheme::WGSchur, MeshKind::UniformTriangle, 8, 1) == 208);
    CHECK(dof_count(Scheme::CWGSchur, MeshKind::UniformTriangle, 8, 1) == 81);
    CHECK(dof_count(Scheme::CG, MeshKind::UniformTriangle, 8, 1) == 81);

    CHECK(dof_count(Scheme::CWG, MeshKind::UniformTriangle, 128, 1) == 114945);
    CHECK(dof_count(Scheme::WG, MeshKind::UniformTriangle, 128, 1) == 147712);
    CHECK(dof_count(Scheme::CWGSchur, MeshKind::UniformTriangle, 32, 1) == 1089);
    CHECK(dof_count(Scheme::CG, MeshKind::UniformTriangle, 32, 1) == 1089);

    CHECK(dof_count(Scheme::CWG, MeshKind::UniformRectangle, 8, 1) == 273);
    CHECK(dof_count(Scheme::CWG, MeshKind::UniformRectangle, 128, 1) == 65793);
}

TEST_CASE("dof counts match a real dof map") {
    for (int n : {8, 16}) {
        for (int k : {1, 2, 3}) {
            CHECK(dof_count(Scheme::CWG, MeshKind::UniformTriangle, n, k) ==
                  DofMap(build_uniform_triangle_mesh(n), k).total());
            CHECK(dof_count(Scheme::CWGSchur, MeshKind::UniformTriangle, n, k) ==
                  DofMap(build_uniform_triangle_mesh(n), k).skeleton_size());
        }
    }
}

TEST_CASE("unsupported scheme/degree combinations are rejected") {
    CHECK_THROWS_AS(dof_count(Scheme::WG, MeshKind::UniformTriangle, 8, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(dof_count(Scheme::CG, MeshKind::UniformTriangle, 8, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(dof_count(Scheme::WG, MeshKind::UniformRectangle, 8, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(dof_count(Scheme::CWG, MeshKind::UniformTriangle, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("convergence runner produces first-order energy, second-order L2") {
    const auto mc = manufactured_case_2();
    ConvergenceOptions opts;
    opts.k = 1;
    const auto rows = run_convergence(mc, MeshKind::UniformTriangle, {4, 8, 16}, opts);
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].energy_rate.has_value());
    REQUIRE(rows[2].energy_rate.has_value());
    REQUIRE(rows[2].l2_rate.has_value());
    CHECK(*rows[2].energy_rate == doctest::Approx(1.0).epsilon(0.08));
    CHECK(*rows[2].l2_rate == doctest::Approx(2.0).epsilon(0.08));
    CHECK(rows[0].h == doctest::Approx(0.25));
    CHECK(rows[1].dof == dof_count(Scheme::CWG, MeshKind::UniformTriangle, 8, 1));
    for (size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].energy_err < rows[i - 1].energy_err);
        CHECK(rows[i].l2_err < rows[i - 1].l2_err);
    }
}

TEST_CASE("the two solve paths give matching convergence rows") {
    const auto mc = manufactured_case_1();
    ConvergenceOptions full, schur;
    full.path = SolvePath::Full;
    schur.path = SolvePath::Schur;
    const auto a = run_convergence(mc, MeshKind::UniformTriangle, {4, 8}, full);
    const auto b = run_convergence(mc, MeshKind::UniformTriangle, {4, 8}, schur);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dof == b[i].dof);
        CHECK(a[i].energy_err == doctest::Approx(b[i].energy_err).epsilon(1e-7));
        CHECK(a[i].l2_err == doctest::Approx(b[i].l2_err).epsilon(1e-7));
    }
}

TEST_CASE("csv output is deterministic with fixed formatting") {
    const auto mc = manufactured_case_2();
    ConvergenceOptions opts;
    const auto rows = run_convergence(mc, MeshKind::UniformTriangle, {2, 4}, opts);
    std::ostringstream s1, s2;
    write_convergence_csv(rows, s1);
    write_convergence_csv(rows, s2);
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("h,dof,energy_error,energy_rate,l2_error,l2_rate\n", 0) == 0);
    // first data row carries empty rate fields
    const auto line_start = s1.str().find('\n') + 1;
    const auto first_row = s1.str().substr(line_start, s1.str().find('\n', line_start) - line_start);
    CHECK(first_row.find(",,") != std::string::npos);
    CHECK_FALSE(format_convergence_table(rows).empty());
}

TEST_CASE("perturbed meshes keep the convergence orders") {
    const auto mc = manufactured_case_2();
    ConvergenceOptions opts;
    opts.jitter = 0.2;
    opts.seed = 1;
    const auto rows = run_convergence(mc, MeshKind::PerturbedTriangle, {8, 16, 32}, opts);
    REQUIRE(rows.back().energy_rate.has_value());
    CHECK(*rows.back().energy_rate == doctest::Approx(1.0).epsilon(0.1));
    CHECK(*rows.back().l2_rate == doctest::Approx(2.0).epsilon(0.1));
}
