#include "cwg/analysis.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

/// Write to a temporary sibling and rename, so failures never leave a
/// partial file behind.
void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

cwg::MeshKind parse_family(const std::string& family) {
    if (family == "tri") return cwg::MeshKind::UniformTriangle;
    if (family == "rect") return cwg::MeshKind::UniformRectangle;
    if (family == "perturbed") return cwg::MeshKind::PerturbedTriangle;
    throw CLI::ValidationError("--family", "expected tri, rect or perturbed");
}

cwg::Mesh build_mesh(cwg::MeshKind kind, int n, double jitter, unsigned seed) {
    switch (kind) {
        case cwg::MeshKind::UniformTriangle: return cwg::build_uniform_triangle_mesh(n);
        case cwg::MeshKind::UniformRectangle: return cwg::build_uniform_rectangle_mesh(n);
        case cwg::MeshKind::PerturbedTriangle:
            return cwg::build_perturbed_triangle_mesh(n, jitter, seed);
    }
    throw std::invalid_argument("unknown mesh family");
}

struct CommonOpts {
    std::string case_name = "example1";
    std::string family = "tri";
    int k = 1;
    double tol = 1e-10;
    double jitter = 0.2;
    unsigned seed = 1;
    int exactness = -1;
    std::string path = "schur";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_case = true) {
    if (with_case)
        cmd->add_option("--case", o.case_name, "Manufactured case (example1|example2)");
    cmd->add_option("--family", o.family, "Mesh family (tri|rect|perturbed)");
    cmd->add_option("--k", o.k, "Polynomial degree")->check(CLI::Range(1, 3));
    cmd->add_option("--tol", o.tol, "CG relative residual tolerance");
    cmd->add_option("--jitter", o.jitter, "Perturbed-mesh jitter in [0, 0.5)");
    cmd->add_option("--seed", o.seed, "Perturbed-mesh seed");
    cmd->add_option("--exactness", o.exactness, "Quadrature exactness override");
    cmd->add_option("--path", o.path, "Solution path (full|schur)")
        ->check(CLI::IsMember({"full", "schur"}));
    cmd->add_option("--out", o.out, "Output path (prefix for solve)");
}

int run_solve(const CommonOpts& o, int n, const std::string& dump_matrix) {
    const cwg::ManufacturedCase mc = cwg::manufactured_case_by_name(o.case_name);
    const cwg::MeshKind kind = parse_family(o.family);
    const cwg::Mesh mesh = build_mesh(kind, n, o.jitter, o.seed);
    const cwg::DofMap dofmap(mesh, o.k);

    cwg::CgOptions cg;
    cg.tol = o.tol;
    cwg::SolverReport report;
    cwg::WeakFunction u_h;
    if (o.path == "full") {
        const cwg::GlobalSystem sys = cwg::assemble(mesh, o.k, mc.a, mc.f, o.exactness);
        if (!dump_matrix.empty()) {
            std::ostringstream dump;
            cwg::write_coordinate_format(sys.A, dump);
            write_atomic(dump_matrix, dump.str());
        }
        u_h = cwg::solve_full(sys, dofmap, cg, &report);
    } else {
        const cwg::CondensedSystem sys =
            cwg::assemble_condensed(mesh, o.k, mc.a, mc.f, o.exactness);
        if (!dump_matrix.empty()) {
            std::ostringstream dump;
            cwg::write_coordinate_format(sys.A, dump);
            write_atomic(dump_matrix, dump.str());
        }
        auto [x, rep] = cwg::cg_solve(sys.A, sys.b, cg);
        report = rep;
        if (!rep.converged) throw std::runtime_error("CG failed to converge");
        Eigen::VectorXd skeleton = Eigen::VectorXd::Zero(dofmap.total());
        for (size_t i = 0; i < sys.global_index.size(); ++i)
            skeleton[sys.global_index[i]] = x[static_cast<int>(i)];
        u_h = cwg::recover_interior(mesh, dofmap, sys, skeleton);
    }

    const double e_energy = cwg::energy_error(mesh, o.k, u_h, mc);
    const double e_l2 = cwg::l2_error(mesh, o.k, u_h, mc);

    std::ostringstream summary;
    summary << "case: " << mc.name << "\n"
            << "family: " << o.family << "  n: " << n << "  k: " << o.k << "  path: " << o.path
            << "\n"
            << "dof: " << dofmap.total() << "\n"
            << "skeleton dof: " << dofmap.skeleton_size() << "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "energy error: %.6e\nl2 error: %.6e\n", e_energy, e_l2);
    summary << buf;
    std::snprintf(buf, sizeof(buf), "cg iterations: %d  residual: %.3e  converged: %s\n",
                  report.iterations, report.residual, report.converged ? "yes" : "no");
    summary << buf;
    std::cout << summary.str();

    if (!o.out.empty()) {
        std::ostringstream sol;
        char line[64];
        for (int i = 0; i < u_h.coeffs.size(); ++i) {
            std::snprintf(line, sizeof(line), "%d %.17g\n", i, u_h.coeffs[i]);
            sol << line;
        }
        write_atomic(o.out + ".solution.txt", sol.str());
        write_atomic(o.out + ".summary.txt", summary.str());
    }
    return 0;
}

int run_convergence_cmd(const CommonOpts& o, const std::vector<int>& levels) {
    const cwg::ManufacturedCase mc = cwg::manufactured_case_by_name(o.case_name);
    cwg::ConvergenceOptions opts;
    opts.k = o.k;
    opts.path = o.path == "full" ? cwg::SolvePath::Full : cwg::SolvePath::Schur;
    opts.jitter = o.jitter;
    opts.seed = o.seed;
    opts.cg.tol = o.tol;
    opts.exactness = o.exactness;

    const auto rows = cwg::run_convergence(mc, parse_family(o.family), levels, opts);
    std::cout << cwg::format_convergence_table(rows);
    if (!o.out.empty()) {
        std::ostringstream csv;
        cwg::write_convergence_csv(rows, csv);
        write_atomic(o.out, csv.str());
    }
    return 0;
}

int run_doftable(const std::vector<int>& levels, int k, const std::string& out) {
    std::ostringstream table;
    char line[160];
    std::snprintf(line, sizeof(line), "%-8s %-10s %-10s %-10s %-10s %-10s\n", "h", "WG", "CWG",
                  "WG-Schur", "CWG-Schur", "CG");
    table << line;
    std::ostringstream csv;
    csv << "n,wg,cwg,wg_schur,cwg_schur,cg\n";
    using cwg::Scheme;
    const auto tri = cwg::MeshKind::UniformTriangle;
    for (int n : levels) {
        const long wg = cwg::dof_count(Scheme::WG, tri, n, k);
        const long cwgd = cwg::dof_count(Scheme::CWG, tri, n, k);
        const long wgs = cwg::dof_count(Scheme::WGSchur, tri, n, k);
        const long cwgs = cwg::dof_count(Scheme::CWGSchur, tri, n, k);
        const long cg = cwg::dof_count(Scheme::CG, tri, n, k);
        std::snprintf(line, sizeof(line), "1/%-6d %-10ld %-10ld %-10ld %-10ld %-10ld\n", n, wg,
                      cwgd, wgs, cwgs, cg);
        table << line;
        std::snprintf(line, sizeof(line), "%d,%ld,%ld,%ld,%ld,%ld\n", n, wg, cwgd, wgs, cwgs, cg);
        csv << line;
    }
    std::cout << table.str();
    if (!out.empty()) write_atomic(out, csv.str());
    return 0;
}

int run_meshgen(const std::string& family, int n, double jitter, unsigned seed,
                const std::string& out) {
    const cwg::Mesh mesh = build_mesh(parse_family(family), n, jitter, seed);
    const fs::path tmp = out + ".tmp";
    cwg::save_mesh(mesh, tmp);
    fs::rename(tmp, out);
    std::cout << "wrote " << out << ": " << mesh.num_vertices() << " vertices, "
              << mesh.num_cells() << " cells, " << mesh.num_edges() << " edges\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-boundary weak Galerkin solver for -div(a grad u) = f"};
    app.set_config("--config", "", "Flat key=value config file; flags override");
    app.require_subcommand(1);

    CommonOpts solve_opts;
    int solve_n = 8;
    std::string dump_matrix;
    auto* solve = app.add_subcommand("solve", "Solve one manufactured case on one mesh");
    add_common(solve, solve_opts);
    solve->add_option("--n", solve_n, "Subdivisions per side")->check(CLI::PositiveNumber);
    solve->add_option("--dump-matrix", dump_matrix, "Dump system matrix in coordinate format");

    CommonOpts conv_opts;
    std::vector<int> conv_levels{8, 16, 32, 64, 128};
    auto* conv = app.add_subcommand("convergence", "Run a convergence study");
    add_common(conv, conv_opts);
    conv->add_option("--levels", conv_levels, "Mesh levels n (each should double the previous)")
        ->check(CLI::PositiveNumber);

    std::vector<int> dof_levels{8, 16, 32, 64, 128};
    int dof_k = 1;
    std::string dof_out;
    auto* dof = app.add_subcommand("doftable", "Per-scheme dof counts, uniform triangle family");
    dof->add_option("--levels", dof_levels, "Mesh levels n")->check(CLI::PositiveNumber);
    dof->add_option("--k", dof_k, "Polynomial degree")->check(CLI::Range(1, 3));
    dof->add_option("--out", dof_out, "CSV output path");

    std::string mg_family = "tri", mg_out;
    int mg_n = 8;
    double mg_jitter = 0.2;
    unsigned mg_seed = 1;
    auto* mg = app.add_subcommand("meshgen", "Generate and save a mesh file");
    mg->add_option("--family", mg_family, "Mesh family (tri|rect|perturbed)");
    mg->add_option("--n", mg_n, "Subdivisions per side")->check(CLI::PositiveNumber);
    mg->add_option("--jitter", mg_jitter, "Perturbed-mesh jitter");
    mg->add_option("--seed", mg_seed, "Perturbed-mesh seed");
    mg->add_option("--out", mg_out, "Output mesh path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return run_solve(solve_opts, solve_n, dump_matrix);
        if (conv->parsed()) return run_convergence_cmd(conv_opts, conv_levels);
        if (dof->parsed()) return run_doftable(dof_levels, dof_k, dof_out);
        if (mg->parsed()) return run_meshgen(mg_family, mg_n, mg_jitter, mg_seed, mg_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
