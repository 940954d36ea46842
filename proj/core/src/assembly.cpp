#include "cwg/assembly.hpp"

#include <stdexcept>

namespace cwg {

DofMap::DofMap(const Mesh& mesh, int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("DofMap: k must be >= 1");
    n0_ = (k + 1) * (k + 2) / 2;
    num_vertices_ = mesh.num_vertices();
    interior_size_ = mesh.num_cells() * n0_;
    skeleton_size_ = num_vertices_ + (k - 1) * mesh.num_edges();

    boundary_mask_.assign(static_cast<size_t>(total()), false);
    num_boundary_ = 0;
    for (int v = 0; v < num_vertices_; ++v) {
        if (mesh.vertex_on_boundary[v]) {
            boundary_mask_[vertex_dof(v)] = true;
            ++num_boundary_;
        }
    }
    if (k > 1) {
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (!mesh.edges[e].boundary()) continue;
            for (int slot = 1; slot < k; ++slot) {
                boundary_mask_[edge_interior_dof(e, slot)] = true;
                ++num_boundary_;
            }
        }
    }
}

std::vector<int> DofMap::cell_dofs(const Mesh& mesh, int cell) const {
    const auto& loop = mesh.cells[cell];
    const int m = static_cast<int>(loop.size());
    std::vector<int> dofs(static_cast<size_t>(n0_) + m * k_);
    for (int j = 0; j < n0_; ++j) dofs[j] = cell_interior_dof(cell, j);
    for (int v = 0; v < m; ++v) dofs[n0_ + v] = vertex_dof(loop[v]);
    if (k_ > 1) {
        for (int side = 0; side < m; ++side) {
            const CellEdgeRef ref = mesh.cell_edges[cell][side];
            for (int slot = 1; slot < k_; ++slot) {
                const int global_slot = ref.reversed ? k_ - slot : slot;
                dofs[n0_ + m + side * (k_ - 1) + (slot - 1)] =
                    edge_interior_dof(ref.edge, global_slot);
            }
        }
    }
    return dofs;
}

namespace {

void scatter_cell(const Mesh& mesh, const DofMap& dofmap, int cell, const LocalSystem& local,
                  const std::vector<int>& remap, std::vector<Triplet>& triplets,
                  Eigen::VectorXd& rhs) {
    const std::vector<int> dofs = dofmap.cell_dofs(mesh, cell);
    const Eigen::MatrixXd a = local.energy();
    const int n = static_cast<int>(dofs.size());
    for (int i = 0; i < n; ++i) {
        const int gi = remap[dofs[i]];
        if (gi < 0) continue;
        rhs[gi] += local.F[i];
        for (int j = 0; j < n; ++j) {
            const int gj = remap[dofs[j]];
            if (gj < 0) continue;
            triplets.push_back({gi, gj, a(i, j)});
        }
    }
}

}  // namespace

GlobalSystem assemble(const Mesh& mesh, int k, const Coefficient& a, const ScalarField& f,
                      int exactness) {
    const DofMap dofmap(mesh, k);

    GlobalSystem sys;
    sys.free_index.assign(static_cast<size_t>(dofmap.total()), -1);
    for (int dof = 0; dof < dofmap.total(); ++dof) {
        if (!dofmap.is_boundary(dof)) {
            sys.free_index[dof] = static_cast<int>(sys.global_index.size());
            sys.global_index.push_back(dof);
        }
    }
    const int nfree = static_cast<int>(sys.global_index.size());

    std::vector<Triplet> triplets;
    sys.b = Eigen::VectorXd::Zero(nfree);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalSystem local = build_local_system(mesh, c, k, a, f, exactness);
        scatter_cell(mesh, dofmap, c, local, sys.free_index, triplets, sys.b);
    }
    sys.A = SparseSymMatrix::from_triplets(nfree, std::move(triplets));
    return sys;
}

std::pair<SparseSymMatrix, Eigen::VectorXd>
assemble_unconstrained(const Mesh& mesh, int k, const Coefficient& a, const ScalarField& f,
                       int exactness) {
    const DofMap dofmap(mesh, k);
    std::vector<int> identity(static_cast<size_t>(dofmap.total()));
    for (int i = 0; i < dofmap.total(); ++i) identity[i] = i;

    std::vector<Triplet> triplets;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofmap.total());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalSystem local = build_local_system(mesh, c, k, a, f, exactness);
        scatter_cell(mesh, dofmap, c, local, identity, triplets, rhs);
    }
    return {SparseSymMatrix::from_triplets(dofmap.total(), std::move(triplets)), rhs};
}

WeakFunction solve_full(const GlobalSystem& system, const DofMap& dofmap, const CgOptions& opts,
                        SolverReport* report) {
    auto [x, rep] = cg_solve(system.A, system.b, opts);
    if (report) *report = rep;
    if (!rep.converged)
        throw std::runtime_error("solve_full: CG failed to converge (residual " +
                                 std::to_string(rep.residual) + ")");
    WeakFunction u;
    u.coeffs = Eigen::VectorXd::Zero(dofmap.total());
    for (size_t i = 0; i < system.global_index.size(); ++i)
        u.coeffs[system.global_index[i]] = x[static_cast<int>(i)];
    return u;
}

}  // namespace cwg
