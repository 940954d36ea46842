#include "cwg/condensation.hpp"

#include <stdexcept>

namespace cwg {

CondensedLocal condense_local(const LocalSystem& local, const LocalDofLayout& layout) {
    const Eigen::MatrixXd a = local.energy();
    const int n0 = layout.n0;
    const int nb = layout.nb;

    const Eigen::MatrixXd a00 = a.topLeftCorner(n0, n0);
    const Eigen::MatrixXd a0b = a.topRightCorner(n0, nb);
    const Eigen::MatrixXd abb = a.bottomRightCorner(nb, nb);
    const Eigen::VectorXd f0 = local.F.head(n0);

    Eigen::LLT<Eigen::MatrixXd> llt(a00);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("condense_local: interior block is not SPD");

    CondensedLocal out;
    out.interior_from_skeleton = -llt.solve(a0b);
    out.interior_from_load = llt.solve(f0);
    out.schur = abb + a0b.transpose() * out.interior_from_skeleton;
    out.load = -a0b.transpose() * out.interior_from_load;
    return out;
}

CondensedSystem assemble_condensed(const Mesh& mesh, int k, const Coefficient& a,
                                   const ScalarField& f, int exactness) {
    const DofMap dofmap(mesh, k);

    CondensedSystem sys;
    sys.free_index.assign(static_cast<size_t>(dofmap.total()), -1);
    for (int dof = dofmap.interior_size(); dof < dofmap.total(); ++dof) {
        if (!dofmap.is_boundary(dof)) {
            sys.free_index[dof] = static_cast<int>(sys.global_index.size());
            sys.global_index.push_back(dof);
        }
    }
    const int nfree = static_cast<int>(sys.global_index.size());

    std::vector<Triplet> triplets;
    sys.b = Eigen::VectorXd::Zero(nfree);
    sys.locals.reserve(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalDofLayout layout =
            LocalDofLayout::create(static_cast<int>(mesh.cells[c].size()), k);
        LocalSystem local;
        try {
            local = build_local_system(mesh, c, k, a, f, exactness);
            sys.locals.push_back(condense_local(local, layout));
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("cell " + std::to_string(c) + ": " + e.what());
        }
        const CondensedLocal& cond = sys.locals.back();

        const std::vector<int> dofs = dofmap.cell_dofs(mesh, c);
        for (int i = 0; i < layout.nb; ++i) {
            const int gi = sys.free_index[dofs[layout.n0 + i]];
            if (gi < 0) continue;
            sys.b[gi] += cond.load[i];
            for (int j = 0; j < layout.nb; ++j) {
                const int gj = sys.free_index[dofs[layout.n0 + j]];
                if (gj < 0) continue;
                triplets.push_back({gi, gj, cond.schur(i, j)});
            }
        }
    }
    sys.A = SparseSymMatrix::from_triplets(nfree, std::move(triplets));
    return sys;
}

WeakFunction recover_interior(const Mesh& mesh, const DofMap& dofmap,
                              const CondensedSystem& condensed,
                              const Eigen::VectorXd& skeleton_coeffs) {
    WeakFunction u;
    u.coeffs = skeleton_coeffs;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalDofLayout layout =
            LocalDofLayout::create(static_cast<int>(mesh.cells[c].size()), dofmap.degree());
        const std::vector<int> dofs = dofmap.cell_dofs(mesh, c);
        Eigen::VectorXd ub(layout.nb);
        for (int i = 0; i < layout.nb; ++i) ub[i] = skeleton_coeffs[dofs[layout.n0 + i]];
        const Eigen::VectorXd u0 = condensed.locals[c].recover(ub);
        for (int j = 0; j < layout.n0; ++j) u.coeffs[dofs[j]] = u0[j];
    }
    return u;
}

WeakFunction solve_condensed(const Mesh& mesh, int k, const Coefficient& a, const ScalarField& f,
                             const CgOptions& opts, SolverReport* report, int exactness) {
    const DofMap dofmap(mesh, k);
    const CondensedSystem sys = assemble_condensed(mesh, k, a, f, exactness);
    auto [x, rep] = cg_solve(sys.A, sys.b, opts);
    if (report) *report = rep;
    if (!rep.converged)
        throw std::runtime_error("solve_condensed: CG failed to converge (residual " +
                                 std::to_string(rep.residual) + ")");

    Eigen::VectorXd skeleton = Eigen::VectorXd::Zero(dofmap.total());
    for (size_t i = 0; i < sys.global_index.size(); ++i)
        skeleton[sys.global_index[i]] = x[static_cast<int>(i)];
    return recover_interior(mesh, dofmap, sys, skeleton);
}

}  // namespace cwg
