#pragma once

#include "cwg/linalg.hpp"
#include "cwg/wgcore.hpp"

#include <vector>

namespace cwg {

/// Global numbering: interior dofs cell by cell, then one skeleton dof
/// per vertex, then k-1 interior nodes per edge (global edge
/// orientation). Boundary mask marks the skeleton dofs on the domain
/// boundary; counts reported by total() include them.
class DofMap {
public:
    DofMap(const Mesh& mesh, int k);

    int degree() const { return k_; }
    int interior_size() const { return interior_size_; }
    int skeleton_size() const { return skeleton_size_; }
    int total() const { return interior_size_ + skeleton_size_; }
    int num_boundary() const { return num_boundary_; }

    int cell_interior_dof(int cell, int j) const { return cell * n0_ + j; }
    int vertex_dof(int v) const { return interior_size_ + v; }
    int edge_interior_dof(int edge, int slot) const {
        return interior_size_ + num_vertices_ + edge * (k_ - 1) + (slot - 1);
    }

    bool is_boundary(int dof) const { return boundary_mask_[dof]; }

    /// Local-to-global map matching LocalDofLayout ordering; edge
    /// interior slots are flipped when the cell traverses the edge
    /// against its stored orientation.
    std::vector<int> cell_dofs(const Mesh& mesh, int cell) const;

private:
    int k_;
    int n0_;
    int num_vertices_;
    int interior_size_;
    int skeleton_size_;
    int num_boundary_;
    std::vector<bool> boundary_mask_;
};

/// Full coefficient vector over all dofs of a DofMap; constrained
/// boundary entries are kept (at zero) so both solve paths share one
/// representation.
struct WeakFunction {
    Eigen::VectorXd coeffs;
};

struct GlobalSystem {
    SparseSymMatrix A;  // over free dofs
    Eigen::VectorXd b;
    std::vector<int> free_index;    // global dof -> free dof, -1 if constrained
    std::vector<int> global_index;  // free dof -> global dof
};

GlobalSystem assemble(const Mesh& mesh, int k, const Coefficient& a, const ScalarField& f,
                      int exactness = -1);

/// Same scatter without Dirichlet elimination, for spectral tests.
std::pair<SparseSymMatrix, Eigen::VectorXd>
assemble_unconstrained(const Mesh& mesh, int k, const Coefficient& a, const ScalarField& f,
                       int exactness = -1);

WeakFunction solve_full(const GlobalSystem& system, const DofMap& dofmap,
                        const CgOptions& opts = {}, SolverReport* report = nullptr);

}  // namespace cwg
