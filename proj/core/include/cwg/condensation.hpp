#pragma once

#include "cwg/assembly.hpp"

namespace cwg {

/// Per-cell elimination of the interior block of K+S. The interior
/// factorization is shared between the condensed matrix and recovery.
struct CondensedLocal {
    Eigen::MatrixXd schur;                   // A_bb - A_b0 A_00^{-1} A_0b
    Eigen::VectorXd load;                    // -A_b0 A_00^{-1} F_0
    Eigen::MatrixXd interior_from_skeleton;  // -A_00^{-1} A_0b
    Eigen::VectorXd interior_from_load;      // A_00^{-1} F_0

    Eigen::VectorXd recover(const Eigen::VectorXd& ub_local) const {
        return interior_from_load + interior_from_skeleton * ub_local;
    }
};

CondensedLocal condense_local(const LocalSystem& local, const LocalDofLayout& layout);

/// Skeleton-only global system plus the cached per-cell recovery data.
struct CondensedSystem {
    SparseSymMatrix A;  // over free skeleton dofs
    Eigen::VectorXd b;
    std::vector<int> free_index;    // global dof -> free skeleton dof, -1 otherwise
    std::vector<int> global_index;  // free skeleton dof -> global dof
    std::vector<CondensedLocal> locals;
};

CondensedSystem assemble_condensed(const Mesh& mesh, int k, const Coefficient& a,
                                   const ScalarField& f, int exactness = -1);

/// Fills the interior blocks of a weak function whose skeleton part is
/// already set (full-length coefficient vector, boundary entries zero).
WeakFunction recover_interior(const Mesh& mesh, const DofMap& dofmap,
                              const CondensedSystem& condensed,
                              const Eigen::VectorXd& skeleton_coeffs);

WeakFunction solve_condensed(const Mesh& mesh, int k, const Coefficient& a, const ScalarField& f,
                             const CgOptions& opts = {}, SolverReport* report = nullptr,
                             int exactness = -1);

}  // namespace cwg
