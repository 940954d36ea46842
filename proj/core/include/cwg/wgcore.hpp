#pragma once

#include "cwg/mesh.hpp"
#include "cwg/polyspace.hpp"

#include <functional>

namespace cwg {

using Coefficient = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

Coefficient identity_coefficient();

/// Cell-local numbering of a weak function {v_0, v_b} on a cell with m
/// edges: interior dofs [0, n0), then m vertex dofs (shared between the
/// two adjacent sides of the cell), then k-1 interior nodes per side.
struct LocalDofLayout {
    int k = 1;
    int m = 3;
    int n0 = 3;  // dim P_k = (k+1)(k+2)/2
    int nb = 3;  // m*k

    static LocalDofLayout create(int edge_count, int k);

    int total() const { return n0 + nb; }
    int vertex_dof(int v) const { return n0 + v; }
    int edge_interior_dof(int side, int slot) const {
        return n0 + m + side * (k - 1) + (slot - 1);
    }
    /// Boundary dof of node i (0..k) along side `side`, cell traversal order.
    int boundary_dof(int side, int node) const;
};

struct LocalSystem {
    Eigen::MatrixXd G;  // weak gradient: local dofs -> [P_{k-1}]^2 coefficients
    Eigen::MatrixXd K;  // G^T M_a G
    Eigen::MatrixXd S;  // stabilizer
    Eigen::VectorXd F;  // load, zero on boundary dofs
    double h_T = 0.0;

    Eigen::MatrixXd energy() const { return K + S; }
};

/// Column j holds the [P_{k-1}]^2 coefficients of the weak gradient of
/// local basis function j, from the local solve M_vec G = B.
Eigen::MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell, int k,
                                     const LocalDofLayout& layout, int exactness = -1);

Eigen::MatrixXd local_stiffness(const Mesh& mesh, int cell, int k, const Coefficient& a,
                                const LocalDofLayout& layout, int exactness = -1);

Eigen::MatrixXd local_stabilizer(const Mesh& mesh, int cell, int k, const LocalDofLayout& layout);

Eigen::VectorXd local_load(const Mesh& mesh, int cell, int k, const ScalarField& f,
                           const LocalDofLayout& layout, int exactness = -1);

LocalSystem build_local_system(const Mesh& mesh, int cell, int k, const Coefficient& a,
                               const ScalarField& f, int exactness = -1);

}  // namespace cwg
