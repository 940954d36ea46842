#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <utility>
#include <vector>

namespace cwg {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Symmetric sparse matrix in compressed-row form. Both triangles are
/// stored; column indices are sorted and unique within each row.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;

    static SparseSymMatrix from_triplets(int dim, std::vector<Triplet> entries);

    int dim() const { return dim_; }
    long nonzeros() const { return static_cast<long>(values_.size()); }

    void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

    Eigen::VectorXd diagonal() const;
    double coeff(int i, int j) const;
    Eigen::MatrixXd to_dense() const;

    /// Max |A(i,j) - A(j,i)| over stored entries (0 for a clean assembly).
    double symmetry_defect() const;

    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& col_indices() const { return cols_; }
    const std::vector<double>& values() const { return values_; }

private:
    int dim_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> cols_;
    std::vector<double> values_;
};

struct SolverReport {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

struct CgOptions {
    double tol = 1e-10;  // relative residual
    int max_iter = -1;   // defaults to 10 * dim
};

/// Cholesky solve for small dense SPD blocks. Throws if the
/// factorization detects a non-positive pivot.
Eigen::VectorXd dense_solve_spd(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs);

/// Jacobi-preconditioned conjugate gradients. A partial solution is
/// returned with converged=false when the iteration cap is hit.
std::pair<Eigen::VectorXd, SolverReport>
cg_solve(const SparseSymMatrix& a, const Eigen::VectorXd& b, const CgOptions& opts = {});

/// Coordinate text dump, one "i j value" per line, 1-based indices.
void write_coordinate_format(const SparseSymMatrix& a, std::ostream& out);

}  // namespace cwg
