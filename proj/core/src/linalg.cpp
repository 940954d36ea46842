#include "cwg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cwg {

SparseSymMatrix SparseSymMatrix::from_triplets(int dim, std::vector<Triplet> entries) {
    if (dim < 0) throw std::invalid_argument("SparseSymMatrix: negative dimension");
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim)
            throw std::out_of_range("SparseSymMatrix: triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseSymMatrix m;
    m.dim_ = dim;
    m.row_offsets_.assign(static_cast<size_t>(dim) + 1, 0);
    m.cols_.reserve(entries.size());
    m.values_.reserve(entries.size());

    size_t i = 0;
    for (int r = 0; r < dim; ++r) {
        while (i < entries.size() && entries[i].row == r) {
            int c = entries[i].col;
            double v = 0.0;
            while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
                v += entries[i].value;
                ++i;
            }
            m.cols_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_offsets_[static_cast<size_t>(r) + 1] = static_cast<int>(m.cols_.size());
    }
    return m;
}

void SparseSymMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (x.size() != dim_) throw std::invalid_argument("SparseSymMatrix::multiply: size mismatch");
    y.setZero(dim_);
    for (int r = 0; r < dim_; ++r) {
        double acc = 0.0;
        for (int idx = row_offsets_[r]; idx < row_offsets_[r + 1]; ++idx)
            acc += values_[idx] * x[cols_[idx]];
        y[r] = acc;
    }
}

Eigen::VectorXd SparseSymMatrix::operator*(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    multiply(x, y);
    return y;
}

Eigen::VectorXd SparseSymMatrix::diagonal() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim_);
    for (int r = 0; r < dim_; ++r) d[r] = coeff(r, r);
    return d;
}

double SparseSymMatrix::coeff(int i, int j) const {
    auto first = cols_.begin() + row_offsets_[i];
    auto last = cols_.begin() + row_offsets_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<size_t>(it - cols_.begin())];
}

Eigen::MatrixXd SparseSymMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
        for (int idx = row_offsets_[r]; idx < row_offsets_[r + 1]; ++idx)
            d(r, cols_[idx]) = values_[idx];
    return d;
}

double SparseSymMatrix::symmetry_defect() const {
    double defect = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int idx = row_offsets_[r]; idx < row_offsets_[r + 1]; ++idx)
            defect = std::max(defect, std::abs(values_[idx] - coeff(cols_[idx], r)));
    return defect;
}

Eigen::VectorXd dense_solve_spd(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("dense_solve_spd: matrix is not SPD");
    return llt.solve(rhs);
}

std::pair<Eigen::VectorXd, SolverReport>
cg_solve(const SparseSymMatrix& a, const Eigen::VectorXd& b, const CgOptions& opts) {
    const int n = a.dim();
    if (b.size() != n) throw std::invalid_argument("cg_solve: rhs size mismatch");
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * std::max(n, 1);

    SolverReport report;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        report.converged = true;
        return {x, report};
    }

    Eigen::VectorXd inv_diag = a.diagonal();
    for (int i = 0; i < n; ++i)
        inv_diag[i] = inv_diag[i] != 0.0 ? 1.0 / inv_diag[i] : 1.0;

    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd ap(n);
    double rz = r.dot(z);

    for (int it = 0; it < max_iter; ++it) {
        a.multiply(p, ap);
        const double pap = p.dot(ap);
        if (pap <= 0.0) break;  // lost positive definiteness
        const double alpha = rz / pap;
        x += alpha * p;
        r -= alpha * ap;
        report.iterations = it + 1;
        report.residual = r.norm() / bnorm;
        if (report.residual <= opts.tol) {
            report.converged = true;
            return {x, report};
        }
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    report.residual = (b - a * x).norm() / bnorm;
    report.converged = report.residual <= opts.tol;
    return {x, report};
}

void write_coordinate_format(const SparseSymMatrix& a, std::ostream& out) {
    char buf[96];
    for (int r = 0; r < a.dim(); ++r) {
        for (int idx = a.row_offsets()[r]; idx < a.row_offsets()[r + 1]; ++idx) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, a.col_indices()[idx] + 1,
                          a.values()[idx]);
            out << buf;
        }
    }
}

}  // namespace cwg
