#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace cwg {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

struct QuadratureRule {
    std::vector<Eigen::Vector2d> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
    double total_weight() const;
    double integrate(const ScalarField& f) const;
};

/// Scaled monomials ((x-xc)/h)^a ((y-yc)/h)^b, |a+b| <= k, graded
/// lexicographic order. The first function is the constant 1.
class CellBasis {
public:
    CellBasis(int degree, const Eigen::Vector2d& center, double scale);

    static CellBasis for_polygon(int degree, std::span<const Eigen::Vector2d> poly);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const Eigen::Vector2d& center() const { return center_; }
    double scale() const { return scale_; }

    double eval(int i, const Eigen::Vector2d& p) const;
    Eigen::Vector2d grad(int i, const Eigen::Vector2d& p) const;

private:
    int degree_;
    Eigen::Vector2d center_;
    double scale_;
    std::vector<std::pair<int, int>> exponents_;
};

/// [P_{k-1}]^2 as two stacked copies of the degree k-1 scalar basis:
/// functions [0, ns) are (p_i, 0), functions [ns, 2ns) are (0, p_i).
class VectorBasis {
public:
    VectorBasis(int k, const Eigen::Vector2d& center, double scale);

    static VectorBasis for_polygon(int k, std::span<const Eigen::Vector2d> poly);

    int size() const { return 2 * scalar_.size(); }
    const CellBasis& scalar() const { return scalar_; }

    Eigen::Vector2d eval(int i, const Eigen::Vector2d& p) const;
    double divergence(int i, const Eigen::Vector2d& p) const;

private:
    CellBasis scalar_;
};

/// Lagrange basis of degree k on [0,1] with k+1 equispaced nodes,
/// endpoints included (node 0 at t=0, node k at t=1).
class EdgeBasis {
public:
    explicit EdgeBasis(int degree);

    int degree() const { return degree_; }
    int size() const { return degree_ + 1; }
    double node(int i) const { return static_cast<double>(i) / degree_; }
    double eval(int i, double t) const;

private:
    int degree_;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights);

QuadratureRule edge_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int exactness);
QuadratureRule triangle_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, int exactness);

/// Centroid fan of a convex polygon, one reference-triangle rule per fan
/// triangle. Exact for total degree <= exactness.
QuadratureRule polygon_quadrature(std::span<const Eigen::Vector2d> poly, int exactness);

Eigen::Vector2d polygon_centroid(std::span<const Eigen::Vector2d> poly);
double polygon_area(std::span<const Eigen::Vector2d> poly);

int default_exactness(int k);  // 2k+2

Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadratureRule& quad);
Eigen::MatrixXd edge_mass_matrix(int k, double length);

/// L2 projection onto P_k of the cell, coefficients in CellBasis order.
Eigen::VectorXd project_q0(const ScalarField& f, std::span<const Eigen::Vector2d> poly, int k,
                           int exactness = -1);

/// Componentwise L2 projection onto [P_{k-1}]^2, VectorBasis layout.
Eigen::VectorXd project_qh(const VectorField& g, std::span<const Eigen::Vector2d> poly, int k,
                           int exactness = -1);

/// Lagrange interpolation at the k+1 edge nodes; returns nodal values.
Eigen::VectorXd interpolate_ib(const ScalarField& g, const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, int k);

/// L2 projection onto P_k of the edge, Lagrange (nodal) coefficients.
Eigen::VectorXd project_qb(const ScalarField& g, const Eigen::Vector2d& a,
                           const Eigen::Vector2d& b, int k, int exactness = -1);

}  // namespace cwg
