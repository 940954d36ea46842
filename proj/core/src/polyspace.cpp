#include "cwg/polyspace.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cwg {

double QuadratureRule::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double QuadratureRule::integrate(const ScalarField& f) const {
    double s = 0.0;
    for (int q = 0; q < size(); ++q) s += weights[q] * f(points[q]);
    return s;
}

CellBasis::CellBasis(int degree, const Eigen::Vector2d& center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
    if (degree < 0) throw std::invalid_argument("CellBasis: negative degree");
    if (scale <= 0.0) throw std::invalid_argument("CellBasis: non-positive scale");
    for (int d = 0; d <= degree; ++d)
        for (int a = d; a >= 0; --a) exponents_.emplace_back(a, d - a);
}

CellBasis CellBasis::for_polygon(int degree, std::span<const Eigen::Vector2d> poly) {
    double diam = 0.0;
    for (size_t i = 0; i < poly.size(); ++i)
        for (size_t j = i + 1; j < poly.size(); ++j)
            diam = std::max(diam, (poly[i] - poly[j]).norm());
    return CellBasis(degree, polygon_centroid(poly), diam);
}

double CellBasis::eval(int i, const Eigen::Vector2d& p) const {
    const double x = (p.x() - center_.x()) / scale_;
    const double y = (p.y() - center_.y()) / scale_;
    const auto [a, b] = exponents_[i];
    return std::pow(x, a) * std::pow(y, b);
}

Eigen::Vector2d CellBasis::grad(int i, const Eigen::Vector2d& p) const {
    const double x = (p.x() - center_.x()) / scale_;
    const double y = (p.y() - center_.y()) / scale_;
    const auto [a, b] = exponents_[i];
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    if (a > 0) g.x() = a * std::pow(x, a - 1) * std::pow(y, b) / scale_;
    if (b > 0) g.y() = b * std::pow(x, a) * std::pow(y, b - 1) / scale_;
    return g;
}

VectorBasis::VectorBasis(int k, const Eigen::Vector2d& center, double scale)
    : scalar_(k - 1, center, scale) {
    if (k < 1) throw std::invalid_argument("VectorBasis: k must be >= 1");
}

VectorBasis VectorBasis::for_polygon(int k, std::span<const Eigen::Vector2d> poly) {
    auto scalar = CellBasis::for_polygon(k - 1, poly);
    return VectorBasis(k, scalar.center(), scalar.scale());
}

Eigen::Vector2d VectorBasis::eval(int i, const Eigen::Vector2d& p) const {
    const int ns = scalar_.size();
    if (i < ns) return {scalar_.eval(i, p), 0.0};
    return {0.0, scalar_.eval(i - ns, p)};
}

double VectorBasis::divergence(int i, const Eigen::Vector2d& p) const {
    const int ns = scalar_.size();
    if (i < ns) return scalar_.grad(i, p).x();
    return scalar_.grad(i - ns, p).y();
}

EdgeBasis::EdgeBasis(int degree) : degree_(degree) {
    if (degree < 1) throw std::invalid_argument("EdgeBasis: degree must be >= 1");
}

double EdgeBasis::eval(int i, double t) const {
    const double ti = node(i);
    double v = 1.0;
    for (int j = 0; j <= degree_; ++j) {
        if (j == i) continue;
        const double tj = node(j);
        v *= (t - tj) / (ti - tj);
    }
    return v;
}

void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights) {
    if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints must be >= 1");
    nodes.resize(npoints);
    weights.resize(npoints);
    const int n = npoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence up to degree n
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n == 1) {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
}

QuadratureRule edge_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int exactness) {
    const double len = (b - a).norm();
    if (len <= 0.0) throw std::invalid_argument("edge_quadrature: degenerate edge");
    if (exactness < 1) exactness = 1;
    const int m = exactness / 2 + 1;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    QuadratureRule rule;
    rule.points.reserve(m);
    rule.weights.reserve(m);
    for (int q = 0; q < m; ++q) {
        const double t = 0.5 * (x[q] + 1.0);
        rule.points.push_back(a + t * (b - a));
        rule.weights.push_back(0.5 * w[q] * len);
    }
    return rule;
}

QuadratureRule triangle_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, int exactness) {
    if (exactness < 1) exactness = 1;
    // Collapsed tensor rule: x=u, y=v(1-u), Jacobian (1-u) raises the
    // u-degree by one, hence the extra point in that direction.
    const int m = (exactness + 3) / 2;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);

    const Eigen::Vector2d e1 = b - a;
    const Eigen::Vector2d e2 = c - a;
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();
    if (jac <= 0.0) throw std::invalid_argument("triangle_quadrature: degenerate or CW triangle");

    QuadratureRule rule;
    rule.points.reserve(static_cast<size_t>(m) * m);
    rule.weights.reserve(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const double u = 0.5 * (x[i] + 1.0);
        for (int j = 0; j < m; ++j) {
            const double v = 0.5 * (x[j] + 1.0);
            const double rx = u;
            const double ry = v * (1.0 - u);
            rule.points.push_back(a + rx * e1 + ry * e2);
            rule.weights.push_back(0.25 * w[i] * w[j] * (1.0 - u) * jac);
        }
    }
    return rule;
}

Eigen::Vector2d polygon_centroid(std::span<const Eigen::Vector2d> poly) {
    double area = 0.0;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    const size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
        const auto& u = poly[i];
        const auto& v = poly[(i + 1) % m];
        const double cr = u.x() * v.y() - v.x() * u.y();
        area += cr;
        c += cr * (u + v);
    }
    area *= 0.5;
    return c / (6.0 * area);
}

double polygon_area(std::span<const Eigen::Vector2d> poly) {
    double a = 0.0;
    const size_t m = poly.size();
    for (size_t i = 0; i < m; ++i)
        a += poly[i].x() * poly[(i + 1) % m].y() - poly[(i + 1) % m].x() * poly[i].y();
    return 0.5 * a;
}

QuadratureRule polygon_quadrature(std::span<const Eigen::Vector2d> poly, int exactness) {
    if (poly.size() < 3) throw std::invalid_argument("polygon_quadrature: fewer than 3 vertices");
    const Eigen::Vector2d c = polygon_centroid(poly);
    QuadratureRule rule;
    const size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % m];
        const double jac = (a - c).x() * (b - c).y() - (a - c).y() * (b - c).x();
        if (jac <= 0.0)
            throw std::invalid_argument("polygon_quadrature: non-convex or CW polygon");
        QuadratureRule tri = triangle_quadrature(c, a, b, exactness);
        rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
        rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
    }
    return rule;
}

int default_exactness(int k) { return 2 * k + 2; }

Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadratureRule& quad) {
    const int n = basis.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd vals(n);
    for (int q = 0; q < quad.size(); ++q) {
        for (int i = 0; i < n; ++i) vals[i] = basis.eval(i, quad.points[q]);
        m += quad.weights[q] * vals * vals.transpose();
    }
    return m;
}

Eigen::MatrixXd edge_mass_matrix(int k, double length) {
    EdgeBasis basis(k);
    std::vector<double> x, w;
    gauss_legendre(k + 1, x, w);
    const int n = basis.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd vals(n);
    for (size_t q = 0; q < x.size(); ++q) {
        const double t = 0.5 * (x[q] + 1.0);
        for (int i = 0; i < n; ++i) vals[i] = basis.eval(i, t);
        m += 0.5 * w[q] * length * vals * vals.transpose();
    }
    return m;
}

namespace {

Eigen::VectorXd solve_mass(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs,
                           const char* who) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(std::string(who) + ": singular mass matrix (degenerate geometry)");
    return llt.solve(rhs);
}

}  // namespace

Eigen::VectorXd project_q0(const ScalarField& f, std::span<const Eigen::Vector2d> poly, int k,
                           int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    CellBasis basis = CellBasis::for_polygon(k, poly);
    QuadratureRule quad = polygon_quadrature(poly, exactness);
    Eigen::MatrixXd m = cell_mass_matrix(basis, quad);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(basis.size());
    for (int q = 0; q < quad.size(); ++q) {
        const double fv = quad.weights[q] * f(quad.points[q]);
        for (int i = 0; i < basis.size(); ++i) r[i] += fv * basis.eval(i, quad.points[q]);
    }
    return solve_mass(m, r, "project_q0");
}

Eigen::VectorXd project_qh(const VectorField& g, std::span<const Eigen::Vector2d> poly, int k,
                           int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    CellBasis basis = CellBasis::for_polygon(k - 1, poly);
    QuadratureRule quad = polygon_quadrature(poly, exactness);
    Eigen::MatrixXd m = cell_mass_matrix(basis, quad);
    const int ns = basis.size();
    Eigen::VectorXd rx = Eigen::VectorXd::Zero(ns);
    Eigen::VectorXd ry = Eigen::VectorXd::Zero(ns);
    for (int q = 0; q < quad.size(); ++q) {
        const Eigen::Vector2d gv = quad.weights[q] * g(quad.points[q]);
        for (int i = 0; i < ns; ++i) {
            const double bi = basis.eval(i, quad.points[q]);
            rx[i] += gv.x() * bi;
            ry[i] += gv.y() * bi;
        }
    }
    Eigen::VectorXd out(2 * ns);
    out.head(ns) = solve_mass(m, rx, "project_qh");
    out.tail(ns) = solve_mass(m, ry, "project_qh");
    return out;
}

Eigen::VectorXd interpolate_ib(const ScalarField& g, const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, int k) {
    EdgeBasis basis(k);
    Eigen::VectorXd vals(basis.size());
    for (int i = 0; i < basis.size(); ++i) vals[i] = g(a + basis.node(i) * (b - a));
    return vals;
}

Eigen::VectorXd project_qb(const ScalarField& g, const Eigen::Vector2d& a,
                           const Eigen::Vector2d& b, int k, int exactness) {
    if (exactness < 0) exactness = default_exactness(k);
    const double len = (b - a).norm();
    EdgeBasis basis(k);
    Eigen::MatrixXd m = edge_mass_matrix(k, len);
    QuadratureRule quad = edge_quadrature(a, b, exactness);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(basis.size());
    for (int q = 0; q < quad.size(); ++q) {
        // recover the edge parameter of the quadrature point
        const double t = (quad.points[q] - a).norm() / len;
        const double gv = quad.weights[q] * g(quad.points[q]);
        for (int i = 0; i < basis.size(); ++i) r[i] += gv * basis.eval(i, t);
    }
    return solve_mass(m, r, "project_qb");
}

}  // namespace cwg
