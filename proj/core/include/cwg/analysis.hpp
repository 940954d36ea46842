#pragma once

#include "cwg/condensation.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cwg {

struct ManufacturedCase {
    std::string name;
    ScalarField u;
    VectorField grad_u;
    Coefficient a;
    ScalarField f;
};

ManufacturedCase manufactured_case_1();  // u = sin(pi x) sin(pi y)
ManufacturedCase manufactured_case_2();  // u = x(1-x) y(1-y)
ManufacturedCase manufactured_case_by_name(const std::string& name);

/// |||Qt_h u - u_h||| via the per-cell K+S energy of the interpolant
/// residual (Q_0 on interiors, I_b nodal values on the skeleton).
double energy_error(const Mesh& mesh, int k, const WeakFunction& u_h, const ManufacturedCase& mc);

/// ||Q_0 u - u_0|| over all cells.
double l2_error(const Mesh& mesh, int k, const WeakFunction& u_h, const ManufacturedCase& mc);

enum class MeshKind { UniformTriangle, UniformRectangle, PerturbedTriangle };
enum class SolvePath { Full, Schur };

struct ConvergenceRow {
    double h = 0.0;
    long dof = 0;
    double energy_err = 0.0;
    double l2_err = 0.0;
    std::optional<double> energy_rate;
    std::optional<double> l2_rate;
};

struct ConvergenceOptions {
    SolvePath path = SolvePath::Schur;
    double jitter = 0.2;     // perturbed meshes only
    unsigned seed = 1;
    CgOptions cg;
    int k = 1;
    int exactness = -1;  // quadrature override, -1 for the 2k+2 default
};

std::vector<ConvergenceRow> run_convergence(const ManufacturedCase& mc, MeshKind kind,
                                            const std::vector<int>& levels,
                                            const ConvergenceOptions& opts);

enum class Scheme { WG, CWG, WGSchur, CWGSchur, CG };

/// Closed-form dof counts on the uniform unit-square families. The WG,
/// WG-Schur and CG columns are defined for k=1 triangles only; the CWG
/// variants for any k >= 1 on either uniform family.
long dof_count(Scheme scheme, MeshKind family, int n, int k);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace cwg
