#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwg {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    int v0 = -1;  // orientation as first traversed
    int v1 = -1;
    int cell0 = -1;
    int cell1 = -1;
    bool boundary() const { return cell1 < 0; }
};

/// Side i of a cell runs from loop vertex i to loop vertex i+1 (CCW).
/// reversed is set when the stored edge orientation is the opposite.
struct CellEdgeRef {
    int edge = -1;
    bool reversed = false;
};

/// Immutable after construction. Cells are simple convex CCW polygons;
/// edge topology and boundary flags are derived from the cell loops.
class Mesh {
public:
    std::vector<Eigen::Vector2d> vertices;
    std::vector<std::vector<int>> cells;
    std::vector<Edge> edges;
    std::vector<std::vector<CellEdgeRef>> cell_edges;
    std::vector<double> cell_diameter;
    std::vector<bool> vertex_on_boundary;
    double mesh_size = 0.0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_cells() const { return static_cast<int>(cells.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    std::vector<Eigen::Vector2d> cell_polygon(int c) const;
    double cell_area(int c) const;
    double edge_length(int e) const;

    /// Builds edge topology, diameters and boundary flags, and validates
    /// every Mesh invariant. Throws MeshError on any violation.
    static Mesh from_cells(std::vector<Eigen::Vector2d> vertices,
                           std::vector<std::vector<int>> cells);
};

Mesh build_uniform_triangle_mesh(int n);
Mesh build_uniform_rectangle_mesh(int n);

/// Uniform triangle mesh with interior vertices displaced by at most
/// jitter/n in each coordinate, deterministically from seed.
Mesh build_perturbed_triangle_mesh(int n, double jitter, unsigned seed);

Mesh load_mesh(const std::filesystem::path& path);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace cwg
