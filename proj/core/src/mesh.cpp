#include "cwg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace cwg {

namespace {

double polygon_signed_area(const std::vector<Eigen::Vector2d>& p) {
    double a = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const auto& u = p[i];
        const auto& v = p[(i + 1) % p.size()];
        a += u.x() * v.y() - v.x() * u.y();
    }
    return 0.5 * a;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

std::vector<Eigen::Vector2d> Mesh::cell_polygon(int c) const {
    std::vector<Eigen::Vector2d> p;
    p.reserve(cells[c].size());
    for (int v : cells[c]) p.push_back(vertices[v]);
    return p;
}

double Mesh::cell_area(int c) const { return polygon_signed_area(cell_polygon(c)); }

double Mesh::edge_length(int e) const {
    return (vertices[edges[e].v1] - vertices[edges[e].v0]).norm();
}

Mesh Mesh::from_cells(std::vector<Eigen::Vector2d> vertices,
                      std::vector<std::vector<int>> cells) {
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.cells = std::move(cells);

    const int nv = mesh.num_vertices();
    mesh.cell_edges.resize(mesh.cells.size());
    mesh.cell_diameter.resize(mesh.cells.size());

    std::map<std::pair<int, int>, int> edge_of;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& loop = mesh.cells[c];
        const int m = static_cast<int>(loop.size());
        if (m < 3) throw MeshError("cell " + std::to_string(c) + ": fewer than 3 vertices");
        for (int v : loop)
            if (v < 0 || v >= nv)
                throw MeshError("cell " + std::to_string(c) + ": dangling vertex " +
                                std::to_string(v));

        auto poly = mesh.cell_polygon(c);
        const double area = polygon_signed_area(poly);
        if (area <= 0.0)
            throw MeshError("cell " + std::to_string(c) + ": not counterclockwise / zero area");

        double diam = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                diam = std::max(diam, (poly[i] - poly[j]).norm());
        mesh.cell_diameter[c] = diam;

        // strict convexity, scale-relative tolerance
        for (int i = 0; i < m; ++i) {
            const Eigen::Vector2d e0 = poly[(i + 1) % m] - poly[i];
            const Eigen::Vector2d e1 = poly[(i + 2) % m] - poly[(i + 1) % m];
            if (cross2(e0, e1) <= 1e-14 * diam * diam)
                throw MeshError("cell " + std::to_string(c) + ": not strictly convex");
        }

        mesh.cell_edges[c].resize(m);
        for (int i = 0; i < m; ++i) {
            const int a = loop[i];
            const int b = loop[(i + 1) % m];
            if (a == b) throw MeshError("cell " + std::to_string(c) + ": degenerate side");
            auto key = std::minmax(a, b);
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                Edge e;
                e.v0 = a;
                e.v1 = b;
                e.cell0 = c;
                edge_of.emplace(key, mesh.num_edges());
                mesh.cell_edges[c][i] = {mesh.num_edges(), false};
                mesh.edges.push_back(e);
            } else {
                Edge& e = mesh.edges[it->second];
                if (e.cell1 >= 0)
                    throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                    "): shared by more than 2 cells");
                if (e.v0 != b || e.v1 != a)
                    throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                    "): inconsistent orientation between adjacent cells");
                e.cell1 = c;
                mesh.cell_edges[c][i] = {it->second, true};
            }
        }
    }

    mesh.mesh_size = 0.0;
    for (double d : mesh.cell_diameter) mesh.mesh_size = std::max(mesh.mesh_size, d);

    mesh.vertex_on_boundary.assign(nv, false);
    for (const Edge& e : mesh.edges) {
        if (e.boundary()) {
            mesh.vertex_on_boundary[e.v0] = true;
            mesh.vertex_on_boundary[e.v1] = true;
        }
    }
    return mesh;
}

Mesh build_uniform_triangle_mesh(int n) {
    if (n < 1) throw MeshError("build_uniform_triangle_mesh: n must be >= 1");
    std::vector<Eigen::Vector2d> verts;
    verts.reserve(static_cast<size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::vector<int>> cells;
    cells.reserve(static_cast<size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            // split along the bottom-left -> top-right diagonal
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return Mesh::from_cells(std::move(verts), std::move(cells));
}

Mesh build_uniform_rectangle_mesh(int n) {
    if (n < 1) throw MeshError("build_uniform_rectangle_mesh: n must be >= 1");
    std::vector<Eigen::Vector2d> verts;
    verts.reserve(static_cast<size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::vector<int>> cells;
    cells.reserve(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return Mesh::from_cells(std::move(verts), std::move(cells));
}

Mesh build_perturbed_triangle_mesh(int n, double jitter, unsigned seed) {
    if (n < 1) throw MeshError("build_perturbed_triangle_mesh: n must be >= 1");
    if (jitter < 0.0 || jitter >= 0.5)
        throw MeshError("build_perturbed_triangle_mesh: jitter must be in [0, 0.5)");
    Mesh base = build_uniform_triangle_mesh(n);

    // Implementation-defined distributions would break cross-platform
    // determinism; map raw mt19937 draws to [-1, 1] directly.
    std::mt19937 rng(seed);
    auto unit = [&rng]() { return 2.0 * (rng() * (1.0 / 4294967296.0)) - 1.0; };

    const double h = 1.0 / n;
    std::vector<Eigen::Vector2d> verts = base.vertices;
    for (size_t v = 0; v < verts.size(); ++v) {
        const double dx = unit() * jitter * h;
        const double dy = unit() * jitter * h;
        if (!base.vertex_on_boundary[v]) verts[v] += Eigen::Vector2d(dx, dy);
    }
    return Mesh::from_cells(std::move(verts), base.cells);
}

Mesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file: " + path.string());

    auto fail = [&path](int line, const std::string& what) -> MeshError {
        return MeshError(path.string() + ":" + std::to_string(line) + ": " + what);
    };

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw fail(1, "missing header line");
    ++lineno;
    long nv = -1, nc = -1;
    {
        std::istringstream ss(line);
        if (!(ss >> nv >> nc) || nv < 0 || nc < 0) throw fail(lineno, "malformed counts");
    }

    std::vector<Eigen::Vector2d> verts;
    verts.reserve(static_cast<size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!std::getline(in, line)) throw fail(lineno + 1, "unexpected end of file in vertices");
        ++lineno;
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x >> y)) throw fail(lineno, "malformed vertex");
        verts.emplace_back(x, y);
    }

    std::vector<std::vector<int>> cells;
    cells.reserve(static_cast<size_t>(nc));
    for (long c = 0; c < nc; ++c) {
        if (!std::getline(in, line)) throw fail(lineno + 1, "unexpected end of file in cells");
        ++lineno;
        std::istringstream ss(line);
        int m;
        if (!(ss >> m) || m < 3) throw fail(lineno, "malformed cell size");
        std::vector<int> loop(m);
        for (int i = 0; i < m; ++i) {
            if (!(ss >> loop[i])) throw fail(lineno, "malformed cell vertex list");
            if (loop[i] < 0 || loop[i] >= nv) throw fail(lineno, "dangling vertex");
        }
        // report orientation problems with the offending line
        std::vector<Eigen::Vector2d> poly;
        for (int v : loop) poly.push_back(verts[v]);
        if (polygon_signed_area(poly) <= 0.0) throw fail(lineno, "cell is not counterclockwise");
        cells.push_back(std::move(loop));
    }

    try {
        return Mesh::from_cells(std::move(verts), std::move(cells));
    } catch (const MeshError& e) {
        throw MeshError(path.string() + ": " + e.what());
    }
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file: " + path.string());
    char buf[80];
    out << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
        out << buf;
    }
    for (const auto& loop : mesh.cells) {
        out << loop.size();
        for (int v : loop) out << ' ' << v;
        out << '\n';
    }
    if (!out) throw MeshError("write failed: " + path.string());
}

}  // namespace cwg
