#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sdmce
{

/** @brief Mesh file formats understood by the loader */
enum class MeshFormat { obj, off };

/** @brief Output formats for a computed parameterization */
enum class UvFormat {
    obj, /**< OBJ with one "vt" per vertex and "f i/i j/j k/k" faces */
    csv  /**< "index,u,v" header followed by one row per vertex */
};

enum class DefectKind {
    index_out_of_range,
    repeated_index,
    non_manifold_edge,
    inconsistent_winding,
    isolated_vertex,
    non_simple_boundary,
    no_boundary,
    multiple_boundary_loops,
    euler_characteristic,
};

std::string to_string(DefectKind kind);

/**
 * @brief A single topological defect.
 *
 * `element` is a face index for face and edge defects (the first face found
 * on the offending edge), a vertex index for vertex defects, the loop count
 * for boundary-loop defects, and the Euler characteristic for
 * `euler_characteristic`.
 */
struct Defect {
    DefectKind kind;
    int element;
    std::string detail;
};

struct MeshDiagnostics {
    int vertex_count = 0;
    int edge_count = 0;
    int face_count = 0;
    int boundary_loop_count = 0;
    int euler_characteristic = 0;
    bool is_disk = false;
    std::vector<Defect> defects;
    /// Pairs of vertices closer than 1e-12 of the bounding-box diagonal. Not a defect.
    std::vector<std::pair<int, int>> coincident_vertices;
};

/// Runs every topology check without throwing.
MeshDiagnostics diagnose(const Eigen::MatrixX3d& vertices,
                         const Eigen::MatrixX3i& faces);

/**
 * @brief Ordered boundary loop of an oriented manifold triangle complex.
 *
 * The loop follows the direction induced by the face orientation and starts
 * at its smallest vertex index. Throws TopologyError unless the boundary
 * edges form exactly one simple cycle.
 */
std::vector<int> extract_boundary(const Eigen::MatrixX3i& faces);

/**
 * @brief Immutable triangle mesh with disk topology.
 *
 * Construction validates the mesh and throws TopologyError naming the first
 * offending element when it is not a consistently oriented topological disk.
 */
class TriMesh
{
public:
    TriMesh(Eigen::MatrixX3d vertices, Eigen::MatrixX3i faces);

    const Eigen::MatrixX3d& vertices() const noexcept { return vertices_; }
    const Eigen::MatrixX3i& faces() const noexcept { return faces_; }
    int vertex_count() const noexcept { return static_cast<int>(vertices_.rows()); }
    int face_count() const noexcept { return static_cast<int>(faces_.rows()); }

    /// Boundary vertices in loop order (counter-clockwise w.r.t. the face orientation).
    const std::vector<int>& boundary_loop() const noexcept { return boundary_; }
    /// Non-boundary vertices in increasing index order.
    const std::vector<int>& interior_vertices() const noexcept { return interior_; }
    bool is_boundary(int v) const { return boundary_position_[v] >= 0; }
    /// Position of `v` in the boundary loop, or -1 for interior vertices.
    int boundary_position(int v) const { return boundary_position_[v]; }

    /// Sorted one-ring neighbours of each vertex.
    std::span<const int> neighbors(int v) const;

    Eigen::Vector3d vertex(int v) const { return vertices_.row(v).transpose(); }

private:
    Eigen::MatrixX3d vertices_;
    Eigen::MatrixX3i faces_;
    std::vector<int> boundary_;
    std::vector<int> interior_;
    std::vector<int> boundary_position_;
    std::vector<int> ring_offsets_;
    std::vector<int> ring_;
};

/** @brief Unvalidated contents of a mesh file */
struct RawMesh {
    Eigen::MatrixX3d vertices;
    Eigen::MatrixX3i faces;
    /// Per-vertex texture coordinates when the file carries one per vertex.
    std::optional<Eigen::MatrixX2d> uv;
};

/// Parses a mesh file without topology validation. Throws ParseError.
RawMesh read_mesh(std::istream& in, MeshFormat format);

/// Parses and validates. Throws ParseError or TopologyError.
TriMesh load_mesh(std::istream& in, MeshFormat format);
TriMesh load_mesh(const std::filesystem::path& path);

/// Infers the format from the file extension (".obj" or ".off", case-insensitive).
MeshFormat format_from_path(const std::filesystem::path& path);

/// Writes the 3D mesh itself (no UVs). Throws IoError.
void write_mesh(const TriMesh& mesh, std::ostream& out, MeshFormat format);

/**
 * @brief Writes a parameterization. Floats use 17 significant digits.
 *
 * Throws IoError if the stream fails or `uv` does not have one row per vertex.
 */
void write_parameterized(const TriMesh& mesh, const Eigen::MatrixX2d& uv,
                         std::ostream& out, UvFormat format);
void write_parameterized(const TriMesh& mesh, const Eigen::MatrixX2d& uv,
                         const std::filesystem::path& path);

/// Reads an "index,u,v" CSV with exactly `vertex_count` rows. Throws ParseError.
Eigen::MatrixX2d read_uv_csv(std::istream& in, int vertex_count);

}  // namespace sdmce
