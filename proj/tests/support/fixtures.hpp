#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdmce/mesh_io.hpp"
#include "sdmce/shapes.hpp"

namespace sdmce::testing
{

TriMesh make_mesh(std::initializer_list<std::initializer_list<double>> vertices,
                  std::initializer_list<std::initializer_list<int>> faces);

/**
 * Polar disk with every vertex nudged by a seeded random amount.
 *
 * Interior vertices move by up to `amplitude` of the ring spacing (re-projected
 * onto the sphere for the hemisphere); rim vertices slide along the rim by up
 * to `amplitude` of the rim spacing. The center stays put.
 */
TriMesh jittered_disk(int rings, shapes::Surface surface, double amplitude, std::uint64_t seed);

/// Faces of `mesh` that touch no boundary vertex, ordered by distance of their centroid to `center`.
std::vector<int> deep_faces(const TriMesh& mesh, const Eigen::MatrixX2d& f,
                            const Eigen::RowVector2d& center);

/// Boundary face on the rim edge ending at loop position `position`.
int boundary_face_at(const TriMesh& mesh, int position);

/// Swaps the images of loop positions `position - 1` and `position`.
void plant_boundary_swap(const TriMesh& mesh, Eigen::MatrixX2d& f, int position);

/// Moves the apex of a rim face just outside the circle, past its rim chord.
void plant_apex_beyond(const TriMesh& mesh, Eigen::MatrixX2d& f, int face);

/// Reflects one interior vertex of `face` across the opposite edge.
void plant_interior_flip(const TriMesh& mesh, Eigen::MatrixX2d& f, int face);

std::string obj_text(const TriMesh& mesh);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace sdmce::testing
