#pragma once

#include "sdmce/mesh_io.hpp"

namespace sdmce::shapes
{

/// Center vertex 0 and n rim vertices on the unit circle in the z = 0 plane.
TriMesh make_fan(int n);

enum class Surface { plane, hemisphere };

/**
 * @brief Disk of K concentric rings, ring k holding 6k vertices.
 *
 * `plane`: ring k at radius k / K. `hemisphere`: ring k at polar angle
 * (pi/2)(k/K) on the unit sphere, so the rim is the equator.
 * Has 1 + 3K(K+1) vertices and 6K boundary vertices.
 */
TriMesh make_polar_disk(int rings, Surface surface);

}  // namespace sdmce::shapes
