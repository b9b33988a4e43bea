#pragma once

#include <string>

#include <Eigen/Core>

#include "sdmce/mesh_io.hpp"

namespace sdmce
{

struct SvgOptions {
    int size = 800;
    double stroke_width = 0.5;
    std::string edge_color = "#1f3b5c";
    std::string fold_color = "#d9534f";
    std::string circle_color = "#999999";
};

/// Unit circle, every triangle edge, folded faces filled. Output depends only on the inputs.
std::string render_svg(const TriMesh& mesh, const Eigen::MatrixX2d& f, const SvgOptions& options = {});

}  // namespace sdmce
