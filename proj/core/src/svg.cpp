#include "sdmce/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

#include "sdmce/unfolding.hpp"

namespace sdmce
{

namespace
{

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

}  // namespace

std::string render_svg(const TriMesh& mesh, const Eigen::MatrixX2d& f, const SvgOptions& opt)
{
    const double half = opt.size / 2.0;
    const double scale = half * 0.95;
    auto px = [&](double x) { return fmt(half + scale * x); };
    auto py = [&](double y) { return fmt(half - scale * y); };

    const FoldingReport folds = classify_folding(mesh, f);
    std::vector<int> filled;
    for (const auto* list :
         {&folds.folded_interior_triangles, &folds.folded_boundary_triangles_kind1,
          &folds.folded_boundary_triangles_kind2, &folds.folded_boundary_triangles_kind3}) {
        filled.insert(filled.end(), list->begin(), list->end());
    }
    std::sort(filled.begin(), filled.end());

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size << "\" height=\""
      << opt.size << "\" viewBox=\"0 0 " << opt.size << ' ' << opt.size << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<circle cx=\"" << fmt(half) << "\" cy=\"" << fmt(half) << "\" r=\"" << fmt(scale)
      << "\" fill=\"none\" stroke=\"" << opt.circle_color << "\" stroke-width=\"1\"/>\n";

    const auto& F = mesh.faces();
    s << "<g id=\"folded\" fill=\"" << opt.fold_color << "\" stroke=\"none\">\n";
    for (int t : filled) {
        s << "<polygon points=\"";
        for (int c = 0; c < 3; ++c) {
            s << (c ? " " : "") << px(f(F(t, c), 0)) << ',' << py(f(F(t, c), 1));
        }
        s << "\"/>\n";
    }
    s << "</g>\n";

    // each undirected edge once
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(F.rows()) * 3);
    for (Eigen::Index t = 0; t < F.rows(); ++t) {
        for (int c = 0; c < 3; ++c) {
            const int a = F(t, c);
            const int b = F(t, (c + 1) % 3);
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    s << "<g id=\"edges\" stroke=\"" << opt.edge_color << "\" stroke-width=\""
      << fmt(opt.stroke_width) << "\">\n";
    for (const auto& [a, b] : edges) {
        s << "<line x1=\"" << px(f(a, 0)) << "\" y1=\"" << py(f(a, 1)) << "\" x2=\"" << px(f(b, 0))
          << "\" y2=\"" << py(f(b, 1)) << "\"/>\n";
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

}  // namespace sdmce
