#include "sdmce/shapes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sdmce::shapes
{

TriMesh make_fan(int n)
{
    if (n < 3) {
        throw std::invalid_argument("a fan needs at least three rim vertices");
    }
    Eigen::MatrixX3d V(n + 1, 3);
    Eigen::MatrixX3i F(n, 3);
    V.row(0).setZero();
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        V.row(i + 1) << std::cos(t), std::sin(t), 0.0;
        F.row(i) << 0, i + 1, (i + 1) % n + 1;
    }
    return TriMesh(std::move(V), std::move(F));
}

TriMesh make_polar_disk(int rings, Surface surface)
{
    if (rings < 1) {
        throw std::invalid_argument("need at least one ring");
    }
    const double pi = std::numbers::pi;
    const int nv = 1 + 3 * rings * (rings + 1);
    Eigen::MatrixX3d V(nv, 3);
    std::vector<int> first(rings + 1);
    V.row(0) << 0.0, 0.0, surface == Surface::hemisphere ? 1.0 : 0.0;
    first[0] = 0;
    int next = 1;
    for (int k = 1; k <= rings; ++k) {
        first[k] = next;
        const int m = 6 * k;
        for (int j = 0; j < m; ++j) {
            const double t = 2 * pi * j / m;
            if (surface == Surface::plane) {
                const double r = static_cast<double>(k) / rings;
                V.row(next++) << r * std::cos(t), r * std::sin(t), 0.0;
            } else {
                const double phi = 0.5 * pi * k / rings;
                V.row(next++) << std::sin(phi) * std::cos(t), std::sin(phi) * std::sin(t),
                    std::cos(phi);
            }
        }
    }

    std::vector<Eigen::Vector3i> faces;
    for (int j = 0; j < 6; ++j) {
        faces.emplace_back(0, first[1] + j, first[1] + (j + 1) % 6);
    }
    for (int k = 2; k <= rings; ++k) {
        const int np = 6 * (k - 1);
        const int nq = 6 * k;
        auto p = [&](int i) { return first[k - 1] + i % np; };
        auto q = [&](int j) { return first[k] + j % nq; };
        int i = 0;
        int j = 0;
        // merge the two rings by angle; compare (i+1)/np with (j+1)/nq exactly
        while (i < np || j < nq) {
            const bool advance_q = j < nq && (i == np || static_cast<long>(j + 1) * np <=
                                                              static_cast<long>(i + 1) * nq);
            if (advance_q) {
                faces.emplace_back(p(i), q(j), q(j + 1));
                ++j;
            } else {
                faces.emplace_back(p(i), q(j), p(i + 1));
                ++i;
            }
        }
    }
    Eigen::MatrixX3i F(static_cast<Eigen::Index>(faces.size()), 3);
    for (std::size_t t = 0; t < faces.size(); ++t) {
        F.row(static_cast<Eigen::Index>(t)) = faces[t].transpose();
    }
    return TriMesh(std::move(V), std::move(F));
}

}  // namespace sdmce::shapes
