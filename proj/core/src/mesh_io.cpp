#include "sdmce/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "sdmce/errors.hpp"
#include "sdmce/logging.hpp"

namespace sdmce
{

std::string to_string(DefectKind kind)
{
    switch (kind) {
        case DefectKind::index_out_of_range: return "index_out_of_range";
        case DefectKind::repeated_index: return "repeated_index";
        case DefectKind::non_manifold_edge: return "non_manifold_edge";
        case DefectKind::inconsistent_winding: return "inconsistent_winding";
        case DefectKind::isolated_vertex: return "isolated_vertex";
        case DefectKind::non_simple_boundary: return "non_simple_boundary";
        case DefectKind::no_boundary: return "no_boundary";
        case DefectKind::multiple_boundary_loops: return "multiple_boundary_loops";
        case DefectKind::euler_characteristic: return "euler_characteristic";
    }
    return "unknown";
}

namespace
{

std::uint64_t edge_key(int a, int b)
{
    auto lo = static_cast<std::uint32_t>(std::min(a, b));
    auto hi = static_cast<std::uint32_t>(std::max(a, b));
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

struct EdgeUse {
    int count = 0;
    int forward = 0;  // occurrences as (lo -> hi)
    int first_face = -1;
    int from = -1;  // direction of the single use, for boundary edges
    int to = -1;
};

using EdgeMap = std::unordered_map<std::uint64_t, EdgeUse>;

EdgeMap collect_edges(const Eigen::MatrixX3i& faces, const std::vector<bool>& valid)
{
    EdgeMap edges;
    edges.reserve(static_cast<std::size_t>(faces.rows()) * 2);
    for (Eigen::Index f = 0; f < faces.rows(); ++f) {
        if (!valid[f]) {
            continue;
        }
        for (int c = 0; c < 3; ++c) {
            int a = faces(f, c);
            int b = faces(f, (c + 1) % 3);
            auto& use = edges[edge_key(a, b)];
            if (use.count == 0) {
                use.first_face = static_cast<int>(f);
            }
            ++use.count;
            if (a < b) {
                ++use.forward;
            }
            use.from = a;
            use.to = b;
        }
    }
    return edges;
}

struct BoundaryTrace {
    std::vector<std::vector<int>> loops;
    std::vector<int> branching_vertices;
};

// Follows boundary half-edges (single-use edges, in face direction).
BoundaryTrace trace_boundary(const EdgeMap& edges, int vertex_count)
{
    BoundaryTrace out;
    std::vector<int> next(vertex_count, -1);
    std::vector<int> out_degree(vertex_count, 0);
    std::vector<std::pair<int, int>> half_edges;
    for (const auto& [key, use] : edges) {
        if (use.count == 1) {
            half_edges.emplace_back(use.from, use.to);
        }
    }
    std::sort(half_edges.begin(), half_edges.end());
    for (auto [a, b] : half_edges) {
        if (out_degree[a]++ == 0) {
            next[a] = b;
        }
    }
    for (int v = 0; v < vertex_count; ++v) {
        if (out_degree[v] > 1) {
            out.branching_vertices.push_back(v);
        }
    }
    std::vector<bool> visited(vertex_count, false);
    for (auto [start, unused] : half_edges) {
        (void)unused;
        if (visited[start]) {
            continue;
        }
        std::vector<int> loop;
        int v = start;
        while (v >= 0 && !visited[v]) {
            visited[v] = true;
            loop.push_back(v);
            v = next[v];
        }
        out.loops.push_back(std::move(loop));
    }
    return out;
}

std::vector<int> canonical_loop(std::vector<int> loop)
{
    auto smallest = std::min_element(loop.begin(), loop.end());
    std::rotate(loop.begin(), smallest, loop.end());
    return loop;
}

}  // namespace

MeshDiagnostics diagnose(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces)
{
    MeshDiagnostics diag;
    const int nv = static_cast<int>(vertices.rows());
    const int nf = static_cast<int>(faces.rows());
    diag.vertex_count = nv;
    diag.face_count = nf;

    std::vector<bool> valid(nf, true);
    for (int f = 0; f < nf; ++f) {
        const auto row = faces.row(f);
        for (int c = 0; c < 3; ++c) {
            if (row(c) < 0 || row(c) >= nv) {
                diag.defects.push_back({DefectKind::index_out_of_range, f,
                                        "face " + std::to_string(f) + " references vertex " +
                                            std::to_string(row(c))});
                valid[f] = false;
                break;
            }
        }
        if (valid[f] && (row(0) == row(1) || row(1) == row(2) || row(0) == row(2))) {
            diag.defects.push_back({DefectKind::repeated_index, f,
                                    "face " + std::to_string(f) + " repeats a vertex"});
            valid[f] = false;
        }
    }

    const EdgeMap edges = collect_edges(faces, valid);
    diag.edge_count = static_cast<int>(edges.size());

    std::vector<std::pair<std::uint64_t, const EdgeUse*>> sorted;
    sorted.reserve(edges.size());
    for (const auto& [key, use] : edges) {
        sorted.emplace_back(key, &use);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, use] : sorted) {
        const int lo = static_cast<int>(key >> 32);
        const int hi = static_cast<int>(key & 0xffffffffu);
        const std::string name = "edge (" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
        if (use->count > 2) {
            diag.defects.push_back({DefectKind::non_manifold_edge, use->first_face,
                                    name + " is shared by " + std::to_string(use->count) +
                                        " faces"});
        }
        else if (use->count == 2 && use->forward != 1) {
            diag.defects.push_back({DefectKind::inconsistent_winding, use->first_face,
                                    name + " is traversed twice in the same direction"});
        }
    }

    std::vector<bool> used(nv, false);
    for (int f = 0; f < nf; ++f) {
        if (valid[f]) {
            for (int c = 0; c < 3; ++c) {
                used[faces(f, c)] = true;
            }
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (!used[v]) {
            diag.defects.push_back(
                {DefectKind::isolated_vertex, v, "vertex " + std::to_string(v) + " is isolated"});
        }
    }

    const BoundaryTrace trace = trace_boundary(edges, nv);
    for (int v : trace.branching_vertices) {
        diag.defects.push_back({DefectKind::non_simple_boundary, v,
                                "boundary passes through vertex " + std::to_string(v) +
                                    " more than once"});
    }
    diag.boundary_loop_count = static_cast<int>(trace.loops.size());
    if (trace.loops.empty()) {
        diag.defects.push_back({DefectKind::no_boundary, 0, "no boundary loop"});
    }
    else if (trace.loops.size() > 1) {
        diag.defects.push_back({DefectKind::multiple_boundary_loops, diag.boundary_loop_count,
                                std::to_string(trace.loops.size()) + " boundary loops"});
    }

    diag.euler_characteristic = nv - diag.edge_count + nf;
    if (diag.euler_characteristic != 1) {
        diag.defects.push_back({DefectKind::euler_characteristic, diag.euler_characteristic,
                                "Euler characteristic is " +
                                    std::to_string(diag.euler_characteristic) + ", expected 1"});
    }

    if (nv > 1) {
        const Eigen::Vector3d lo = vertices.colwise().minCoeff();
        const Eigen::Vector3d hi = vertices.colwise().maxCoeff();
        const double tol = 1e-12 * (hi - lo).norm();
        std::vector<int> order(nv);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return vertices(a, 0) < vertices(b, 0) ||
                   (vertices(a, 0) == vertices(b, 0) && a < b);
        });
        for (int i = 0; i < nv; ++i) {
            for (int j = i + 1; j < nv; ++j) {
                const int a = order[i];
                const int b = order[j];
                if (vertices(b, 0) - vertices(a, 0) > tol) {
                    break;
                }
                if ((vertices.row(a) - vertices.row(b)).norm() <= tol) {
                    diag.coincident_vertices.emplace_back(std::min(a, b), std::max(a, b));
                }
            }
        }
        std::sort(diag.coincident_vertices.begin(), diag.coincident_vertices.end());
    }

    diag.is_disk = diag.boundary_loop_count == 1 && diag.euler_characteristic == 1 &&
                   diag.defects.empty();
    return diag;
}

std::vector<int> extract_boundary(const Eigen::MatrixX3i& faces)
{
    const int nv = faces.size() == 0 ? 0 : faces.maxCoeff() + 1;
    if (faces.size() > 0 && faces.minCoeff() < 0) {
        throw TopologyError("negative vertex index in face list");
    }
    const std::vector<bool> valid(faces.rows(), true);
    const EdgeMap edges = collect_edges(faces, valid);
    const BoundaryTrace trace = trace_boundary(edges, nv);
    if (trace.loops.empty()) {
        throw TopologyError("no boundary loop");
    }
    if (!trace.branching_vertices.empty()) {
        throw TopologyError("boundary is not simple at vertex " +
                            std::to_string(trace.branching_vertices.front()));
    }
    if (trace.loops.size() != 1) {
        throw TopologyError("expected one boundary loop, found " +
                            std::to_string(trace.loops.size()));
    }
    return canonical_loop(trace.loops.front());
}

TriMesh::TriMesh(Eigen::MatrixX3d vertices, Eigen::MatrixX3i faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces))
{
    const MeshDiagnostics diag = diagnose(vertices_, faces_);
    if (!diag.is_disk) {
        const Defect& d = diag.defects.front();
        throw TopologyError(d.detail);
    }
    if (!diag.coincident_vertices.empty()) {
        log::warn("mesh has " + std::to_string(diag.coincident_vertices.size()) +
                  " pair(s) of coincident vertices");
    }
    boundary_ = extract_boundary(faces_);

    const int nv = vertex_count();
    boundary_position_.assign(nv, -1);
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
        boundary_position_[boundary_[i]] = static_cast<int>(i);
    }
    for (int v = 0; v < nv; ++v) {
        if (boundary_position_[v] < 0) {
            interior_.push_back(v);
        }
    }

    std::vector<std::vector<int>> rings(nv);
    for (Eigen::Index f = 0; f < faces_.rows(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const int a = faces_(f, c);
            rings[a].push_back(faces_(f, (c + 1) % 3));
            rings[a].push_back(faces_(f, (c + 2) % 3));
        }
    }
    ring_offsets_.assign(nv + 1, 0);
    for (int v = 0; v < nv; ++v) {
        auto& r = rings[v];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        ring_offsets_[v + 1] = ring_offsets_[v] + static_cast<int>(r.size());
    }
    ring_.reserve(ring_offsets_.back());
    for (const auto& r : rings) {
        ring_.insert(ring_.end(), r.begin(), r.end());
    }
}

std::span<const int> TriMesh::neighbors(int v) const
{
    return {ring_.data() + ring_offsets_[v],
            static_cast<std::size_t>(ring_offsets_[v + 1] - ring_offsets_[v])};
}

namespace
{

std::string trim_comment(const std::string& line)
{
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_ws(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

double parse_double(const std::string& tok, std::size_t line)
{
    double value = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError("invalid number '" + tok + "'", line);
    }
    return value;
}

long parse_long(const std::string& tok, std::size_t line)
{
    long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid integer '" + tok + "'", line);
    }
    return value;
}

// Resolves a 1-based (or negative, relative) OBJ index to 0-based.
int resolve_obj_index(long idx, std::size_t count, std::size_t line)
{
    if (idx > 0) {
        return static_cast<int>(idx - 1);
    }
    if (idx < 0 && static_cast<std::size_t>(-idx) <= count) {
        return static_cast<int>(static_cast<long>(count) + idx);
    }
    throw ParseError("invalid OBJ index " + std::to_string(idx), line);
}

RawMesh read_obj(std::istream& in)
{
    std::vector<Eigen::Vector3d> verts;
    std::vector<Eigen::Vector2d> texcoords;
    std::vector<Eigen::Vector3i> faces;
    std::vector<Eigen::Vector3i> face_uv;
    bool all_corners_have_uv = true;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto tokens = split_ws(trim_comment(raw));
        if (tokens.empty()) {
            continue;
        }
        const std::string& key = tokens[0];
        if (key == "v") {
            if (tokens.size() < 4) {
                throw ParseError("vertex needs three coordinates", line_no);
            }
            verts.emplace_back(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                               parse_double(tokens[3], line_no));
        }
        else if (key == "vt") {
            if (tokens.size() < 3) {
                throw ParseError("texture coordinate needs two values", line_no);
            }
            texcoords.emplace_back(parse_double(tokens[1], line_no),
                                   parse_double(tokens[2], line_no));
        }
        else if (key == "f") {
            const std::size_t corners = tokens.size() - 1;
            if (corners != 3) {
                throw ParseError("face with " + std::to_string(corners) +
                                     " vertices; only triangles are supported",
                                 line_no);
            }
            Eigen::Vector3i f;
            Eigen::Vector3i t(-1, -1, -1);
            for (int c = 0; c < 3; ++c) {
                const std::string& tok = tokens[c + 1];
                const auto slash = tok.find('/');
                f[c] = resolve_obj_index(parse_long(tok.substr(0, slash), line_no), verts.size(),
                                         line_no);
                if (slash != std::string::npos) {
                    const auto slash2 = tok.find('/', slash + 1);
                    const std::string vt = tok.substr(slash + 1, slash2 == std::string::npos
                                                                     ? std::string::npos
                                                                     : slash2 - slash - 1);
                    if (!vt.empty()) {
                        t[c] = resolve_obj_index(parse_long(vt, line_no), texcoords.size(),
                                                 line_no);
                    }
                }
                if (t[c] < 0) {
                    all_corners_have_uv = false;
                }
            }
            faces.push_back(f);
            face_uv.push_back(t);
        }
        // Other records (vn, o, g, s, usemtl, mtllib, ...) carry nothing we use.
    }
    if (in.bad()) {
        throw IoError("read failure");
    }

    RawMesh mesh;
    mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
    for (std::size_t i = 0; i < verts.size(); ++i) {
        mesh.vertices.row(static_cast<Eigen::Index>(i)) = verts[i].transpose();
    }
    mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        mesh.faces.row(static_cast<Eigen::Index>(i)) = faces[i].transpose();
    }

    if (!texcoords.empty()) {
        const auto nv = static_cast<Eigen::Index>(verts.size());
        if (all_corners_have_uv && !faces.empty()) {
            Eigen::MatrixX2d uv(nv, 2);
            std::vector<int> assigned(verts.size(), -1);
            for (std::size_t f = 0; f < faces.size(); ++f) {
                for (int c = 0; c < 3; ++c) {
                    const int v = faces[f][c];
                    const int t = face_uv[f][c];
                    if (v < 0 || v >= nv || t < 0 || t >= static_cast<int>(texcoords.size())) {
                        continue;
                    }
                    if (assigned[v] >= 0 && assigned[v] != t &&
                        texcoords[assigned[v]] != texcoords[t]) {
                        throw ParseError("vertex " + std::to_string(v + 1) +
                                             " has more than one texture coordinate",
                                         0);
                    }
                    assigned[v] = t;
                    uv.row(v) = texcoords[t].transpose();
                }
            }
            if (std::all_of(assigned.begin(), assigned.end(), [](int a) { return a >= 0; })) {
                mesh.uv = std::move(uv);
            }
        }
        else if (texcoords.size() == verts.size()) {
            Eigen::MatrixX2d uv(nv, 2);
            for (Eigen::Index i = 0; i < nv; ++i) {
                uv.row(i) = texcoords[i].transpose();
            }
            mesh.uv = std::move(uv);
        }
    }
    return mesh;
}

RawMesh read_off(std::istream& in)
{
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::pair<std::vector<std::string>, std::size_t>> lines;
    while (std::getline(in, raw)) {
        ++line_no;
        auto tokens = split_ws(trim_comment(raw));
        if (!tokens.empty()) {
            lines.emplace_back(std::move(tokens), line_no);
        }
    }
    if (in.bad()) {
        throw IoError("read failure");
    }
    if (lines.empty()) {
        throw ParseError("empty OFF file", 1);
    }

    std::size_t cursor = 0;
    auto header = lines[cursor].first;
    const std::size_t header_line = lines[cursor].second;
    if (header[0] != "OFF") {
        throw ParseError("missing OFF header", header_line);
    }
    std::vector<std::string> counts(header.begin() + 1, header.end());
    ++cursor;
    if (counts.empty()) {
        if (cursor >= lines.size()) {
            throw ParseError("missing counts line", header_line);
        }
        counts = lines[cursor].first;
        ++cursor;
    }
    const std::size_t counts_line = lines[cursor - 1].second;
    if (counts.size() < 2) {
        throw ParseError("counts line needs vertex and face counts", counts_line);
    }
    const long nv = parse_long(counts[0], counts_line);
    const long nf = parse_long(counts[1], counts_line);
    if (nv < 0 || nf < 0) {
        throw ParseError("negative element count", counts_line);
    }

    RawMesh mesh;
    mesh.vertices.resize(nv, 3);
    mesh.faces.resize(nf, 3);
    for (long i = 0; i < nv; ++i, ++cursor) {
        if (cursor >= lines.size()) {
            throw ParseError("expected " + std::to_string(nv) + " vertices", line_no);
        }
        const auto& [tokens, ln] = lines[cursor];
        if (tokens.size() < 3) {
            throw ParseError("vertex needs three coordinates", ln);
        }
        for (int c = 0; c < 3; ++c) {
            mesh.vertices(i, c) = parse_double(tokens[c], ln);
        }
    }
    for (long i = 0; i < nf; ++i, ++cursor) {
        if (cursor >= lines.size()) {
            throw ParseError("expected " + std::to_string(nf) + " faces", line_no);
        }
        const auto& [tokens, ln] = lines[cursor];
        const long n = parse_long(tokens[0], ln);
        if (n != 3) {
            throw ParseError("face with " + std::to_string(n) +
                                 " vertices; only triangles are supported",
                             ln);
        }
        if (tokens.size() < 4) {
            throw ParseError("face needs three indices", ln);
        }
        for (int c = 0; c < 3; ++c) {
            mesh.faces(i, c) = static_cast<int>(parse_long(tokens[c + 1], ln));
        }
    }
    return mesh;
}

void check_stream(const std::ostream& out)
{
    if (!out.good()) {
        throw IoError("write failure");
    }
}

}  // namespace

RawMesh read_mesh(std::istream& in, MeshFormat format)
{
    return format == MeshFormat::obj ? read_obj(in) : read_off(in);
}

TriMesh load_mesh(std::istream& in, MeshFormat format)
{
    RawMesh raw = read_mesh(in, format);
    return TriMesh(std::move(raw.vertices), std::move(raw.faces));
}

MeshFormat format_from_path(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".obj") {
        return MeshFormat::obj;
    }
    if (ext == ".off") {
        return MeshFormat::off;
    }
    throw ParseError("unsupported mesh extension '" + ext + "'", 0);
}

TriMesh load_mesh(const std::filesystem::path& path)
{
    const MeshFormat format = format_from_path(path);
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return load_mesh(in, format);
}

void write_mesh(const TriMesh& mesh, std::ostream& out, MeshFormat format)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    out << std::setprecision(17);
    if (format == MeshFormat::off) {
        out << "OFF\n" << V.rows() << ' ' << F.rows() << " 0\n";
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            out << V(i, 0) << ' ' << V(i, 1) << ' ' << V(i, 2) << '\n';
        }
        for (Eigen::Index f = 0; f < F.rows(); ++f) {
            out << "3 " << F(f, 0) << ' ' << F(f, 1) << ' ' << F(f, 2) << '\n';
        }
    }
    else {
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            out << "v " << V(i, 0) << ' ' << V(i, 1) << ' ' << V(i, 2) << '\n';
        }
        for (Eigen::Index f = 0; f < F.rows(); ++f) {
            out << "f " << F(f, 0) + 1 << ' ' << F(f, 1) + 1 << ' ' << F(f, 2) + 1 << '\n';
        }
    }
    out.flush();
    check_stream(out);
}

void write_parameterized(const TriMesh& mesh, const Eigen::MatrixX2d& uv, std::ostream& out,
                         UvFormat format)
{
    if (uv.rows() != mesh.vertex_count()) {
        throw IoError("parameterization has " + std::to_string(uv.rows()) + " rows for " +
                      std::to_string(mesh.vertex_count()) + " vertices");
    }
    check_stream(out);
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    out << std::setprecision(17);
    if (format == UvFormat::csv) {
        out << "index,u,v\n";
        for (Eigen::Index i = 0; i < uv.rows(); ++i) {
            out << i << ',' << uv(i, 0) << ',' << uv(i, 1) << '\n';
        }
    }
    else {
        out << "# disk parameterization: one vt per vertex\n";
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            out << "v " << V(i, 0) << ' ' << V(i, 1) << ' ' << V(i, 2) << '\n';
        }
        for (Eigen::Index i = 0; i < uv.rows(); ++i) {
            out << "vt " << uv(i, 0) << ' ' << uv(i, 1) << '\n';
        }
        for (Eigen::Index f = 0; f < F.rows(); ++f) {
            out << 'f';
            for (int c = 0; c < 3; ++c) {
                const int idx = F(f, c) + 1;
                out << ' ' << idx << '/' << idx;
            }
            out << '\n';
        }
    }
    out.flush();
    check_stream(out);
}

void write_parameterized(const TriMesh& mesh, const Eigen::MatrixX2d& uv,
                         const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_parameterized(mesh, uv, out, ext == ".csv" ? UvFormat::csv : UvFormat::obj);
}

Eigen::MatrixX2d read_uv_csv(std::istream& in, int vertex_count)
{
    Eigen::MatrixX2d uv(vertex_count, 2);
    std::vector<bool> seen(vertex_count, false);
    std::string raw;
    std::size_t line_no = 0;
    bool header_done = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        if (raw.empty()) {
            continue;
        }
        if (!header_done) {
            header_done = true;
            if (raw == "index,u,v") {
                continue;
            }
            throw ParseError("expected header 'index,u,v'", line_no);
        }
        std::vector<std::string> cells;
        std::stringstream ss(raw);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 3) {
            throw ParseError("expected three comma-separated fields", line_no);
        }
        const long idx = parse_long(cells[0], line_no);
        if (idx < 0 || idx >= vertex_count) {
            throw ParseError("vertex index " + cells[0] + " out of range", line_no);
        }
        uv(idx, 0) = parse_double(cells[1], line_no);
        uv(idx, 1) = parse_double(cells[2], line_no);
        seen[idx] = true;
    }
    for (int i = 0; i < vertex_count; ++i) {
        if (!seen[i]) {
            throw ParseError("no texture coordinate for vertex " + std::to_string(i), 0);
        }
    }
    return uv;
}

}  // namespace sdmce
