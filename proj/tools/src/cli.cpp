#include "sdmce_tools/cli.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sdmce/errors.hpp"
#include "sdmce/laplacian.hpp"
#include "sdmce/logging.hpp"
#include "sdmce/mesh_io.hpp"
#include "sdmce/metrics.hpp"
#include "sdmce/pipeline.hpp"
#include "sdmce/report_json.hpp"
#include "sdmce/svg.hpp"
#include "sdmce/unfolding.hpp"
#include "sdmce/version.hpp"

namespace sdmce::cli
{

namespace
{

namespace fs = std::filesystem;

struct ParameterizeOptions {
    std::vector<std::string> inputs;
    std::string output;
    std::string report;
    std::string svg;
    std::string trace;
    std::string history;
    std::string dump_dir;
    std::string mu = "auto";
    std::string variant = "pi";
    std::string init = "equal";
    double tau = 1e-4;
    std::string schur = "explicit";
    bool no_repair = false;
    std::uint64_t seed = 0;
    int jobs = 1;
    int max_iterations = 2000;
    double tolerance = 1e-6;
    std::string delta_rule = "interior";
    bool no_timings = false;
};

struct MetricsOptions {
    std::string input;
    std::string uv;
    std::string report;
    std::string svg;
    bool no_timings = false;
};

/// Bad command-line value; maps to the input-error exit code.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_bytes(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string hex64(std::uint64_t x)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out.good()) {
        throw IoError("write failure on " + path.string());
    }
}

double parse_double(const std::string& s, const std::string& what)
{
    double x = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("invalid " + what + ": '" + s + "'");
    }
    return x;
}

BoundaryInit parse_init(const std::string& text, std::uint64_t default_seed)
{
    BoundaryInit init;
    const auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    if (kind == "equal_angles") {
        kind = "equal";
    } else if (kind == "scaled_arc") {
        kind = "arc";
    } else if (kind == "random_order") {
        kind = "random";
    }
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "equal" && arg.empty()) {
        init.kind = BoundaryInit::Kind::equal_angles;
    } else if (kind == "arc" && !arg.empty()) {
        init.kind = BoundaryInit::Kind::scaled_arc;
        init.rho = parse_double(arg, "arc scale");
        if (!(init.rho > 0)) {
            throw UsageError("arc scale must be positive");
        }
    } else if (kind == "random") {
        init.kind = BoundaryInit::Kind::random_order;
        init.seed = default_seed;
        if (!arg.empty()) {
            std::uint64_t seed = 0;
            const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), seed);
            if (ec != std::errc() || ptr != arg.data() + arg.size()) {
                throw UsageError("invalid random seed: '" + arg + "'");
            }
            init.seed = seed;
        }
    } else {
        throw UsageError("--init must be equal, arc:RHO or random[:SEED], got '" + text + "'");
    }
    return init;
}

std::string init_label(const BoundaryInit& init)
{
    std::ostringstream s;
    s << std::setprecision(17);
    switch (init.kind) {
    case BoundaryInit::Kind::equal_angles:
        s << "equal";
        break;
    case BoundaryInit::Kind::scaled_arc:
        s << "arc:" << init.rho;
        break;
    case BoundaryInit::Kind::random_order:
        s << "random:" << init.seed;
        break;
    }
    return s.str();
}

RunConfig make_config(const ParameterizeOptions& o)
{
    RunConfig c;
    if (o.mu != "auto") {
        const double mu = parse_double(o.mu, "--mu");
        if (!(mu >= 0)) {
            throw UsageError("--mu must be 'auto' or a nonnegative number");
        }
        c.mu = mu;
    }
    c.variant = o.variant == "area" ? ObjectiveVariant::subtract_polygon_area
                                    : ObjectiveVariant::subtract_true_area;
    c.init = parse_init(o.init, o.seed);
    if (!(o.tau > 0)) {
        throw UsageError("--tau must be positive");
    }
    c.tau = o.tau;
    c.schur = o.schur == "implicit" ? SchurMode::implicit : SchurMode::explicit_dense;
    c.repair = !o.no_repair;
    c.ncg.max_iterations = o.max_iterations;
    c.ncg.gradient_tolerance = o.tolerance;
    try {
        c.ncg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    c.repair_config.delta_rule = o.delta_rule == "faces"
                                     ? RepairConfig::DeltaRule::boundary_over_faces
                                     : RepairConfig::DeltaRule::boundary_over_interior;
    return c;
}

ordered_json manifest(const fs::path& input, const std::string& bytes, const ordered_json& config)
{
    ordered_json m;
    m["version"] = version;
    m["input"] = input.generic_string();
    m["input_fnv1a64"] = hex64(fnv1a64(bytes));
    m["config"] = config;
    return m;
}

ordered_json config_json(const ParameterizeOptions& o, const RunConfig& c)
{
    ordered_json j;
    j["mu"] = c.mu ? ordered_json(*c.mu) : ordered_json("auto");
    j["variant"] = o.variant;
    j["init"] = init_label(c.init);
    j["tau"] = c.tau;
    j["schur"] = o.schur;
    j["repair"] = c.repair;
    j["seed"] = o.seed;
    j["max_iterations"] = c.ncg.max_iterations;
    j["tolerance"] = c.ncg.gradient_tolerance;
    j["delta_rule"] = o.delta_rule;
    return j;
}

std::string expand(const std::string& pattern, const fs::path& input)
{
    std::string s = pattern;
    const std::string stem = input.stem().string();
    for (auto pos = s.find("{stem}"); pos != std::string::npos; pos = s.find("{stem}", pos)) {
        s.replace(pos, 6, stem);
        pos += stem.size();
    }
    return s;
}

void dump_matrices(const TriMesh& mesh, const RunConfig& c, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string());
    }
    const SparseMatrix L = build_laplacian(mesh);
    const BlockSystem sys(L, mesh.boundary_loop(), c.schur);
    write_matrix_market(L, dir / "laplacian.mtx");
    write_matrix_market(sys.schur_matrix(), dir / "schur.mtx");
}

int run_parameterize_one(const fs::path& input, const ParameterizeOptions& o, std::ostream& out,
                         std::ostream& err)
{
    try {
        const RunConfig config = make_config(o);
        const std::string bytes = read_bytes(input);
        std::istringstream in(bytes);
        const TriMesh mesh = load_mesh(in, format_from_path(input));
        if (!o.dump_dir.empty()) {
            dump_matrices(mesh, config, expand(o.dump_dir, input));
        }

        const RunResult r = parameterize(mesh, config);
        const bool timings = !o.no_timings;

        if (!o.output.empty()) {
            write_parameterized(mesh, r.points, fs::path(expand(o.output, input)));
        }
        if (!o.report.empty()) {
            ordered_json doc = to_json(r.report, timings);
            doc["manifest"] = manifest(input, bytes, config_json(o, config));
            doc["solver"] = {{"termination", to_string(r.trace.termination)},
                             {"iterations", r.trace.iterations()},
                             {"kkt_stationarity", r.kkt.stationarity},
                             {"kkt_interior", r.kkt.interior}};
            doc["tuning"] = to_json(r.history, timings);
            ordered_json rep;
            rep["stalled"] = r.repair_stalled;
            rep["message"] = r.stall_message;
            if (r.repair) {
                rep["boundary_rounds"] = r.repair->boundary_rounds;
                rep["boundary_triangle_passes"] = r.repair->boundary_triangle_passes;
                rep["interior_passes"] = r.repair->interior_passes;
                rep["singular_fallbacks"] = r.repair->singular_fallbacks;
                ordered_json hist = ordered_json::array();
                for (const auto& h : r.repair->history) {
                    hist.push_back(to_json(h));
                }
                rep["history"] = std::move(hist);
            }
            doc["repair"] = std::move(rep);
            write_text(expand(o.report, input), doc.dump(2) + "\n");
        }
        if (!o.svg.empty()) {
            write_text(expand(o.svg, input), render_svg(mesh, r.points));
        }
        if (!o.trace.empty()) {
            std::ostringstream s;
            r.trace.write_csv(s);
            write_text(expand(o.trace, input), s.str());
        }
        if (!o.history.empty()) {
            std::ostringstream s;
            write_history_csv(r.history, s);
            write_text(expand(o.history, input), s.str());
        }

        const auto& q = r.report;
        out << std::setprecision(6) << input.generic_string() << ": V=" << mesh.vertex_count()
            << " F=" << mesh.face_count() << " B=" << mesh.boundary_loop().size()
            << " mu=" << r.mu << " E_Cd=" << q.E_Cd << " eps_A=" << q.eps_A_signed
            << " eps_theta=" << q.angle_errors.mean << " folded_vertices="
            << q.folding.folded_boundary_vertices.size()
            << " folded_triangles=" << q.folding.folded_triangle_count() << '\n';
        if (r.repair_stalled || !q.folding.clean()) {
            err << input.generic_string() << ": foldings remain"
                << (r.stall_message.empty() ? "" : " (" + r.stall_message + ")") << '\n';
            return residual_foldings;
        }
        return ok;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const ParseError& e) {
        err << input.generic_string() << ": parse error: " << e.what() << '\n';
        return input_error;
    } catch (const TopologyError& e) {
        err << input.generic_string() << ": " << e.what() << '\n';
        return input_error;
    } catch (const DegenerateFaceError& e) {
        err << input.generic_string() << ": " << e.what() << '\n';
        return input_error;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const Error& e) {
        err << input.generic_string() << ": solver failure: " << e.what() << '\n';
        return solver_error;
    } catch (const std::invalid_argument& e) {
        err << input.generic_string() << ": solver failure: " << e.what() << '\n';
        return solver_error;
    }
}

int run_parameterize(const ParameterizeOptions& o, std::ostream& out, std::ostream& err)
{
    if (o.inputs.size() > 1) {
        for (const std::string* p : {&o.output, &o.report, &o.svg, &o.trace, &o.history, &o.dump_dir}) {
            if (!p->empty() && p->find("{stem}") == std::string::npos) {
                err << "error: output paths need a {stem} placeholder with several inputs\n";
                return input_error;
            }
        }
    }
    const auto n = o.inputs.size();
    std::vector<std::ostringstream> outs(n);
    std::vector<std::ostringstream> errs(n);
    std::vector<int> codes(n, ok);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            codes[i] = run_parameterize_one(o.inputs[i], o, outs[i], errs[i]);
        }
    };
    const int jobs = std::max(1, std::min(o.jobs, static_cast<int>(n)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    int code = ok;
    for (std::size_t i = 0; i < n; ++i) {
        out << outs[i].str();
        err << errs[i].str();
        code = std::max(code, codes[i]);
    }
    return code;
}

int run_check(const std::string& input, std::ostream& out, std::ostream& err)
{
    try {
        std::ifstream in(input, std::ios::binary);
        if (!in) {
            throw IoError("cannot open " + input);
        }
        const RawMesh raw = read_mesh(in, format_from_path(input));
        const MeshDiagnostics d = diagnose(raw.vertices, raw.faces);
        ordered_json j;
        j["vertex_count"] = d.vertex_count;
        j["edge_count"] = d.edge_count;
        j["face_count"] = d.face_count;
        j["boundary_loop_count"] = d.boundary_loop_count;
        j["euler_characteristic"] = d.euler_characteristic;
        j["is_disk"] = d.is_disk;
        ordered_json defects = ordered_json::array();
        for (const auto& x : d.defects) {
            defects.push_back({{"kind", to_string(x.kind)}, {"element", x.element}, {"detail", x.detail}});
        }
        j["defects"] = std::move(defects);
        ordered_json pairs = ordered_json::array();
        for (const auto& [a, b] : d.coincident_vertices) {
            pairs.push_back({a, b});
        }
        j["coincident_vertices"] = std::move(pairs);
        out << j.dump(2) << '\n';
        if (!d.is_disk) {
            err << input << ": not a topological disk";
            if (!d.defects.empty()) {
                err << " (" << d.defects.front().detail << ")";
            }
            err << '\n';
            return input_error;
        }
        return ok;
    } catch (const ParseError& e) {
        err << input << ": parse error: " << e.what() << '\n';
        return input_error;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    }
}

int run_metrics(const MetricsOptions& o, std::ostream& out, std::ostream& err)
{
    try {
        const std::string bytes = read_bytes(o.input);
        std::istringstream in(bytes);
        RawMesh raw = read_mesh(in, format_from_path(o.input));
        const TriMesh mesh(raw.vertices, raw.faces);

        std::optional<Eigen::MatrixX2d> uv;
        if (o.uv.empty()) {
            uv = raw.uv;
        } else if (fs::path(o.uv).extension() == ".csv") {
            std::ifstream u(o.uv);
            if (!u) {
                throw IoError("cannot open " + o.uv);
            }
            uv = read_uv_csv(u, mesh.vertex_count());
        } else {
            std::ifstream u(o.uv, std::ios::binary);
            if (!u) {
                throw IoError("cannot open " + o.uv);
            }
            uv = read_mesh(u, format_from_path(o.uv)).uv;
        }
        if (!uv || uv->rows() != mesh.vertex_count()) {
            err << o.input << ": no per-vertex texture coordinates\n";
            return input_error;
        }

        const SparseMatrix L = build_laplacian(mesh);
        const QualityReport q = build_report(mesh, L, *uv);
        ordered_json doc = to_json(q, !o.no_timings);
        ordered_json cfg;
        cfg["uv"] = o.uv.empty() ? o.input : o.uv;
        doc["manifest"] = manifest(o.input, bytes, cfg);
        const std::string text = doc.dump(2) + "\n";
        if (o.report.empty()) {
            out << text;
        } else {
            write_text(o.report, text);
        }
        if (!o.svg.empty()) {
            write_text(o.svg, render_svg(mesh, *uv));
        }
        return ok;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return input_error;
    } catch (const TopologyError& e) {
        err << o.input << ": " << e.what() << '\n';
        return input_error;
    } catch (const DegenerateFaceError& e) {
        err << o.input << ": " << e.what() << '\n';
        return input_error;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Disk conformal parameterization of open triangle meshes"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    ParameterizeOptions po;
    auto* param = app.add_subcommand("parameterize", "flatten a disk-topology mesh onto the unit disk");
    param->add_option("-i,--input", po.inputs, "input mesh (.obj or .off); repeatable")->required();
    param->add_option("-o,--output", po.output, "parameterized mesh: .obj with vt, or .csv");
    param->add_option("--report", po.report, "JSON quality report");
    param->add_option("--svg", po.svg, "SVG layout");
    param->add_option("--trace", po.trace, "CSV trace of the final solve");
    param->add_option("--history", po.history, "CSV history of the penalty tuner");
    param->add_option("--dump-matrices", po.dump_dir, "directory for Laplacian and Schur complement dumps");
    param->add_option("--mu", po.mu, "'auto' or a fixed penalty")->capture_default_str();
    param->add_option("--variant", po.variant, "objective: pi or area")
        ->check(CLI::IsMember({"pi", "area"}))
        ->capture_default_str();
    param->add_option("--init", po.init, "equal, arc:RHO or random[:SEED]")->capture_default_str();
    param->add_option("--tau", po.tau, "gate accuracy")->capture_default_str();
    param->add_option("--schur", po.schur, "explicit or implicit")
        ->check(CLI::IsMember({"explicit", "implicit"}))
        ->capture_default_str();
    param->add_flag("--no-repair", po.no_repair, "skip folding repair");
    param->add_option("--seed", po.seed, "seed for random starts")->capture_default_str();
    param->add_option("-j,--jobs", po.jobs, "meshes processed in parallel")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    param->add_option("--max-iterations", po.max_iterations, "solver iteration cap")->capture_default_str();
    param->add_option("--tolerance", po.tolerance, "projected gradient tolerance")->capture_default_str();
    param->add_option("--delta-rule", po.delta_rule, "boundary penalty step: interior (|B|/|I|) or faces (|B|/|F|)")
        ->check(CLI::IsMember({"interior", "faces"}))
        ->capture_default_str();
    param->add_flag("--no-timings", po.no_timings, "leave timings out of reports");

    std::string check_input;
    auto* check = app.add_subcommand("check", "print mesh diagnostics as JSON");
    check->add_option("-i,--input,input", check_input, "input mesh")->required();

    MetricsOptions mo;
    auto* metrics = app.add_subcommand("metrics", "quality report of an existing parameterization");
    metrics->add_option("-i,--input", mo.input, "mesh, optionally with per-vertex vt")->required();
    metrics->add_option("--uv", mo.uv, "texture coordinates: .obj with vt or index,u,v .csv");
    metrics->add_option("--report", mo.report, "JSON output (default: stdout)");
    metrics->add_option("--svg", mo.svg, "SVG layout");
    metrics->add_flag("--no-timings", mo.no_timings, "leave timings out of the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    if (*param) {
        return run_parameterize(po, out, err);
    }
    if (*check) {
        return run_check(check_input, out, err);
    }
    return run_metrics(mo, out, err);
}

}  // namespace sdmce::cli
