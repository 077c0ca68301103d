#include "conesphere/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "conesphere/arrangement.hpp"
#include "conesphere/decomposition.hpp"
#include "conesphere/developing.hpp"
#include "conesphere/export.hpp"
#include "conesphere/io.hpp"
#include "conesphere/moduli.hpp"

namespace conesphere {

using nlohmann::json;

namespace {

struct Options {
    bool json = false;
    double tolerance = 1.0;
    std::string arr, lengths, spec, frame, a, b, loop, x, y, svg, obj, out;
    std::string validate_path;
    std::uint64_t seed = 1;
    std::size_t base = 0;
};

LoopArrangement load_arrangement(const std::string& path) { return parse_arrangement(read_file(path)); }

struct LoadedSurface {
    LoopArrangement arr;
    EdgeLengths l;
};

LoadedSurface load_surface(const Options& o, const std::string& lengths_path)
{
    Surface s = parse_surface(read_file(lengths_path));
    LoopArrangement arr;
    if (!o.arr.empty()) {
        arr = load_arrangement(o.arr);
    } else if (s.arrangement) {
        arr = *s.arrangement;
    } else if (s.arrangement_file) {
        std::filesystem::path p(*s.arrangement_file);
        if (p.is_relative()) p = std::filesystem::path(lengths_path).parent_path() / p;
        arr = load_arrangement(p.string());
    } else {
        throw Error(ErrorCode::ValidationError, "no arrangement given; use --arr or embed one in the lengths file");
    }
    return {arr, lengths_from_labels(arr, s.lengths)};
}

json matrix_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

std::string matrix_text(const Eigen::MatrixXd& m, const std::vector<std::string>& labels)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::fixed << std::setprecision(6);
    os << "        ";
    for (const auto& l : labels) os << std::setw(11) << l;
    os << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        os << std::setw(8) << r;
        for (Eigen::Index c = 0; c < m.cols(); ++c) os << std::setw(11) << m(r, c);
        os << "\n";
    }
    return os.str();
}

json signature_json(const Signature& s) { return json::array({s.positive, s.negative, s.zero}); }

// Frame files hold a spec list, {"a": spec, "b": spec}, or {"chain": ["2+", ...]}
// which is traced on each arrangement.
FrameSpec load_frame(const std::string& path, const LoopArrangement& arr, const std::string& side)
{
    Document doc(read_file(path));
    const json& root = doc.root();
    if (root.is_array()) return frame_from_json(doc, root, "");
    if (root.is_object() && root.contains("chain")) {
        std::vector<VertexLabel> chain;
        const json& c = root["chain"];
        if (!c.is_array()) doc.fail("/chain", "expected an array of vertex labels");
        for (std::size_t i = 0; i < c.size(); ++i) {
            auto label = c[i].is_string() ? parse_vertex_label(c[i].get<std::string>()) : std::nullopt;
            if (!label || label->pair >= arr.n_pairs()) doc.fail("/chain/" + std::to_string(i), "bad vertex label");
            chain.push_back(*label);
        }
        auto cx = build_complex(arr, EdgeLengths::Ones(static_cast<Eigen::Index>(arr.n_loops())));
        return chain_frame(cx, chain);
    }
    if (root.is_object() && root.contains(side)) return frame_from_json(doc, root[side], "/" + side);
    doc.fail("", "expected a frame spec, a chain, or an object with key \"" + side + "\"");
}

void print(std::ostream& out, const Options& o, const json& j, const std::string& text)
{
    if (o.json)
        out << dump_canonical(j);
    else
        out << text;
}

int cmd_validate(const Options& o, std::ostream& out)
{
    Document doc(read_file(o.validate_path));
    LoopArrangement arr = arrangement_from_json(doc, doc.root(), "");
    auto report = validate(arr);
    json issues = json::array();
    std::ostringstream text;
    for (const auto& i : report.issues) {
        issues.push_back({{"kind", to_string(i.kind)}, {"indices", i.indices}, {"detail", i.detail}});
        text << to_string(i.kind) << ": " << i.detail << "\n";
    }
    if (report.ok()) text << "valid: " << arr.n_pairs() << " vertex pairs, " << arr.n_loops() << " loops\n";
    print(out, o, {{"valid", report.ok()}, {"issues", issues}}, text.str());
    return report.ok() ? 0 : 1;
}

int cmd_search(const Options& o, std::ostream& out)
{
    Document doc(read_file(o.spec));
    const json& root = doc.root();
    if (!root.is_object() || !root.contains("vertices") || !root.contains("bipartitions"))
        doc.fail("", "a search spec needs \"vertices\" and \"bipartitions\"");
    LabeledVertexSet vs;
    for (std::size_t i = 0; i < root["vertices"].size(); ++i) {
        const json& v = root["vertices"][i];
        if (!v.is_array() || v.size() != 3) doc.fail("/vertices/" + std::to_string(i), "expected three coordinates");
        vs.positions.push_back(Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>()).normalized());
    }
    SearchOptions so;
    so.seed = o.seed;
    if (root.contains("labels")) so.labels = root["labels"].get<std::vector<std::string>>();
    if (root.contains("deficits")) so.deficits = root["deficits"].get<std::vector<double>>();
    if (root.contains("attempts")) so.attempts = root["attempts"].get<std::size_t>();
    auto spec = parse_bipartitions(doc, root["bipartitions"], "/bipartitions");
    LoopArrangement arr = search_arrangement(spec, vs, so);
    std::string text = serialize_arrangement(arr);
    if (!o.out.empty()) {
        write_file(o.out, text);
        out << "wrote " << o.out << "\n";
    } else {
        out << text;
    }
    return 0;
}

int cmd_build(const Options& o, std::ostream& out)
{
    auto s = load_surface(o, o.lengths);
    auto cx = build_complex(s.arr, s.l);
    std::size_t degenerate = 0;
    for (std::size_t q = 0; q < cx.quads.size(); ++q) degenerate += cx.degenerate(q) ? 1 : 0;
    json j = {{"quads", cx.quads.size()},
              {"gluings", cx.gluings.size()},
              {"cone_points", cx.cone_points.size()},
              {"euler_characteristic", cx.euler_characteristic()},
              {"degenerate_quads", degenerate},
              {"area", total_area(cx)},
              {"warnings", cx.warnings}};
    std::ostringstream text;
    text << "quads " << cx.quads.size() << ", dual edges " << cx.gluings.size() << ", cone points "
         << cx.cone_points.size() << ", euler characteristic " << cx.euler_characteristic() << "\n";
    text << "degenerate quads " << degenerate << ", area " << format_real(total_area(cx)) << "\n";
    for (const auto& w : cx.warnings) text << "warning: " << w << "\n";
    print(out, o, j, text.str());
    return 0;
}

int cmd_audit(const Options& o, std::ostream& out)
{
    auto s = load_surface(o, o.lengths);
    auto cx = build_complex(s.arr, s.l);
    auto audit = verify_cone_deficits(cx, s.arr.deficits, 1e-9 * o.tolerance);
    json rows = json::array();
    std::ostringstream text;
    for (const auto& r : audit.rows) {
        std::string labels;
        for (const auto& l : r.labels) labels += (labels.empty() ? "" : " ") + to_string(l);
        rows.push_back({{"cone_point", r.cone_point},
                        {"labels", labels},
                        {"angle", r.angle},
                        {"measured", r.measured},
                        {"expected", r.expected},
                        {"error", r.error},
                        {"pass", r.pass}});
        text << "cone point " << r.cone_point << (labels.empty() ? "" : " (" + labels + ")") << ": deficit "
             << format_real(r.measured) << " expected " << format_real(r.expected) << (r.pass ? " ok" : " FAIL")
             << "\n";
    }
    text << "total deficit " << format_real(audit.total) << (audit.total_pass ? " ok" : " FAIL") << "\n";
    text << (audit.pass ? "all pass\n" : "audit failed\n");
    print(out, o,
          {{"rows", rows}, {"total", audit.total}, {"tolerance", audit.tolerance}, {"total_pass", audit.total_pass},
           {"pass", audit.pass}},
          text.str());
    return audit.pass ? 0 : 1;
}

int cmd_area_form(const Options& o, std::ostream& out)
{
    auto arr = load_arrangement(o.arr);
    auto q = area_form(arr);
    auto sig = signature(q);
    std::ostringstream text;
    text << matrix_text(q.matrix, q.labels);
    text << "signature (" << sig.positive << "," << sig.negative << "," << sig.zero << ")\n";
    print(out, o, {{"labels", q.labels}, {"matrix", matrix_json(q.matrix)}, {"signature", signature_json(sig)}},
          text.str());
    return 0;
}

int cmd_unfold(const Options& o, std::ostream& out)
{
    auto s = load_surface(o, o.lengths);
    auto cx = build_complex(s.arr, s.l);
    auto dev = unfold(cx, o.base);
    if (!o.svg.empty()) write_file(o.svg, export_svg(dev));
    if (!o.obj.empty()) write_file(o.obj, export_obj(dev));
    std::ostringstream text;
    text << "unfolded " << dev.quads.size() << " quads from base " << dev.base << "\n";
    if (!o.svg.empty()) text << "wrote " << o.svg << "\n";
    if (!o.obj.empty()) text << "wrote " << o.obj << "\n";
    print(out, o, {{"quads", dev.quads.size()}, {"base", dev.base}}, text.str());
    return 0;
}

int cmd_frame_matrix(const Options& o, std::ostream& out)
{
    auto arr = load_arrangement(o.arr);
    auto spec = load_frame(o.frame, arr, "a");
    auto m = frame_matrix(arr, spec);
    double det = m.determinant();
    std::ostringstream text;
    text << matrix_text(m.matrix, m.labels) << "det " << format_real(det) << "\n";
    print(out, o, {{"labels", m.labels}, {"matrix", matrix_json(m.matrix)}, {"det", det}, {"frame", frame_to_json(spec)}},
          text.str());
    return 0;
}

int cmd_compare(const Options& o, std::ostream& out)
{
    auto a = load_arrangement(o.a);
    auto b = load_arrangement(o.b);
    auto fa = load_frame(o.frame, a, "a");
    auto fb = load_frame(o.frame, b, "b");
    auto r = compare_face_sides(a, b, fa, fb, o.loop);
    std::ostringstream text;
    text << to_string(r.side) << "\n";
    print(out, o,
          {{"side", to_string(r.side)}, {"det_a", r.det_a}, {"det_b", r.det_b}, {"mismatch", r.mismatch},
           {"loop", o.loop}},
          text.str());
    return 0;
}

int cmd_distance(const Options& o, std::ostream& out)
{
    auto x = load_surface(o, o.x);
    auto y = load_surface(o, o.y);
    auto q = area_form(x.arr);
    auto qy = area_form(y.arr);
    auto px = normalize(x.l, q);
    auto py = normalize(y.l, qy);
    double d = distance(px, py);
    print(out, o, {{"distance", d}}, format_real(d) + "\n");
    return 0;
}

int cmd_simplex(const Options& o, std::ostream& out)
{
    auto arr = load_arrangement(o.arr);
    auto r = ideal_simplex_check(area_form(arr));
    json facets = json::array();
    for (const auto& s : r.facet_signatures) facets.push_back(signature_json(s));
    std::ostringstream text;
    text << "ideal vertices " << r.vertices << ", facets " << r.facets << "\n";
    text << "facets per vertex";
    for (auto n : r.facets_per_vertex) text << " " << n;
    text << "\nfacet forms hyperbolic: " << (r.facets_hyperbolic ? "yes" : "no") << "\n";
    text << "regularity residual " << format_real(r.regularity_residual) << "\n";
    print(out, o,
          {{"vertices", r.vertices},
           {"facets", r.facets},
           {"facets_per_vertex", r.facets_per_vertex},
           {"vertices_per_facet", r.vertices_per_facet},
           {"facet_signatures", facets},
           {"facets_hyperbolic", r.facets_hyperbolic},
           {"null_residuals", r.null_residuals},
           {"regularity_residual", std::isfinite(r.regularity_residual) ? json(r.regularity_residual) : json(nullptr)}},
          text.str());
    return 0;
}

int cmd_orbit(const Options& o, std::ostream& out)
{
    Surface s = parse_surface(read_file(o.lengths));
    EdgeLengths l;
    std::vector<std::string> labels;
    if (!o.arr.empty()) {
        auto arr = load_arrangement(o.arr);
        l = lengths_from_labels(arr, s.lengths);
        labels = arr.labels();
    } else {
        l.resize(static_cast<Eigen::Index>(s.lengths.size()));
        Eigen::Index i = 0;
        for (const auto& [k, v] : s.lengths) {
            labels.push_back(k);
            l[i++] = v;
        }
    }
    auto all = orbit(l);
    auto rep = canonical_rep(l);
    std::ostringstream text;
    text << "orbit size " << all.size() << "\ncanonical";
    for (Eigen::Index i = 0; i < rep.size(); ++i) text << " " << format_real(rep[i]);
    text << "\n";
    print(out, o, {{"labels", labels}, {"orbit_size", all.size()}, {"canonical", std::vector<double>(rep.begin(), rep.end())}},
          text.str());
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    if (const char* env = std::getenv("CONESPHERE_SEED")) {
        try {
            o.seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "CONESPHERE_SEED must be an unsigned integer\n";
            return 2;
        }
    }

    CLI::App app{"conesphere: parallelogram decompositions of centrally symmetric cone spheres"};
    app.require_subcommand(1);
    app.add_flag("--json", o.json, "machine readable output");
    app.add_option("--tolerance", o.tolerance, "scale factor for audit tolerances")->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "check an arrangement file");
    validate_cmd->add_option("arrangement", o.validate_path)->required();
    auto* search = app.add_subcommand("search", "realize bipartitions by great circles");
    search->add_option("--spec", o.spec)->required();
    search->add_option("--seed", o.seed);
    search->add_option("--out", o.out);
    auto* build = app.add_subcommand("build", "glue the parallelogram complex");
    build->add_option("--arr", o.arr);
    build->add_option("--lengths", o.lengths)->required();
    auto* audit = app.add_subcommand("audit", "check every cone deficit");
    audit->add_option("--arr", o.arr);
    audit->add_option("--lengths", o.lengths)->required();
    auto* area = app.add_subcommand("area-form", "area quadratic form and its signature");
    area->add_option("--arr", o.arr)->required();
    auto* unfold_cmd = app.add_subcommand("unfold", "develop the surface into the plane");
    unfold_cmd->add_option("--arr", o.arr);
    unfold_cmd->add_option("--lengths", o.lengths)->required();
    unfold_cmd->add_option("--base", o.base);
    unfold_cmd->add_option("--svg", o.svg);
    unfold_cmd->add_option("--obj", o.obj);
    auto* frame = app.add_subcommand("frame-matrix", "matrix from edge lengths to frame vectors");
    frame->add_option("--arr", o.arr)->required();
    frame->add_option("--frame", o.frame)->required();
    auto* compare = app.add_subcommand("compare-sides", "side of a shared face for adjacent arrangements");
    compare->add_option("--a", o.a)->required();
    compare->add_option("--b", o.b)->required();
    compare->add_option("--loop", o.loop)->required();
    compare->add_option("--frame", o.frame)->required();
    auto* dist = app.add_subcommand("distance", "hyperbolic distance between two surfaces");
    dist->add_option("--arr", o.arr);
    dist->add_option("--x", o.x)->required();
    dist->add_option("--y", o.y)->required();
    auto* simplex = app.add_subcommand("simplex-check", "ideal simplex report for a chart");
    simplex->add_option("--arr", o.arr)->required();
    auto* orbit_cmd = app.add_subcommand("orbit", "dihedral orbit of a six-loop length vector");
    orbit_cmd->add_option("--arr", o.arr);
    orbit_cmd->add_option("--lengths", o.lengths)->required();
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(o, out);
        if (search->parsed()) return cmd_search(o, out);
        if (build->parsed()) return cmd_build(o, out);
        if (audit->parsed()) return cmd_audit(o, out);
        if (area->parsed()) return cmd_area_form(o, out);
        if (unfold_cmd->parsed()) return cmd_unfold(o, out);
        if (frame->parsed()) return cmd_frame_matrix(o, out);
        if (compare->parsed()) return cmd_compare(o, out);
        if (dist->parsed()) return cmd_distance(o, out);
        if (simplex->parsed()) return cmd_simplex(o, out);
        if (orbit_cmd->parsed()) return cmd_orbit(o, out);
    } catch (const ParseFailure& e) {
        err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

} // namespace conesphere
