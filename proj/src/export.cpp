#include "conesphere/export.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conesphere/io.hpp"

namespace conesphere {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

std::string fmt(double x)
{
    // Short fixed output keeps the SVG readable and stable.
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.setf(std::ios::fixed);
    os.precision(3);
    os << (std::abs(x) < 5e-4 ? 0.0 : x);
    return os.str();
}

} // namespace

std::string export_svg(const DevelopedComplex& dev, const SvgOptions& options)
{
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    for (const auto& q : dev.quads)
        for (const auto& c : q.corners) {
            lo_x = std::min(lo_x, c.x());
            hi_x = std::max(hi_x, c.x());
            lo_y = std::min(lo_y, c.y());
            hi_y = std::max(hi_y, c.y());
        }
    if (dev.quads.empty()) {
        lo_x = lo_y = 0.0;
        hi_x = hi_y = 1.0;
    }
    double w = std::max(hi_x - lo_x, 1e-9), h = std::max(hi_y - lo_y, 1e-9);
    double mx = 0.05 * w, my = 0.05 * h;
    double scale = options.width / (w + 2 * mx);
    double height = (h + 2 * my) * scale;
    // Flip y so the development reads counterclockwise on screen.
    auto px = [&](const Vec2& p) { return fmt((p.x() - lo_x + mx) * scale) + "," + fmt((hi_y - p.y() + my) * scale); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(options.width) << "\" height=\"" << fmt(height)
       << "\" viewBox=\"0 0 " << fmt(options.width) << " " << fmt(height) << "\">\n";
    os << "<g fill=\"#f4f1e8\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
    for (std::size_t q = 0; q < dev.quads.size(); ++q) {
        const auto& d = dev.quads[q];
        os << "<polygon data-quad=\"" << q << "\" points=\"";
        for (std::size_t m = 0; m < 4; ++m) os << (m ? " " : "") << px(d.corners[m]);
        os << "\"/>\n";
    }
    os << "</g>\n";
    // Edges colored by the loop they cross.
    os << "<g stroke-width=\"1.5\">\n";
    for (const auto& d : dev.quads)
        for (std::size_t m = 0; m < 4; ++m) {
            // Corner 0 is inside loop_i and corner 1 outside it, so even edges
            // cross loop_i.
            std::size_t loop = m % 2 == 0 ? d.loop_i : d.loop_j;
            auto a = px(d.corners[m]), b = px(d.corners[(m + 1) % 4]);
            auto ca = a.find(','), cb = b.find(',');
            os << "<line x1=\"" << a.substr(0, ca) << "\" y1=\"" << a.substr(ca + 1) << "\" x2=\"" << b.substr(0, cb)
               << "\" y2=\"" << b.substr(cb + 1) << "\" stroke=\"" << kPalette[loop % 12] << "\"/>\n";
        }
    os << "</g>\n";
    if (options.labels) {
        os << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#000000\">\n";
        for (const auto& d : dev.quads)
            for (std::size_t m = 0; m < 4; ++m) {
                auto it = dev.cone_labels.find(d.cells[m]);
                if (it == dev.cone_labels.end()) continue;
                auto p = px(d.corners[m]);
                auto c = p.find(',');
                os << "<text x=\"" << p.substr(0, c) << "\" y=\"" << p.substr(c + 1) << "\">" << it->second
                   << "</text>\n";
            }
        os << "</g>\n";
    }
    if (options.legend && !dev.loop_labels.empty()) {
        os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
        for (std::size_t l = 0; l < dev.loop_labels.size(); ++l) {
            double y = 16.0 + 16.0 * static_cast<double>(l);
            os << "<rect x=\"8\" y=\"" << fmt(y - 10) << "\" width=\"10\" height=\"10\" fill=\"" << kPalette[l % 12]
               << "\"/><text x=\"22\" y=\"" << fmt(y) << "\">" << dev.loop_labels[l] << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string export_obj(const DevelopedComplex& dev)
{
    std::vector<Vec2> verts;
    std::ostringstream faces;
    auto find = [&](const Vec2& p) {
        for (std::size_t i = 0; i < verts.size(); ++i)
            if ((verts[i] - p).norm() <= 1e-9) return i + 1;
        verts.push_back(p);
        return verts.size();
    };
    for (const auto& d : dev.quads) {
        faces << "f";
        for (std::size_t m = 0; m < 4; ++m) faces << " " << find(d.corners[m]);
        faces << "\n";
    }
    std::ostringstream os;
    os << "# planar development, one face per parallelogram\n";
    for (const auto& v : verts) os << "v " << format_real(v.x()) << " " << format_real(v.y()) << " 0\n";
    os << faces.str();
    return os.str();
}

ObjMesh parse_obj(const std::string& text)
{
    ObjMesh mesh;
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x() >> v.y() >> v.z();
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<std::size_t> f;
            std::string tok;
            while (ls >> tok) f.push_back(std::stoul(tok.substr(0, tok.find('/'))) - 1);
            mesh.faces.push_back(std::move(f));
        }
    }
    return mesh;
}

double planar_area(const ObjMesh& mesh)
{
    double total = 0.0;
    for (const auto& f : mesh.faces) {
        double a = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Vec3& p = mesh.vertices[f[i]];
            const Vec3& q = mesh.vertices[f[(i + 1) % f.size()]];
            a += p.x() * q.y() - p.y() * q.x();
        }
        total += 0.5 * std::abs(a);
    }
    return total;
}

} // namespace conesphere
