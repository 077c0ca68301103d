#include "conesphere/developing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>
#include <tuple>

namespace conesphere {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2d rotation(double angle)
{
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

double wrap(double angle)
{
    double a = std::remainder(angle, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

std::optional<std::size_t> shared_edge(const ParallelogramComplex& cx, std::size_t from, std::size_t to)
{
    const Quad& q = cx.quads[from];
    for (std::size_t m = 0; m < 4; ++m) {
        auto key = std::minmax(q.cells[m], q.cells[(m + 1) % 4]);
        const Gluing& g = cx.gluings[cx.gluing_by_cells.at({key.first, key.second})];
        if ((g.sides[0].quad == from && g.sides[1].quad == to) || (g.sides[1].quad == from && g.sides[0].quad == to))
            return m;
    }
    return std::nullopt;
}

Placement glue_across(const ParallelogramComplex& cx, std::size_t from, const Placement& at, std::size_t m,
                      std::size_t to)
{
    const Quad& qa = cx.quads[from];
    const Quad& qb = cx.quads[to];
    std::size_t c0 = qa.cells[m], c1 = qa.cells[(m + 1) % 4];
    std::size_t m2 = 4;
    for (std::size_t t = 0; t < 4; ++t) {
        std::size_t b0 = qb.cells[t], b1 = qb.cells[(t + 1) % 4];
        if ((b0 == c0 && b1 == c1) || (b0 == c1 && b1 == c0)) m2 = t;
    }
    if (m2 == 4) throw Error(ErrorCode::BrokenPath, "quads do not share the edge");
    LocalQuad la = local_quad(cx, from);
    LocalQuad lb = local_quad(cx, to);
    bool same = qb.cells[m2] == c0;
    double dir_a = at.angle + la.dirs[m];
    double dir_b = lb.dirs[m2] + (same ? 0.0 : kPi);
    Placement out;
    out.angle = dir_a - dir_b;
    Vec2 pa = at.apply(la.corners[m]);
    Vec2 qa_local = same ? lb.corners[m2] : lb.corners[(m2 + 1) % 4];
    out.offset = pa - rotation(out.angle) * qa_local;
    return out;
}

Vec2 corner_position(const ParallelogramComplex& cx, std::size_t quad, const Placement& at, std::size_t cell)
{
    return at.apply(local_quad(cx, quad).corners[cx.corner_of(quad, cell)]);
}

std::vector<Vec2> develop(const ParallelogramComplex& cx, const FrameSpec& spec,
                          const std::function<Placement(std::size_t)>& start)
{
    std::vector<Vec2> z;
    std::optional<std::size_t> last;
    Placement at;
    for (std::size_t e = 0; e < spec.size(); ++e) {
        const FrameEntry& entry = spec[e];
        if (entry.from >= cx.cone_points.size() || entry.to >= cx.cone_points.size())
            throw Error(ErrorCode::BrokenPath, "entry " + std::to_string(e) + " names an unknown cone point");
        if (entry.path.empty()) {
            if (entry.from != entry.to)
                throw Error(ErrorCode::BrokenPath, "entry " + std::to_string(e) + " has an empty path");
            z.push_back(Vec2::Zero());
            continue;
        }
        Vec2 source = Vec2::Zero();
        for (std::size_t t = 0; t < entry.path.size(); ++t) {
            std::size_t q = entry.path[t];
            if (q >= cx.quads.size()) throw Error(ErrorCode::BrokenPath, "unknown quad " + std::to_string(q));
            if (!last) {
                at = start(q);
            } else if (q != *last) {
                auto m = shared_edge(cx, *last, q);
                if (!m)
                    throw Error(ErrorCode::BrokenPath, "entry " + std::to_string(e) + ": quads " + std::to_string(*last)
                                                           + " and " + std::to_string(q) + " are not adjacent");
                at = glue_across(cx, *last, at, *m, q);
            }
            last = q;
            if (t == 0) {
                try {
                    source = corner_position(cx, q, at, entry.from);
                } catch (const Error&) {
                    throw Error(ErrorCode::BrokenPath, "entry " + std::to_string(e) + " does not start at its source");
                }
            }
        }
        try {
            z.push_back(corner_position(cx, *last, at, entry.to) - source);
        } catch (const Error&) {
            throw Error(ErrorCode::BrokenPath, "entry " + std::to_string(e) + " does not end at its target");
        }
    }
    return z;
}

} // namespace

Vec2 Placement::apply(const Vec2& x) const { return rotation(angle) * x + offset; }

Placement glue(const ParallelogramComplex& cx, std::size_t from, const Placement& at, std::size_t to)
{
    auto m = shared_edge(cx, from, to);
    if (!m) throw Error(ErrorCode::BrokenPath, "quads are not adjacent");
    return glue_across(cx, from, at, *m, to);
}

DevelopedComplex unfold(const ParallelogramComplex& cx, std::size_t base, TreePolicy policy)
{
    if (base >= cx.quads.size()) throw Error(ErrorCode::DegenerateBase, "no such base quad");
    if (cx.degenerate(base)) throw Error(ErrorCode::DegenerateBase, "base quad has a zero side");

    DevelopedComplex dev;
    dev.base = base;
    dev.policy = policy;
    dev.loop_labels = cx.arrangement.labels();
    for (const auto& cp : cx.cone_points)
        if (!cp.labels.empty()) dev.cone_labels[cp.cell] = to_string(cp.labels.front());
    dev.quads.resize(cx.quads.size());
    std::vector<bool> seen(cx.quads.size(), false);

    std::deque<std::size_t> work{base};
    seen[base] = true;
    while (!work.empty()) {
        std::size_t q;
        if (policy == TreePolicy::BreadthFirst) {
            q = work.front();
            work.pop_front();
        } else {
            q = work.back();
            work.pop_back();
        }
        const Quad& quad = cx.quads[q];
        for (std::size_t m = 0; m < 4; ++m) {
            auto key = std::minmax(quad.cells[m], quad.cells[(m + 1) % 4]);
            const Gluing& g = cx.gluings[cx.gluing_by_cells.at({key.first, key.second})];
            std::size_t other = g.sides[0].quad == q ? g.sides[1].quad : g.sides[0].quad;
            if (seen[other]) continue;
            seen[other] = true;
            dev.quads[other].placement = glue_across(cx, q, dev.quads[q].placement, m, other);
            dev.quads[other].parent = q;
            work.push_back(other);
        }
    }
    for (std::size_t q = 0; q < cx.quads.size(); ++q) {
        auto& d = dev.quads[q];
        d.loop_i = cx.quads[q].loop_i;
        d.loop_j = cx.quads[q].loop_j;
        d.cells = cx.quads[q].cells;
        LocalQuad local = local_quad(cx, q);
        for (std::size_t m = 0; m < 4; ++m) d.corners[m] = d.placement.apply(local.corners[m]);
    }
    return dev;
}

double holonomy(const ParallelogramComplex& cx, std::size_t cone_point)
{
    const auto& corners = cx.cone_points.at(cone_point).corners;
    Placement at;
    std::size_t current = corners.front().quad;
    for (std::size_t t = 1; t <= corners.size(); ++t) {
        std::size_t next = corners[t % corners.size()].quad;
        at = glue(cx, current, at, next);
        current = next;
    }
    // Going counterclockwise the closing map turns by minus the deficit.
    return wrap(-at.angle);
}

std::vector<Vec2> frame_vectors(const ParallelogramComplex& cx, const DevelopedComplex& dev, const FrameSpec& spec)
{
    if (dev.quads.size() != cx.quads.size())
        throw Error(ErrorCode::BrokenPath, "development does not belong to this complex");
    // The first quad is placed canonically, so Z does not depend on the tree.
    return develop(cx, spec, [](std::size_t) { return Placement{}; });
}

Eigen::VectorXd stack(const std::vector<Vec2>& z)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(2 * z.size()));
    for (std::size_t t = 0; t < z.size(); ++t) {
        out[static_cast<Eigen::Index>(2 * t)] = z[t].x();
        out[static_cast<Eigen::Index>(2 * t + 1)] = z[t].y();
    }
    return out;
}

FrameMatrix frame_matrix(const LoopArrangement& arr, const FrameSpec& spec)
{
    const std::size_t n = arr.n_pairs();
    const std::size_t k = arr.n_loops();
    if (n < 2 || spec.size() != n - 1)
        throw Error(ErrorCode::NotAFrame, "a frame needs " + std::to_string(n > 0 ? n - 1 : 0) + " entries, got "
                                              + std::to_string(spec.size()));
    auto cx = build_complex(arr, EdgeLengths::Zero(static_cast<Eigen::Index>(k)));
    FrameMatrix out;
    out.labels = arr.labels();
    out.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * spec.size()), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
        cx.lengths.setZero();
        cx.lengths[static_cast<Eigen::Index>(j)] = 1.0;
        out.matrix.col(static_cast<Eigen::Index>(j)) = stack(develop(cx, spec, [](std::size_t) { return Placement{}; }));
    }
    if (out.matrix.rows() != out.matrix.cols())
        throw Error(ErrorCode::NotAFrame, "frame matrix is not square");
    for (std::size_t j = 0; j < k; ++j)
        if (out.matrix.col(static_cast<Eigen::Index>(j)).norm() <= 1e-12)
            throw Error(ErrorCode::NotAFrame, "no frame edge crosses loop " + arr.loops[j].label);
    return out;
}

FrameMatrix frame_matrix(const LoopArrangement& arr, const std::vector<double>& deficits, const FrameSpec& spec)
{
    LoopArrangement copy = arr;
    copy.deficits = deficits;
    return frame_matrix(copy, spec);
}

double singular_threshold(const FrameMatrix& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.matrix);
    double norm = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    return 1e-12 * std::pow(norm, static_cast<double>(m.matrix.rows()));
}

EdgeLengths coordinates_from_frame(const FrameMatrix& m, const Eigen::VectorXd& z)
{
    if (m.matrix.rows() != m.matrix.cols() || z.size() != m.matrix.rows())
        throw Error(ErrorCode::SingularFrame, "frame matrix and frame vector sizes disagree");
    double det = m.determinant();
    if (!(std::abs(det) > singular_threshold(m)))
        throw Error(ErrorCode::SingularFrame, "frame matrix is singular");
    return m.matrix.partialPivLu().solve(z);
}

std::string to_string(Side side) { return side == Side::DifferentSide ? "different" : "same"; }

SideComparison compare_face_sides(const LoopArrangement& a, const LoopArrangement& b, const FrameSpec& frame_a,
                                  const FrameSpec& frame_b, const std::string& loop_label)
{
    auto loop = a.loop_index(loop_label);
    if (!loop) throw Error(ErrorCode::NotAdjacent, "no loop labeled " + loop_label);
    auto differs = are_adjacent(a, b);
    if (!differs || *differs != *loop)
        throw Error(ErrorCode::NotAdjacent, "arrangements do not differ exactly by loop " + loop_label);

    FrameMatrix ma = frame_matrix(a, frame_a);
    FrameMatrix mb = frame_matrix(b, frame_b);
    SideComparison out;
    out.loop = *loop;
    for (Eigen::Index j = 0; j < ma.matrix.cols(); ++j) {
        if (j == static_cast<Eigen::Index>(*loop)) continue;
        out.mismatch = std::max(out.mismatch, (ma.matrix.col(j) - mb.matrix.col(j)).cwiseAbs().maxCoeff());
    }
    if (out.mismatch > 1e-8)
        throw Error(ErrorCode::FrameMismatch, "frames disagree away from loop " + loop_label);
    out.det_a = ma.determinant();
    out.det_b = mb.determinant();
    if (!(std::abs(out.det_a) > singular_threshold(ma)) || !(std::abs(out.det_b) > singular_threshold(mb)))
        throw Error(ErrorCode::SingularFrame, "a frame matrix is singular");
    out.side = out.det_a * out.det_b < 0 ? Side::DifferentSide : Side::SameSide;
    return out;
}

namespace {

struct Gnomonic {
    Vec3 c, e1, e2;
    Vec2 operator()(const Vec3& x) const
    {
        Vec3 y = x / x.dot(c);
        return {y.dot(e1), y.dot(e2)};
    }
};

Gnomonic gnomonic(const Face& f)
{
    Vec3 seed = std::abs(f.centroid.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = (seed - seed.dot(f.centroid) * f.centroid).normalized();
    return {f.centroid, e1, f.centroid.cross(e1)};
}

bool inside_polygon(const Vec2& p, const std::vector<Vec2>& poly)
{
    double winding = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Vec2 a = poly[i] - p, b = poly[(i + 1) % poly.size()] - p;
        winding += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    return std::abs(winding) > kPi;
}

// Position along the boundary of a cell: side t plus the fraction along it.
double boundary_position(const ParallelogramComplex& cx, std::size_t face, std::size_t loop, const Vec3& x)
{
    const CellComplex& cc = cx.cells;
    const Face& f = cc.faces[face];
    auto t = cc.side_on_loop(face, loop);
    if (!t) throw Error(ErrorCode::BrokenPath, "curve leaves a cell through a loop it does not touch");
    Gnomonic g = gnomonic(f);
    std::size_t r = f.corners.size();
    Vec2 p0 = g(cc.points[f.corners[*t]].point);
    Vec2 p1 = g(cc.points[f.corners[(*t + 1) % r]].point);
    Vec2 q = g(x);
    return static_cast<double>(*t) + (q - p0).dot(p1 - p0) / (p1 - p0).squaredNorm();
}

struct Portion {
    std::size_t cell = 0;
    std::optional<std::pair<std::size_t, Vec3>> entry, exit;
    std::vector<Vec3> inner;
    bool node = false;
    std::vector<std::size_t> chain;
};

} // namespace

FrameSpec frame_from_curve(const ParallelogramComplex& cx, const std::vector<CurvePoint>& curve)
{
    const LoopArrangement& arr = cx.arrangement;
    const CellComplex& cc = cx.cells;
    if (curve.size() < 2 || !curve.front().node || !curve.back().node)
        throw Error(ErrorCode::BrokenPath, "a curve must start and end at nodes");

    std::vector<Portion> portions;
    Portion cur;
    cur.cell = cc.face_containing(arr, curve.front().point);
    cur.node = true;
    for (std::size_t s = 0; s + 1 < curve.size(); ++s) {
        const Vec3& p = curve[s].point;
        const Vec3& q = curve[s + 1].point;
        if ((p + q).norm() < 1e-9) throw Error(ErrorCode::BrokenPath, "antipodal curve points");
        std::vector<std::tuple<double, std::size_t, Vec3>> crossings;
        for (std::size_t l = 0; l < arr.n_loops(); ++l) {
            double a = arr.loops[l].normal.dot(p), b = arr.loops[l].normal.dot(q);
            if (std::abs(b) <= kVertexTolerance) throw Error(ErrorCode::OnLoop, "curve point on loop " + arr.loops[l].label);
            if (a * b < 0) {
                double t = a / (a - b);
                crossings.emplace_back(t, l, ((1 - t) * p + t * q).normalized());
            }
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
        for (const auto& [t, l, x] : crossings) {
            cur.exit = std::make_pair(l, x);
            portions.push_back(cur);
            std::vector<int> signs = cc.faces[cur.cell].signs;
            signs[l] = -signs[l];
            Portion next;
            next.cell = cc.face_by_signs.at(signs);
            next.entry = std::make_pair(l, x);
            cur = next;
        }
        cur.inner.push_back(q);
        if (curve[s + 1].node) cur.node = true;
    }
    portions.push_back(cur);

    for (auto& por : portions) {
        if (!por.entry || !por.exit) continue;
        const Face& f = cc.faces[por.cell];
        const std::size_t r = f.corners.size();
        double u_in = boundary_position(cx, por.cell, por.entry->first, por.entry->second);
        double u_out = boundary_position(cx, por.cell, por.exit->first, por.exit->second);
        auto offset = [&](std::size_t t) {
            double d = std::fmod(static_cast<double>(t) - u_in, static_cast<double>(r));
            return d < 0 ? d + static_cast<double>(r) : d;
        };
        double span = std::fmod(u_out - u_in, static_cast<double>(r));
        if (span < 0) span += static_cast<double>(r);
        std::vector<std::size_t> a_idx, b_idx;
        for (std::size_t t = 0; t < r; ++t) (offset(t) > 0 && offset(t) < span ? a_idx : b_idx).push_back(t);
        std::sort(a_idx.begin(), a_idx.end(), [&](std::size_t x, std::size_t y) { return offset(x) < offset(y); });
        std::sort(b_idx.begin(), b_idx.end(), [&](std::size_t x, std::size_t y) { return offset(x) > offset(y); });
        std::vector<std::size_t> chain_a, chain_b;
        for (std::size_t t : a_idx) chain_a.push_back(f.corners[t]);
        for (std::size_t t : b_idx) chain_b.push_back(f.corners[t]);

        if (por.node) {
            por.chain = chain_a;
        } else if (!f.labels.empty()) {
            // Go around the side of the cell away from its labeled vertex.
            Gnomonic g = gnomonic(f);
            std::vector<Vec2> poly{g(por.entry->second)};
            for (std::size_t p : chain_a) poly.push_back(g(cc.points[p].point));
            poly.push_back(g(por.exit->second));
            for (auto it = por.inner.rbegin(); it != por.inner.rend(); ++it) poly.push_back(g(*it));
            Vec2 v = g(arr.vertices.point(f.labels.front()));
            por.chain = inside_polygon(v, poly) ? chain_b : chain_a;
        } else {
            por.chain = chain_a.size() <= chain_b.size() ? chain_a : chain_b;
        }
    }

    FrameSpec spec;
    std::optional<FrameEntry> open;
    for (const auto& por : portions) {
        if (por.node) {
            if (open) {
                open->to = por.cell;
                spec.push_back(*open);
            }
            if (por.exit) {
                open = FrameEntry{por.cell, por.cell, por.chain};
            } else {
                open.reset();
            }
        } else if (open) {
            open->path.insert(open->path.end(), por.chain.begin(), por.chain.end());
        }
    }
    for (auto& entry : spec) {
        std::vector<std::size_t> path;
        for (std::size_t q : entry.path)
            if (path.empty() || path.back() != q) path.push_back(q);
        if (path.empty() && entry.from != entry.to) {
            auto key = std::minmax(entry.from, entry.to);
            auto it = cx.gluing_by_cells.find({key.first, key.second});
            if (it == cx.gluing_by_cells.end()) throw Error(ErrorCode::BrokenPath, "frame edge skips a cell");
            path.push_back(cx.gluings[it->second].sides[0].quad);
        }
        entry.path = std::move(path);
    }
    return spec;
}

FrameSpec chain_frame(const ParallelogramComplex& cx, const std::vector<VertexLabel>& chain)
{
    std::vector<CurvePoint> curve;
    for (const auto& label : chain) curve.push_back({cx.arrangement.vertices.point(label), true});
    return frame_from_curve(cx, curve);
}

} // namespace conesphere
