#include "conesphere/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conesphere {

namespace {
constexpr double kPi = std::numbers::pi;
}

EdgeLengths lengths_from_labels(const LoopArrangement& arr, const std::map<std::string, double>& by_label)
{
    EdgeLengths l(static_cast<Eigen::Index>(arr.n_loops()));
    for (std::size_t i = 0; i < arr.n_loops(); ++i) {
        auto it = by_label.find(arr.loops[i].label);
        if (it == by_label.end())
            throw Error(ErrorCode::ValidationError, "no length for loop " + arr.loops[i].label);
        l[static_cast<Eigen::Index>(i)] = it->second;
    }
    if (by_label.size() != arr.n_loops())
        throw Error(ErrorCode::ValidationError, "lengths name loops that are not in the arrangement");
    return l;
}

std::map<std::string, double> lengths_by_label(const LoopArrangement& arr, const EdgeLengths& l)
{
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < arr.n_loops(); ++i) out[arr.loops[i].label] = l[static_cast<Eigen::Index>(i)];
    return out;
}

double lune_angle(const LoopArrangement& arr, std::size_t loop_i, std::size_t loop_j, const Vec3& witness)
{
    double sum = 0.0;
    for (const auto& label : lune_vertices(arr, loop_i, loop_j, witness)) sum += arr.deficits[label.pair];
    return kPi - 0.5 * sum;
}

double corner_angle(const LoopArrangement& arr, const CellComplex& cx, std::size_t loop_i, std::size_t loop_j,
                    std::size_t corner_cell)
{
    if (corner_cell >= cx.faces.size() || loop_i == loop_j)
        throw Error(ErrorCode::NotIncident, "no such cell");
    const Face& face = cx.faces[corner_cell];
    bool incident = std::any_of(face.corners.begin(), face.corners.end(), [&](std::size_t p) {
        const auto& cp = cx.points[p];
        return (cp.loop_i == loop_i && cp.loop_j == loop_j) || (cp.loop_i == loop_j && cp.loop_j == loop_i);
    });
    if (!incident) throw Error(ErrorCode::NotIncident, "cell is not a corner of this crossing");
    return lune_angle(arr, loop_i, loop_j, face.centroid);
}

bool ParallelogramComplex::degenerate(std::size_t quad) const
{
    const Quad& q = quads[quad];
    return lengths[q.loop_i] == 0.0 || lengths[q.loop_j] == 0.0;
}

bool ParallelogramComplex::collapsed(std::size_t quad) const
{
    const Quad& q = quads[quad];
    return lengths[q.loop_i] == 0.0 && lengths[q.loop_j] == 0.0;
}

std::size_t ParallelogramComplex::corner_of(std::size_t quad, std::size_t cell) const
{
    const auto& cells_of = quads[quad].cells;
    for (std::size_t m = 0; m < 4; ++m)
        if (cells_of[m] == cell) return m;
    throw Error(ErrorCode::NotIncident, "quad " + std::to_string(quad) + " has no corner at cell " + std::to_string(cell));
}

ParallelogramComplex build_complex(const LoopArrangement& arr, const EdgeLengths& l)
{
    if (static_cast<std::size_t>(l.size()) != arr.n_loops())
        throw Error(ErrorCode::ValidationError, "one length per loop is required");
    for (Eigen::Index i = 0; i < l.size(); ++i)
        if (!(l[i] >= 0.0) || !std::isfinite(l[i]))
            throw Error(ErrorCode::ValidationError, "edge lengths must be finite and nonnegative");

    ParallelogramComplex out;
    out.arrangement = arr;
    out.cells = cell_complex(arr);
    out.lengths = l;
    const CellComplex& cx = out.cells;

    for (std::size_t p = 0; p < cx.points.size(); ++p) {
        const auto& cp = cx.points[p];
        const Vec3& ni = arr.loops[cp.loop_i].normal;
        const Vec3& nj = arr.loops[cp.loop_j].normal;
        Vec3 e1 = ni;
        Vec3 e2 = cp.point.cross(ni);
        struct Corner {
            double angle;
            int si, sj;
            std::size_t cell;
        };
        std::vector<Corner> corners;
        std::vector<int> base(arr.n_loops());
        for (std::size_t m = 0; m < arr.n_loops(); ++m)
            if (m != cp.loop_i && m != cp.loop_j) base[m] = arr.loops[m].normal.dot(cp.point) > 0 ? 1 : -1;
        for (int si : {1, -1})
            for (int sj : {1, -1}) {
                Vec3 w = si * ni + sj * nj;
                auto s = base;
                s[cp.loop_i] = si;
                s[cp.loop_j] = sj;
                corners.push_back({std::atan2(w.dot(e2), w.dot(e1)), si, sj, cx.face_by_signs.at(s)});
            }
        std::sort(corners.begin(), corners.end(), [](const Corner& a, const Corner& b) { return a.angle < b.angle; });
        std::size_t start = 0;
        for (std::size_t m = 0; m < 4; ++m)
            if (corners[m].si < 0 && corners[(m + 1) % 4].si > 0) start = m;
        std::rotate(corners.begin(), corners.begin() + static_cast<long>(start), corners.end());

        Quad q;
        q.loop_i = cp.loop_i;
        q.loop_j = cp.loop_j;
        q.point = p;
        q.antipode = cp.antipode;
        for (std::size_t m = 0; m < 4; ++m) {
            q.cells[m] = corners[m].cell;
            q.corner_signs[m] = {corners[m].si, corners[m].sj};
            q.angles[m] = corner_angle(arr, cx, cp.loop_i, cp.loop_j, corners[m].cell);
            q.transverse[m] = corners[m].si != corners[(m + 1) % 4].si ? cp.loop_i : cp.loop_j;
            if (q.angles[m] >= kPi - 1e-9)
                out.warnings.push_back("quad " + std::to_string(p) + " has a corner angle of pi");
        }
        out.quads.push_back(q);
    }

    for (std::size_t qi = 0; qi < out.quads.size(); ++qi) {
        const Quad& q = out.quads[qi];
        for (std::size_t m = 0; m < 4; ++m) {
            std::size_t a = q.cells[m], b = q.cells[(m + 1) % 4];
            auto key = std::minmax(a, b);
            auto [it, inserted] = out.gluing_by_cells.try_emplace({key.first, key.second}, out.gluings.size());
            if (inserted) {
                out.gluings.push_back({key.first, key.second, q.transverse[m], {QuadEdge{qi, m}, QuadEdge{qi, m}}});
            } else {
                out.gluings[it->second].sides[1] = {qi, m};
            }
        }
    }
    for (const auto& g : out.gluings)
        if (g.sides[0].quad == g.sides[1].quad)
            throw Error(ErrorCode::DegenerateArrangement, "dual edge with a single quad");

    for (std::size_t f = 0; f < cx.faces.size(); ++f) {
        ConePoint c;
        c.cell = f;
        c.labels = cx.faces[f].labels;
        c.antipode = cx.faces[f].antipode;
        for (std::size_t p : cx.faces[f].corners) c.corners.push_back({p, out.corner_of(p, f)});
        out.cone_points.push_back(std::move(c));
    }
    return out;
}

LocalQuad local_quad(const ParallelogramComplex& cx, std::size_t quad)
{
    const Quad& q = cx.quads[quad];
    LocalQuad out;
    Vec2 pos = Vec2::Zero();
    double d = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
        out.corners[m] = pos;
        out.dirs[m] = d;
        pos += cx.edge_length(quad, m) * Vec2(std::cos(d), std::sin(d));
        d += kPi - q.angles[(m + 1) % 4];
    }
    return out;
}

double cone_angle_at(const ParallelogramComplex& cx, std::size_t cone_point)
{
    double sum = 0.0;
    for (const auto& c : cx.cone_points.at(cone_point).corners) {
        if (cx.collapsed(c.quad)) continue;
        sum += cx.quads[c.quad].angles[c.corner];
    }
    return sum;
}

DeficitAudit verify_cone_deficits(const ParallelogramComplex& cx, const std::vector<double>& deficits,
                                  double tolerance)
{
    DeficitAudit audit;
    audit.tolerance = tolerance;
    audit.pass = true;
    for (std::size_t c = 0; c < cx.cone_points.size(); ++c) {
        DeficitRow row;
        row.cone_point = c;
        row.labels = cx.cone_points[c].labels;
        row.angle = cone_angle_at(cx, c);
        row.measured = 2.0 * kPi - row.angle;
        for (const auto& label : row.labels)
            row.expected += label.pair < deficits.size() ? deficits[label.pair] : 0.0;
        row.error = std::abs(row.measured - row.expected);
        row.pass = row.error <= tolerance;
        audit.pass = audit.pass && row.pass;
        audit.total += row.measured;
        audit.rows.push_back(std::move(row));
    }
    audit.total_pass = std::abs(audit.total - 4.0 * kPi) <= 10.0 * tolerance;
    audit.pass = audit.pass && audit.total_pass;
    return audit;
}

double total_area(const ParallelogramComplex& cx)
{
    double area = 0.0;
    for (const auto& q : cx.quads) area += cx.lengths[q.loop_i] * cx.lengths[q.loop_j] * std::sin(q.angles[0]);
    return area;
}

AreaForm area_form(const LoopArrangement& arr)
{
    auto report = validate(arr);
    if (!report.ok())
        throw Error(ErrorCode::DegenerateArrangement,
                    to_string(report.issues.front().kind) + ": " + report.issues.front().detail);
    const auto k = static_cast<Eigen::Index>(arr.n_loops());
    AreaForm q{Eigen::MatrixXd::Zero(k, k), arr.labels()};
    // Each pair of loops crosses twice; antipodal quads have equal angles, and
    // sin of a corner angle equals sin of its supplement.
    for (std::size_t i = 0; i < arr.n_loops(); ++i)
        for (std::size_t j = i + 1; j < arr.n_loops(); ++j) {
            Vec3 witness = (arr.loops[i].normal + arr.loops[j].normal).normalized();
            double s = std::sin(lune_angle(arr, i, j, witness));
            q.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
            q.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s;
        }
    return q;
}

AreaForm area_form(const LoopArrangement& arr, const std::vector<double>& deficits)
{
    LoopArrangement copy = arr;
    copy.deficits = deficits;
    return area_form(copy);
}

Signature signature(const Eigen::MatrixXd& q)
{
    Signature s;
    if (q.size() == 0) return s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    double scale = ev.cwiseAbs().maxCoeff();
    double eps = 1e-9 * scale;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (scale == 0.0 || std::abs(ev[i]) <= eps)
            ++s.zero;
        else if (ev[i] > 0)
            ++s.positive;
        else
            ++s.negative;
    }
    return s;
}

IdentityReport check_identities(const LoopArrangement& arr)
{
    IdentityReport r;
    const std::size_t k = arr.n_loops();
    const auto& n = arr.loops;
    auto enclosed = [&](const std::vector<int>& signs, const std::vector<std::size_t>& loops) {
        double sum = 0.0;
        for (std::size_t m = 0; m < arr.n_pairs(); ++m)
            for (int sign : {1, -1}) {
                Vec3 p = sign * arr.vertices.positions[m];
                bool inside = true;
                for (std::size_t t = 0; t < loops.size(); ++t) inside = inside && loop_side(n[loops[t]], p) == signs[t];
                if (inside) sum += arr.deficits[m];
            }
        return sum;
    };

    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            for (std::size_t m = j + 1; m < k; ++m) {
                ++r.triples;
                const std::size_t ids[3] = {i, j, m};
                for (int mask = 0; mask < 8; ++mask) {
                    std::vector<int> t = {mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1};
                    // Triangle corners: the crossing of the other two loops on
                    // the triangle's side of the third.
                    Vec3 centroid = Vec3::Zero();
                    std::array<Vec3, 3> corner;
                    for (int a = 0; a < 3; ++a) {
                        std::size_t p = ids[(a + 1) % 3], q = ids[(a + 2) % 3];
                        Vec3 x = n[p].normal.cross(n[q].normal).normalized();
                        if (n[ids[a]].normal.dot(x) * t[a] < 0) x = -x;
                        corner[a] = x;
                        centroid += x;
                    }
                    centroid.normalize();
                    ++r.triangles;
                    double theta_sum = 0.0, lune_sum = 0.0;
                    for (int a = 0; a < 3; ++a) {
                        std::size_t p = ids[(a + 1) % 3], q = ids[(a + 2) % 3];
                        double theta = lune_angle(arr, p, q, centroid);
                        theta_sum += theta;
                        lune_sum += 2.0 * (kPi - theta);
                    }
                    double tri = enclosed(t, {i, j, m});
                    r.triangle_angles = std::max(r.triangle_angles, std::abs(theta_sum - (2.0 * kPi - tri)));
                    r.lune_sums = std::max(r.lune_sums, std::abs(lune_sum - 2.0 * tri - 2.0 * kPi));
                }
            }

    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            for (int si : {1, -1}) {
                // Lunes (si, +) and (si, -) form a hemisphere.
                double a = enclosed({si, 1}, {i, j});
                double b = enclosed({si, -1}, {i, j});
                r.hemisphere = std::max(r.hemisphere, std::abs(a + b - 2.0 * kPi));
            }

    EdgeLengths ones = EdgeLengths::Ones(static_cast<Eigen::Index>(k));
    auto cx = build_complex(arr, ones);
    for (const auto& q : cx.quads)
        for (std::size_t m = 0; m < 4; ++m)
            r.supplement = std::max(r.supplement, std::abs(q.angles[m] + q.angles[(m + 1) % 4] - kPi));
    return r;
}

} // namespace conesphere
