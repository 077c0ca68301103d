#include "conesphere/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "conesphere/sampling.hpp"

namespace conesphere {

std::string to_string(const VertexLabel& label)
{
    return std::to_string(label.pair + 1) + (label.sign > 0 ? "+" : "-");
}

std::optional<VertexLabel> parse_vertex_label(const std::string& text)
{
    if (text.size() < 2) return std::nullopt;
    char tail = text.back();
    if (tail != '+' && tail != '-') return std::nullopt;
    std::size_t value = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
        value = value * 10 + static_cast<std::size_t>(text[i] - '0');
    }
    if (value == 0) return std::nullopt;
    return VertexLabel{value - 1, tail == '+' ? 1 : -1};
}

std::optional<std::size_t> LoopArrangement::loop_index(const std::string& label) const
{
    for (std::size_t i = 0; i < loops.size(); ++i)
        if (loops[i].label == label) return i;
    return std::nullopt;
}

std::vector<std::string> LoopArrangement::labels() const
{
    std::vector<std::string> out;
    for (const auto& loop : loops) out.push_back(loop.label);
    return out;
}

std::string default_loop_label(std::size_t index)
{
    if (index < 26) return std::string(1, static_cast<char>('a' + index));
    return "l" + std::to_string(index);
}

int loop_side(const OrientedLoop& loop, const Vec3& p)
{
    double d = loop.normal.dot(p);
    if (std::abs(d) <= kVertexTolerance)
        throw Error(ErrorCode::OnLoop, "point lies on loop " + loop.label);
    return d > 0 ? 1 : -1;
}

Bipartition Bipartition::from_signs(std::vector<int> signs)
{
    if (!signs.empty() && signs[0] < 0)
        for (int& s : signs) s = -s;
    return Bipartition{std::move(signs)};
}

std::vector<VertexLabel> Bipartition::side(int s) const
{
    std::vector<VertexLabel> out;
    for (std::size_t i = 0; i < signs.size(); ++i) out.push_back({i, signs[i] * s});
    return out;
}

std::string Bipartition::to_string() const
{
    std::string out;
    for (int s : signs) out += s > 0 ? '+' : '-';
    return out;
}

std::vector<int> loop_signs(const OrientedLoop& loop, const LabeledVertexSet& vs)
{
    std::vector<int> out;
    out.reserve(vs.n_pairs());
    for (const auto& p : vs.positions) out.push_back(loop_side(loop, p));
    return out;
}

Bipartition vertex_partition(const OrientedLoop& loop, const LabeledVertexSet& vs)
{
    return Bipartition::from_signs(loop_signs(loop, vs));
}

std::string to_string(IssueKind kind)
{
    switch (kind) {
    case IssueKind::EmptyVertexSet: return "EmptyVertexSet";
    case IssueKind::NonUnitVector: return "NonUnitVector";
    case IssueKind::CoincidentVertices: return "CoincidentVertices";
    case IssueKind::DeficitCount: return "DeficitCount";
    case IssueKind::NonPositiveDeficit: return "NonPositiveDeficit";
    case IssueKind::DeficitSum: return "DeficitSum";
    case IssueKind::DuplicateLabel: return "DuplicateLabel";
    case IssueKind::VertexOnLoop: return "VertexOnLoop";
    case IssueKind::ConcurrentLoops: return "ConcurrentLoops";
    case IssueKind::HomotopicPair: return "HomotopicPair";
    case IssueKind::UnseparatedVertices: return "UnseparatedVertices";
    case IssueKind::TooFewLoops: return "TooFewLoops";
    }
    return "Unknown";
}

bool ValidationReport::has(IssueKind kind) const
{
    return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.kind == kind; });
}

namespace {

double angle_between(const Vec3& a, const Vec3& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

} // namespace

ValidationReport validate(const LoopArrangement& arr)
{
    ValidationReport report;
    auto add = [&](IssueKind kind, std::vector<std::size_t> idx, std::string detail) {
        report.issues.push_back({kind, std::move(idx), std::move(detail)});
    };
    const auto& pos = arr.vertices.positions;
    const std::size_t n = pos.size();
    const std::size_t k = arr.loops.size();

    if (n == 0) add(IssueKind::EmptyVertexSet, {}, "no vertex pairs");
    for (std::size_t i = 0; i < n; ++i)
        if (!pos[i].allFinite() || std::abs(pos[i].squaredNorm() - 1.0) > kUnitTolerance)
            add(IssueKind::NonUnitVector, {i}, "vertex " + std::to_string(i + 1) + " is not unit");
    for (std::size_t i = 0; i < k; ++i) {
        const Vec3& v = arr.loops[i].normal;
        if (!v.allFinite() || std::abs(v.squaredNorm() - 1.0) > kUnitTolerance)
            add(IssueKind::NonUnitVector, {i}, "normal of loop " + arr.loops[i].label + " is not unit");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double a = angle_between(pos[i], pos[j]);
            double b = angle_between(pos[i], -pos[j]);
            if (std::min(a, b) <= kVertexSeparation)
                add(IssueKind::CoincidentVertices, {i, j}, "vertex pairs coincide");
        }

    if (arr.deficits.size() != n) {
        add(IssueKind::DeficitCount, {},
            std::to_string(arr.deficits.size()) + " deficits for " + std::to_string(n) + " pairs");
    } else {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(arr.deficits[i] > 0.0))
                add(IssueKind::NonPositiveDeficit, {i}, "deficit must be positive");
            sum += arr.deficits[i];
        }
        if (std::abs(sum - 2.0 * std::numbers::pi) > kDeficitSumTolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "deficits sum to " << sum << ", expected 2pi";
            add(IssueKind::DeficitSum, {}, os.str());
        }
    }

    std::set<std::string> seen;
    for (std::size_t i = 0; i < k; ++i)
        if (!seen.insert(arr.loops[i].label).second)
            add(IssueKind::DuplicateLabel, {i}, "duplicate loop label " + arr.loops[i].label);
    if (k < 3) add(IssueKind::TooFewLoops, {}, "at least three loops are required");

    bool sides_known = true;
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(arr.loops[l].normal.dot(pos[i])) <= kVertexTolerance) {
                sides_known = false;
                add(IssueKind::VertexOnLoop, {l, i},
                    "vertex " + std::to_string(i + 1) + " lies on loop " + arr.loops[l].label);
            }

    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const Vec3& a = arr.loops[i].normal;
            const Vec3& b = arr.loops[j].normal;
            if (a.cross(b).norm() <= kConcurrencyTolerance) {
                add(IssueKind::ConcurrentLoops, {i, j}, "loops coincide");
                continue;
            }
            for (std::size_t m = j + 1; m < k; ++m) {
                double det = a.cross(b).dot(arr.loops[m].normal);
                if (std::abs(det) <= kConcurrencyTolerance)
                    add(IssueKind::ConcurrentLoops, {i, j, m}, "three loops meet at a point");
            }
        }

    if (sides_known && n > 0) {
        std::vector<std::vector<int>> signs(k);
        for (std::size_t l = 0; l < k; ++l) signs[l] = loop_signs(arr.loops[l], arr.vertices);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (Bipartition::from_signs(signs[i]) == Bipartition::from_signs(signs[j]))
                    add(IssueKind::HomotopicPair, {i, j},
                        "loops " + arr.loops[i].label + " and " + arr.loops[j].label
                            + " induce the same bipartition");
        if (k > 0) {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    bool same = true, opposite = true;
                    for (std::size_t l = 0; l < k; ++l) {
                        same = same && signs[l][a] == signs[l][b];
                        opposite = opposite && signs[l][a] == -signs[l][b];
                    }
                    if (same || opposite)
                        add(IssueKind::UnseparatedVertices, {a, b},
                            "vertices " + std::to_string(a + 1) + " and " + std::to_string(b + 1)
                                + (same ? "" : " (antipode)") + " share a cell");
                }
        }
    }
    return report;
}

std::size_t CellComplex::face_containing(const LoopArrangement& arr, const Vec3& p) const
{
    std::vector<int> s;
    for (const auto& loop : arr.loops) s.push_back(loop_side(loop, p));
    auto it = face_by_signs.find(s);
    if (it == face_by_signs.end()) throw Error(ErrorCode::DegenerateArrangement, "point in no cell");
    return it->second;
}

std::size_t CellComplex::face_of(const VertexLabel& label) const
{
    return label_face.at({label.pair, label.sign});
}

std::optional<std::size_t> CellComplex::side_on_loop(std::size_t face, std::size_t loop) const
{
    const Face& f = faces[face];
    for (std::size_t t = 0; t < f.sides.size(); ++t)
        if (arcs[f.sides[t]].loop == loop) return t;
    return std::nullopt;
}

std::size_t CellComplex::point_id(std::size_t i, std::size_t j, int sign) const
{
    if (i > j) {
        std::swap(i, j);
        sign = -sign;
    }
    for (std::size_t p = 0; p < points.size(); p += 2)
        if (points[p].loop_i == i && points[p].loop_j == j) return sign > 0 ? p : p + 1;
    throw Error(ErrorCode::NotIncident, "no such crossing");
}

namespace {

std::pair<Vec3, Vec3> tangent_basis(const Vec3& axis)
{
    Vec3 seed = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 u = (seed - seed.dot(axis) * axis).normalized();
    return {u, axis.cross(u)};
}

} // namespace

CellComplex cell_complex(const LoopArrangement& arr)
{
    auto report = validate(arr);
    if (!report.ok())
        throw Error(ErrorCode::DegenerateArrangement,
                    to_string(report.issues.front().kind) + ": " + report.issues.front().detail);

    const std::size_t k = arr.loops.size();
    CellComplex cx;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            Vec3 x = arr.loops[i].normal.cross(arr.loops[j].normal).normalized();
            std::size_t id = cx.points.size();
            cx.points.push_back({i, j, 1, x, id + 1});
            cx.points.push_back({i, j, -1, -x, id});
        }

    cx.loop_points.resize(k);
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> arc_index;
    for (std::size_t l = 0; l < k; ++l) {
        auto [u, v] = tangent_basis(arr.loops[l].normal);
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t p = 0; p < cx.points.size(); ++p)
            if (cx.points[p].loop_i == l || cx.points[p].loop_j == l) {
                const Vec3& x = cx.points[p].point;
                order.push_back({std::atan2(x.dot(v), x.dot(u)), p});
            }
        std::sort(order.begin(), order.end());
        for (auto& [a, p] : order) cx.loop_points[l].push_back(p);
        const auto& lp = cx.loop_points[l];
        for (std::size_t t = 0; t < lp.size(); ++t) {
            std::size_t from = lp[t], to = lp[(t + 1) % lp.size()];
            arc_index[{l, std::min(from, to), std::max(from, to)}] = cx.arcs.size();
            cx.arcs.push_back({l, from, to, {0, 0}});
        }
    }

    // Cells are exactly the realized sign vectors; every cell has a corner.
    std::vector<std::vector<std::size_t>> corner_lists;
    for (std::size_t p = 0; p < cx.points.size(); ++p) {
        const auto& cp = cx.points[p];
        std::vector<int> base(k);
        for (std::size_t l = 0; l < k; ++l)
            if (l != cp.loop_i && l != cp.loop_j) base[l] = arr.loops[l].normal.dot(cp.point) > 0 ? 1 : -1;
        for (int si : {1, -1})
            for (int sj : {1, -1}) {
                auto s = base;
                s[cp.loop_i] = si;
                s[cp.loop_j] = sj;
                auto [it, inserted] = cx.face_by_signs.try_emplace(s, cx.faces.size());
                if (inserted) {
                    cx.faces.push_back(Face{s, {}, {}, Vec3::Zero(), {}, 0});
                    corner_lists.emplace_back();
                }
                corner_lists[it->second].push_back(p);
            }
    }

    for (std::size_t f = 0; f < cx.faces.size(); ++f) {
        Face& face = cx.faces[f];
        Vec3 sum = Vec3::Zero();
        for (std::size_t p : corner_lists[f]) sum += cx.points[p].point;
        face.centroid = sum.normalized();
        auto [u, v] = tangent_basis(face.centroid);
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t p : corner_lists[f]) {
            const Vec3& x = cx.points[p].point;
            order.push_back({std::atan2(x.dot(v), x.dot(u)), p});
        }
        std::sort(order.begin(), order.end());
        for (auto& [a, p] : order) face.corners.push_back(p);
        const std::size_t r = face.corners.size();
        for (std::size_t t = 0; t < r; ++t) {
            const auto& a = cx.points[face.corners[t]];
            const auto& b = cx.points[face.corners[(t + 1) % r]];
            std::size_t loop = (a.loop_i == b.loop_i || a.loop_i == b.loop_j) ? a.loop_i : a.loop_j;
            std::size_t lo = std::min(face.corners[t], face.corners[(t + 1) % r]);
            std::size_t hi = std::max(face.corners[t], face.corners[(t + 1) % r]);
            auto it = arc_index.find({loop, lo, hi});
            if (it == arc_index.end())
                throw Error(ErrorCode::DegenerateArrangement, "cell side is not an arc");
            face.sides.push_back(it->second);
            Arc& arc = cx.arcs[it->second];
            arc.faces[face.signs[loop] > 0 ? 1 : 0] = f;
        }
    }
    for (auto& face : cx.faces) {
        std::vector<int> neg = face.signs;
        for (int& s : neg) s = -s;
        face.antipode = cx.face_by_signs.at(neg);
    }

    for (std::size_t m = 0; m < arr.n_pairs(); ++m)
        for (int sign : {1, -1}) {
            VertexLabel label{m, sign};
            std::size_t f = cx.face_containing(arr, arr.vertices.point(label));
            cx.label_face[{m, sign}] = f;
            cx.faces[f].labels.push_back(label);
        }
    for (auto& face : cx.faces) std::sort(face.labels.begin(), face.labels.end());
    return cx;
}

std::vector<VertexLabel> lune_vertices(const LoopArrangement& arr, std::size_t i, std::size_t j,
                                       const Vec3& witness)
{
    if (i == j || i >= arr.loops.size() || j >= arr.loops.size())
        throw Error(ErrorCode::NotIncident, "lune needs two distinct loops");
    int si = loop_side(arr.loops[i], witness);
    int sj = loop_side(arr.loops[j], witness);
    std::vector<VertexLabel> out;
    for (std::size_t m = 0; m < arr.n_pairs(); ++m)
        for (int sign : {1, -1}) {
            Vec3 p = sign * arr.vertices.positions[m];
            if (loop_side(arr.loops[i], p) == si && loop_side(arr.loops[j], p) == sj)
                out.push_back({m, sign});
        }
    return out;
}

std::optional<std::size_t> are_adjacent(const LoopArrangement& a, const LoopArrangement& b)
{
    if (a.n_pairs() != b.n_pairs() || a.n_loops() != b.n_loops())
        throw Error(ErrorCode::IncompatibleArrangements, "vertex or loop counts differ");
    for (std::size_t i = 0; i < a.n_pairs(); ++i)
        if ((a.vertices.positions[i] - b.vertices.positions[i]).norm() > kUnitTolerance)
            throw Error(ErrorCode::IncompatibleArrangements, "vertex sets differ");
    if (a.deficits.size() != b.deficits.size())
        throw Error(ErrorCode::IncompatibleArrangements, "deficit counts differ");
    for (std::size_t i = 0; i < a.deficits.size(); ++i)
        if (std::abs(a.deficits[i] - b.deficits[i]) > kDeficitSumTolerance)
            throw Error(ErrorCode::IncompatibleArrangements, "deficits differ");
    for (std::size_t l = 0; l < a.n_loops(); ++l)
        if (a.loops[l].label != b.loops[l].label)
            throw Error(ErrorCode::IncompatibleArrangements, "loop labels differ");

    std::optional<std::size_t> found;
    std::size_t count = 0;
    for (std::size_t l = 0; l < a.n_loops(); ++l)
        if (vertex_partition(a.loops[l], a.vertices) != vertex_partition(b.loops[l], b.vertices)) {
            ++count;
            found = l;
        }
    if (count != 1) return std::nullopt;
    return found;
}

namespace {

std::uint64_t spec_hash(std::uint64_t seed, const std::vector<int>& signs)
{
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
    for (int s : signs) h = detail::splitmix64(h ^ static_cast<std::uint64_t>(s > 0 ? 0xa5 : 0x5a));
    return h;
}

double margin(const Vec3& n, const LabeledVertexSet& vs)
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : vs.positions) m = std::min(m, std::abs(n.dot(p)));
    return m;
}

bool matches(const Vec3& n, const LabeledVertexSet& vs, const std::vector<int>& target)
{
    for (std::size_t i = 0; i < vs.n_pairs(); ++i) {
        double d = n.dot(vs.positions[i]);
        if (std::abs(d) <= kVertexTolerance || (d > 0 ? 1 : -1) != target[i]) return false;
    }
    return true;
}

} // namespace

LoopArrangement search_arrangement(const std::vector<Bipartition>& spec, const LabeledVertexSet& vs,
                                   const SearchOptions& options)
{
    const std::size_t n = vs.n_pairs();
    std::vector<Bipartition> targets;
    for (const auto& b : spec) {
        if (b.signs.size() != n)
            throw Error(ErrorCode::Unrealizable, "bipartition " + b.to_string() + " has wrong length");
        for (int s : b.signs)
            if (s != 1 && s != -1) throw Error(ErrorCode::Unrealizable, "bipartition entries must be +-1");
        targets.push_back(Bipartition::from_signs(b.signs));
    }
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j])
                throw Error(ErrorCode::Unrealizable,
                            "bipartitions " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

    LoopArrangement arr;
    arr.vertices = vs;
    arr.deficits = options.deficits.empty() ? std::vector<double>(n, 2.0 * std::numbers::pi / static_cast<double>(n))
                                            : options.deficits;

    for (std::size_t t = 0; t < targets.size(); ++t) {
        const auto& target = targets[t].signs;
        std::vector<int> negated = target;
        for (int& s : negated) s = -s;
        detail::Sampler rng(spec_hash(options.seed, target));
        std::optional<Vec3> best;
        double best_margin = -1.0;
        std::size_t accepted = 0;
        for (std::size_t a = 0; a < options.attempts && accepted < options.keep; ++a) {
            Vec3 v = rng.on_sphere();
            if (matches(-v, vs, target)) v = -v;
            if (!matches(v, vs, target)) continue;
            ++accepted;
            double m = margin(v, vs);
            if (m > best_margin) {
                best_margin = m;
                best = v;
            }
        }
        if (!best)
            throw Error(ErrorCode::Unrealizable,
                        "no great circle induces " + targets[t].to_string() + " within the attempt budget");
        std::string label = t < options.labels.size() ? options.labels[t] : default_loop_label(t);
        arr.loops.push_back({label, *best});
    }

    // Concurrency repair: nudge the later loop of a nearly concurrent triple
    // inside its admissible cone.
    detail::Sampler rng(options.seed ^ 0xc0ffee1234567ULL);
    const double wanted = 1e-6;
    const std::size_t k = arr.loops.size();
    for (std::size_t round = 0; round < 1000; ++round) {
        std::optional<std::size_t> bad;
        for (std::size_t i = 0; i < k && !bad; ++i)
            for (std::size_t j = i + 1; j < k && !bad; ++j)
                for (std::size_t m = j + 1; m < k && !bad; ++m) {
                    double det = arr.loops[i].normal.cross(arr.loops[j].normal).dot(arr.loops[m].normal);
                    if (std::abs(det) <= wanted) bad = m;
                }
        if (!bad) break;
        Vec3& normal = arr.loops[*bad].normal;
        const auto& target = targets[*bad].signs;
        for (double scale = 1e-3; scale > 1e-9; scale *= 0.5) {
            Vec3 trial = (normal + scale * rng.on_sphere()).normalized();
            if (matches(trial, vs, target)) {
                normal = trial;
                break;
            }
        }
    }

    auto report = validate(arr);
    if (!report.ok())
        throw Error(ErrorCode::Unrealizable,
                    "searched arrangement is invalid: " + to_string(report.issues.front().kind) + " "
                        + report.issues.front().detail);
    return arr;
}

std::string combinatorial_signature(const LoopArrangement& arr)
{
    const std::size_t n = arr.n_pairs();
    const std::size_t k = arr.n_loops();
    std::vector<std::vector<int>> rows;
    for (const auto& loop : arr.loops) rows.push_back(loop_signs(loop, arr.vertices));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> best;
    do {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<std::vector<int>> m(k, std::vector<int>(n));
            for (std::size_t r = 0; r < k; ++r) {
                for (std::size_t c = 0; c < n; ++c)
                    m[r][c] = rows[r][perm[c]] * ((mask >> c) & 1u ? -1 : 1);
                if (m[r][0] < 0)
                    for (int& s : m[r]) s = -s;
            }
            std::sort(m.begin(), m.end());
            if (best.empty() || m < best) best = std::move(m);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::string out = "N" + std::to_string(n) + "k" + std::to_string(k);
    for (const auto& r : best) {
        out += ':';
        for (int s : r) out += s > 0 ? '+' : '-';
    }
    return out;
}

} // namespace conesphere
