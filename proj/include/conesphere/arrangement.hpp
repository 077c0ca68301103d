#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conesphere/error.hpp"

namespace conesphere {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kVertexTolerance = 1e-9;
inline constexpr double kConcurrencyTolerance = 1e-9;
inline constexpr double kDeficitSumTolerance = 1e-10;
inline constexpr double kVertexSeparation = 1e-9;

// Vertex i+ (sign +1) or its antipode i- (sign -1); pair is 0-based.
struct VertexLabel {
    std::size_t pair = 0;
    int sign = 1;

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
    friend auto operator<=>(const VertexLabel& a, const VertexLabel& b)
    {
        if (a.pair != b.pair) return a.pair <=> b.pair;
        return b.sign <=> a.sign; // i+ before i-
    }
};

std::string to_string(const VertexLabel& label);
std::optional<VertexLabel> parse_vertex_label(const std::string& text);

struct LabeledVertexSet {
    std::vector<Vec3> positions; // position of i+; i- is the antipode

    std::size_t n_pairs() const { return positions.size(); }
    Vec3 point(const VertexLabel& label) const { return label.sign * positions[label.pair]; }
};

struct OrientedLoop {
    std::string label;
    Vec3 normal = Vec3::UnitZ(); // points to the outside
};

struct LoopArrangement {
    LabeledVertexSet vertices;
    std::vector<OrientedLoop> loops;
    std::vector<double> deficits;

    std::size_t n_pairs() const { return vertices.n_pairs(); }
    std::size_t n_loops() const { return loops.size(); }
    std::optional<std::size_t> loop_index(const std::string& label) const;
    std::vector<std::string> labels() const;
};

// +1 outside, -1 inside.
int loop_side(const OrientedLoop& loop, const Vec3& p);

// Sides of the vertices i+ as seen by one loop, normalized so vertex 1+ is on
// the + side.  Two loops are homotopic rel. vertices iff their bipartitions
// are equal.
struct Bipartition {
    std::vector<int> signs;

    static Bipartition from_signs(std::vector<int> signs);
    std::vector<VertexLabel> side(int s) const;
    std::string to_string() const;

    friend bool operator==(const Bipartition&, const Bipartition&) = default;
    friend auto operator<=>(const Bipartition&, const Bipartition&) = default;
};

std::vector<int> loop_signs(const OrientedLoop& loop, const LabeledVertexSet& vs);
Bipartition vertex_partition(const OrientedLoop& loop, const LabeledVertexSet& vs);

enum class IssueKind {
    EmptyVertexSet,
    NonUnitVector,
    CoincidentVertices,
    DeficitCount,
    NonPositiveDeficit,
    DeficitSum,
    DuplicateLabel,
    VertexOnLoop,
    ConcurrentLoops,
    HomotopicPair,
    UnseparatedVertices,
    TooFewLoops,
};

std::string to_string(IssueKind kind);

struct Issue {
    IssueKind kind;
    std::vector<std::size_t> indices;
    std::string detail;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const { return issues.empty(); }
    bool has(IssueKind kind) const;
};

ValidationReport validate(const LoopArrangement& arr);

struct CrossingPoint {
    std::size_t loop_i = 0; // loop_i < loop_j
    std::size_t loop_j = 0;
    int sign = 1;           // point = sign * normalize(n_i x n_j)
    Vec3 point;
    std::size_t antipode = 0;
};

struct Arc {
    std::size_t loop = 0;
    std::size_t from = 0; // crossing point ids, counterclockwise about the normal
    std::size_t to = 0;
    std::array<std::size_t, 2> faces{}; // faces[0] inside, faces[1] outside
};

struct Face {
    std::vector<int> signs;            // loop_side of the interior, per loop
    std::vector<std::size_t> corners;  // crossing point ids, counterclockwise seen from outside
    std::vector<std::size_t> sides;    // arc id between corners[t] and corners[t+1]
    Vec3 centroid;                     // normalized corner sum
    std::vector<VertexLabel> labels;   // enclosed labeled vertices
    std::size_t antipode = 0;
};

struct CellComplex {
    std::vector<CrossingPoint> points;
    std::vector<Arc> arcs;
    std::vector<Face> faces;
    std::vector<std::vector<std::size_t>> loop_points; // counterclockwise about each normal
    std::map<std::vector<int>, std::size_t> face_by_signs;

    std::size_t face_containing(const LoopArrangement& arr, const Vec3& p) const;
    std::size_t face_of(const VertexLabel& label) const;
    std::optional<std::size_t> side_on_loop(std::size_t face, std::size_t loop) const;
    std::size_t point_id(std::size_t i, std::size_t j, int sign) const;
    long euler_characteristic() const
    {
        return static_cast<long>(points.size()) - static_cast<long>(arcs.size())
            + static_cast<long>(faces.size());
    }

    std::map<std::pair<std::size_t, int>, std::size_t> label_face;
};

CellComplex cell_complex(const LoopArrangement& arr);

// Labels inside the lune of loops i, j that contains the witness point.
std::vector<VertexLabel> lune_vertices(const LoopArrangement& arr, std::size_t i, std::size_t j,
                                       const Vec3& witness);

// Index of the single loop whose bipartition differs, if exactly one does.
std::optional<std::size_t> are_adjacent(const LoopArrangement& a, const LoopArrangement& b);

struct SearchOptions {
    std::uint64_t seed = 1;
    std::size_t attempts = 200000;      // normal samples per loop
    std::size_t keep = 256;             // accepted samples compared per loop
    std::vector<std::string> labels;    // defaults to a, b, c, ...
    std::vector<double> deficits;       // defaults to 2pi/N each
};

LoopArrangement search_arrangement(const std::vector<Bipartition>& spec, const LabeledVertexSet& vs,
                                   const SearchOptions& options = {});

// Canonical bipartition matrix under loop and vertex relabelings, vertex
// antipode swaps and loop orientation flips.
std::string combinatorial_signature(const LoopArrangement& arr);

// Default loop labels a, b, ..., z, a1, ...
std::string default_loop_label(std::size_t index);

} // namespace conesphere
