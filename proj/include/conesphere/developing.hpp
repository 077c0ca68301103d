#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conesphere/decomposition.hpp"

namespace conesphere {

// Rigid motion x -> R(angle) x + offset.  The angle is tracked explicitly so
// gluing still works across quads with zero-length sides.
struct Placement {
    double angle = 0.0;
    Vec2 offset = Vec2::Zero();

    Vec2 apply(const Vec2& x) const;
};

// Placement of quad `to` glued to `from` (already at `at`) across their
// shared dual edge.
Placement glue(const ParallelogramComplex& cx, std::size_t from, const Placement& at, std::size_t to);

enum class TreePolicy { BreadthFirst, DepthFirst };

struct DevelopedQuad {
    std::size_t loop_i = 0;
    std::size_t loop_j = 0;
    std::array<std::size_t, 4> cells{};
    std::array<Vec2, 4> corners;
    Placement placement;
    std::optional<std::size_t> parent; // tree predecessor
};

struct DevelopedComplex {
    std::size_t base = 0;
    TreePolicy policy = TreePolicy::BreadthFirst;
    std::vector<DevelopedQuad> quads;
    std::vector<std::string> loop_labels;
    std::map<std::size_t, std::string> cone_labels; // cell id -> "1+" etc.
};

DevelopedComplex unfold(const ParallelogramComplex& cx, std::size_t base = 0,
                        TreePolicy policy = TreePolicy::BreadthFirst);

// Deficit seen by walking once around a cone point, wrapped to (-pi, pi].
double holonomy(const ParallelogramComplex& cx, std::size_t cone_point);

struct FrameEntry {
    std::size_t from = 0; // cone point (cell) ids
    std::size_t to = 0;
    std::vector<std::size_t> path; // quad ids

    friend bool operator==(const FrameEntry&, const FrameEntry&) = default;
};

// Entries are developed as one strip: the first quad of each path is glued
// to the last quad of the previous one.
using FrameSpec = std::vector<FrameEntry>;

std::vector<Vec2> frame_vectors(const ParallelogramComplex& cx, const DevelopedComplex& dev, const FrameSpec& spec);

struct FrameMatrix {
    Eigen::MatrixXd matrix; // rows x0 y0 x1 y1 ..., one column per loop
    std::vector<std::string> labels;

    double determinant() const { return matrix.determinant(); }
    Eigen::VectorXd operator*(const EdgeLengths& l) const { return matrix * l; }
};

FrameMatrix frame_matrix(const LoopArrangement& arr, const FrameSpec& spec);
FrameMatrix frame_matrix(const LoopArrangement& arr, const std::vector<double>& deficits, const FrameSpec& spec);

Eigen::VectorXd stack(const std::vector<Vec2>& z);

double singular_threshold(const FrameMatrix& m);
EdgeLengths coordinates_from_frame(const FrameMatrix& m, const Eigen::VectorXd& z);

enum class Side { SameSide, DifferentSide };
std::string to_string(Side side);

struct SideComparison {
    Side side = Side::SameSide;
    double det_a = 0.0;
    double det_b = 0.0;
    double mismatch = 0.0; // largest difference over the shared columns
    std::size_t loop = 0;
};

SideComparison compare_face_sides(const LoopArrangement& a, const LoopArrangement& b, const FrameSpec& frame_a,
                                  const FrameSpec& frame_b, const std::string& loop_label);

// Frame specs from a polyline on the sphere: consecutive points are joined by
// great arcs, and points flagged as nodes (labeled vertices) end one frame
// edge and start the next.
struct CurvePoint {
    Vec3 point;
    bool node = false;
};

FrameSpec frame_from_curve(const ParallelogramComplex& cx, const std::vector<CurvePoint>& curve);
FrameSpec chain_frame(const ParallelogramComplex& cx, const std::vector<VertexLabel>& chain);

} // namespace conesphere
