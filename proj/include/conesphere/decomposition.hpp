#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conesphere/arrangement.hpp"

namespace conesphere {

// One length per loop, in loop order.
using EdgeLengths = Eigen::VectorXd;

EdgeLengths lengths_from_labels(const LoopArrangement& arr, const std::map<std::string, double>& by_label);
std::map<std::string, double> lengths_by_label(const LoopArrangement& arr, const EdgeLengths& l);

// Corner angle: pi minus half the deficits enclosed by the lune of l_i, l_j that
// contains the given cell.
double corner_angle(const LoopArrangement& arr, const CellComplex& cx, std::size_t loop_i, std::size_t loop_j,
                    std::size_t corner_cell);
double lune_angle(const LoopArrangement& arr, std::size_t loop_i, std::size_t loop_j, const Vec3& witness);

// Dual quadrilateral of a crossing point.  Corners are arrangement cells in
// counterclockwise order; corner 0 is the cell on the inside of loop_i whose
// successor is outside it, so edge 0 is transverse to loop_i.
struct Quad {
    std::size_t loop_i = 0;
    std::size_t loop_j = 0;
    std::size_t point = 0; // crossing point id, equal to the quad id
    std::array<std::size_t, 4> cells{};
    std::array<std::array<int, 2>, 4> corner_signs{}; // sides of loop_i, loop_j
    std::array<double, 4> angles{};
    std::array<std::size_t, 4> transverse{}; // edge m joins corner m to m+1
    std::size_t antipode = 0;
};

struct QuadEdge {
    std::size_t quad = 0;
    std::size_t edge = 0;
};

// Dual edge shared by two quads, keyed by the two cells it joins.
struct Gluing {
    std::size_t cell_lo = 0;
    std::size_t cell_hi = 0;
    std::size_t loop = 0;
    std::array<QuadEdge, 2> sides{};
};

struct ConeCorner {
    std::size_t quad = 0;
    std::size_t corner = 0;
};

struct ConePoint {
    std::size_t cell = 0;
    std::vector<ConeCorner> corners; // ccw around the cell
    std::vector<VertexLabel> labels;
    std::size_t antipode = 0;
};

struct ParallelogramComplex {
    LoopArrangement arrangement;
    CellComplex cells;
    EdgeLengths lengths;
    std::vector<Quad> quads;
    std::vector<Gluing> gluings;
    std::vector<ConePoint> cone_points;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> gluing_by_cells;
    std::vector<std::string> warnings;

    double edge_length(std::size_t quad, std::size_t edge) const { return lengths[quads[quad].transverse[edge]]; }
    bool degenerate(std::size_t quad) const;
    bool collapsed(std::size_t quad) const;
    std::size_t corner_of(std::size_t quad, std::size_t cell) const;
    long euler_characteristic() const
    {
        return static_cast<long>(cone_points.size()) - static_cast<long>(gluings.size())
            + static_cast<long>(quads.size());
    }
};

ParallelogramComplex build_complex(const LoopArrangement& arr, const EdgeLengths& l);

// Corner positions of a quad in its own frame: corner 0 at the origin and
// edge 0 along +x.  dirs[m] is the direction angle of edge m.
struct LocalQuad {
    std::array<Vec2, 4> corners;
    std::array<double, 4> dirs{};
};
LocalQuad local_quad(const ParallelogramComplex& cx, std::size_t quad);

double cone_angle_at(const ParallelogramComplex& cx, std::size_t cone_point);

struct DeficitRow {
    std::size_t cone_point = 0;
    std::vector<VertexLabel> labels;
    double angle = 0.0;
    double measured = 0.0;
    double expected = 0.0;
    double error = 0.0;
    bool pass = false;
};

struct DeficitAudit {
    std::vector<DeficitRow> rows;
    double total = 0.0;
    double tolerance = 1e-9;
    bool total_pass = false;
    bool pass = false;
};

DeficitAudit verify_cone_deficits(const ParallelogramComplex& cx, const std::vector<double>& deficits,
                                  double tolerance = 1e-9);

double total_area(const ParallelogramComplex& cx);

struct AreaForm {
    Eigen::MatrixXd matrix;
    std::vector<std::string> labels;

    double operator()(const EdgeLengths& l) const { return l.dot(matrix * l); }
    double bilinear(const EdgeLengths& l, const EdgeLengths& m) const { return l.dot(matrix * m); }
};

AreaForm area_form(const LoopArrangement& arr);
AreaForm area_form(const LoopArrangement& arr, const std::vector<double>& deficits);

struct Signature {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature(const Eigen::MatrixXd& q);
inline Signature signature(const AreaForm& q) { return signature(q.matrix); }

// Largest residuals of the angle identities over all loop triples, all
// triangles they bound and all quads.
struct IdentityReport {
    double triangle_angles = 0.0; // theta_i + theta_j + theta_k = 2pi - deficits in T
    double lune_sums = 0.0;       // three lune sums minus twice the triangle sum = 2pi
    double supplement = 0.0;      // adjacent corners of a quad add to pi
    double hemisphere = 0.0;      // adjacent lunes enclose deficits summing to 2pi
    std::size_t triples = 0;
    std::size_t triangles = 0;
};

IdentityReport check_identities(const LoopArrangement& arr);

} // namespace conesphere
