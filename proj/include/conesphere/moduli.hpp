#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "conesphere/decomposition.hpp"

namespace conesphere {

struct ModuliPoint {
    EdgeLengths l;
    AreaForm form;
};

ModuliPoint normalize(const EdgeLengths& l, const AreaForm& q);

// Hyperboloid distance arccosh(x^T Q y).
double distance(const ModuliPoint& x, const ModuliPoint& y);

struct IdealSimplexReport {
    std::vector<double> null_residuals; // |Q(e_i)| per axis
    std::size_t vertices = 0;           // axes that are Q-null
    std::size_t facets = 0;             // coordinate hyperplanes
    std::vector<std::size_t> facets_per_vertex;
    std::vector<std::size_t> vertices_per_facet;
    std::vector<Signature> facet_signatures;
    bool facets_hyperbolic = false; // every facet has signature (1, k-2, 0)
    double regularity_residual = 0.0;
    std::vector<double> rescaling; // exp(u_i) from the fit, normalized to max 1
};

IdealSimplexReport ideal_simplex_check(const AreaForm& q);

// Dihedral element r^rotation composed after s^reflect.
struct D6Element {
    int rotation = 0;
    bool reflect = false;
};

std::array<D6Element, 12> d6_elements();
D6Element d6_compose(const D6Element& g, const D6Element& h); // g after h
EdgeLengths d6_apply(const D6Element& g, const EdgeLengths& l);
// P with d6_apply(g, l) = P l.
Eigen::MatrixXd d6_matrix(const D6Element& g);

std::vector<EdgeLengths> orbit(const EdgeLengths& l);
EdgeLengths canonical_rep(const EdgeLengths& l);

} // namespace conesphere
