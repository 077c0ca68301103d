#include "conesphere/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conesphere {

ModuliPoint normalize(const EdgeLengths& l, const AreaForm& q)
{
    if (l.size() != q.matrix.rows()) throw Error(ErrorCode::IncompatibleForms, "length vector and form sizes differ");
    if ((l.array() < 0.0).any()) throw Error(ErrorCode::NonPositiveArea, "lengths must be nonnegative");
    double area = q(l);
    if (!(area > 0.0) || !std::isfinite(area)) throw Error(ErrorCode::NonPositiveArea, "area is not positive");
    return {l / std::sqrt(area), q};
}

double distance(const ModuliPoint& x, const ModuliPoint& y)
{
    if (x.form.matrix.rows() != y.form.matrix.rows() || x.form.matrix != y.form.matrix)
        throw Error(ErrorCode::IncompatibleForms, "points use different area forms");
    double b = x.form.bilinear(x.l, y.l);
    if (b < 1.0 - 1e-12) throw Error(ErrorCode::IncompatibleForms, "points are not on one sheet of the hyperboloid");
    // acosh(b) loses half the digits near b = 1.  With Q(x) = Q(y) = 1,
    // -Q(x - y) = 2b - 2, which gives the same value stably.
    EdgeLengths diff = x.l - y.l;
    double gap = std::max(0.0, -x.form(diff));
    return 2.0 * std::asinh(0.5 * std::sqrt(gap));
}

IdealSimplexReport ideal_simplex_check(const AreaForm& q)
{
    const Eigen::Index k = q.matrix.rows();
    Signature sig = signature(q);
    if (sig != Signature{1, static_cast<int>(k) - 1, 0})
        throw Error(ErrorCode::WrongSignature, "form is not Lorentzian");

    IdealSimplexReport r;
    r.facets = static_cast<std::size_t>(k);
    r.facets_per_vertex.assign(static_cast<std::size_t>(k), 0);
    r.vertices_per_facet.assign(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < k; ++i) {
        double res = std::abs(q.matrix(i, i));
        r.null_residuals.push_back(res);
        if (res <= 1e-12) ++r.vertices;
    }
    // Axis e_i lies on the facet x_j = 0 for every j other than i.
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (i != j) {
                ++r.facets_per_vertex[static_cast<std::size_t>(i)];
                ++r.vertices_per_facet[static_cast<std::size_t>(j)];
            }

    r.facets_hyperbolic = true;
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::MatrixXd sub(k - 1, k - 1);
        for (Eigen::Index a = 0, ra = 0; a < k; ++a) {
            if (a == j) continue;
            for (Eigen::Index b = 0, rb = 0; b < k; ++b) {
                if (b == j) continue;
                sub(ra, rb++) = q.matrix(a, b);
            }
            ++ra;
        }
        Signature s = signature(sub);
        r.facet_signatures.push_back(s);
        r.facets_hyperbolic = r.facets_hyperbolic && s == Signature{1, static_cast<int>(k) - 2, 0};
    }

    // log B_ij = u_i + u_j + c in the least squares sense.
    const Eigen::Index rows = k * (k - 1) / 2;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, k + 1);
    Eigen::VectorXd b(rows);
    Eigen::Index row = 0;
    bool positive = true;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j, ++row) {
            double v = q.matrix(i, j);
            positive = positive && v > 0.0;
            a(row, i) = 1.0;
            a(row, j) = 1.0;
            a(row, k) = 1.0;
            b[row] = v > 0.0 ? std::log(v) : 0.0;
        }
    if (!positive) {
        r.regularity_residual = std::numeric_limits<double>::infinity();
        return r;
    }
    Eigen::VectorXd x = a.completeOrthogonalDecomposition().solve(b);
    r.regularity_residual = (a * x - b).norm();
    // B_ij = exp(u_i + u_j + c), so rescaling axis i by exp(-u_i) equalizes the
    // pairwise products.
    Eigen::VectorXd u = x.head(k);
    double top = (-u).maxCoeff();
    for (Eigen::Index i = 0; i < k; ++i) r.rescaling.push_back(std::exp(-u[i] - top));
    return r;
}

namespace {

constexpr std::array<int, 6> kRotation = {2, 3, 4, 5, 1, 0};

std::array<int, 6> permutation(const D6Element& g)
{
    // new_k = old_{p[k]}
    std::array<int, 6> p = {0, 1, 2, 3, 4, 5};
    if (g.reflect) p = {5, 4, 3, 2, 1, 0};
    int turns = ((g.rotation % 6) + 6) % 6;
    for (int t = 0; t < turns; ++t) {
        std::array<int, 6> next{};
        for (int k = 0; k < 6; ++k) next[k] = p[kRotation[k]];
        p = next;
    }
    return p;
}

void require_chart(const EdgeLengths& l)
{
    if (l.size() != 6) throw Error(ErrorCode::WrongChart, "the dihedral action needs six loops");
}

} // namespace

std::array<D6Element, 12> d6_elements()
{
    std::array<D6Element, 12> out;
    for (int t = 0; t < 12; ++t) out[t] = {t % 6, t >= 6};
    return out;
}

EdgeLengths d6_apply(const D6Element& g, const EdgeLengths& l)
{
    require_chart(l);
    auto p = permutation(g);
    EdgeLengths out(6);
    for (int k = 0; k < 6; ++k) out[k] = l[p[k]];
    return out;
}

Eigen::MatrixXd d6_matrix(const D6Element& g)
{
    auto p = permutation(g);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    for (int k = 0; k < 6; ++k) m(k, p[k]) = 1.0;
    return m;
}

D6Element d6_compose(const D6Element& g, const D6Element& h)
{
    // Identify the composite by its action on a vector with distinct entries.
    EdgeLengths probe(6);
    probe << 1, 2, 3, 4, 5, 6;
    EdgeLengths target = d6_apply(g, d6_apply(h, probe));
    for (const auto& e : d6_elements())
        if (d6_apply(e, probe) == target) return e;
    throw Error(ErrorCode::WrongChart, "composite is not in the group");
}

std::vector<EdgeLengths> orbit(const EdgeLengths& l)
{
    require_chart(l);
    std::vector<EdgeLengths> out;
    for (const auto& g : d6_elements()) {
        EdgeLengths v = d6_apply(g, l);
        if (std::none_of(out.begin(), out.end(), [&](const EdgeLengths& w) { return w == v; })) out.push_back(v);
    }
    return out;
}

EdgeLengths canonical_rep(const EdgeLengths& l)
{
    auto all = orbit(l);
    return *std::min_element(all.begin(), all.end(), [](const EdgeLengths& a, const EdgeLengths& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
}

} // namespace conesphere
