// One line per acceptance criterion. Exit status is nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

#include "conesphere/developing.hpp"
#include "conesphere/moduli.hpp"
#include "support.hpp"

using namespace conesphere;
constexpr double pi = std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& what, const std::function<Outcome()>& check)
{
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, what.c_str(), o.detail.c_str());
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<CatalogEntry> all_entries()
{
    std::vector<CatalogEntry> out;
    for (const char* n : {"n4", "n5"})
        for (auto& e : testing::catalog(n).entries) out.push_back(e);
    return out;
}

Outcome deficit_audit()
{
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    detail::Sampler rng(1001);
    double worst = 0.0, worst_total = 0.0;
    std::size_t failed = 0;
    auto start = std::chrono::steady_clock::now();
    for (int d = 0; d < 10; ++d) {
        auto deficits = testing::random_deficits(arr.deficits.size(), rng);
        auto local = arr;
        local.deficits = deficits;
        for (int t = 0; t < 100; ++t) {
            auto cx = build_complex(local, testing::random_lengths(6, rng));
            auto audit = verify_cone_deficits(cx, deficits, 1e-9);
            for (const auto& r : audit.rows) worst = std::max(worst, r.error);
            worst_total = std::max(worst_total, std::abs(audit.total - 4 * pi));
            if (!audit.pass) ++failed;
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = failed == 0 && worst < 1e-9 && worst_total < 1e-8 && secs < 5.0;
    return {ok, "1000 surfaces, worst point error " + num(worst) + ", worst total error " + num(worst_total) + ", "
                    + num(secs) + " s"};
}

Outcome counts()
{
    std::string detail;
    bool ok = true;
    for (auto [name, n] : {std::pair{"N4-A1", 6}, std::pair{"N5-T1", 8}}) {
        auto arr = testing::catalog(n == 6 ? "n4" : "n5").entry(name).arrangement;
        auto cx = build_complex(arr, EdgeLengths::Ones(n));
        auto cells = cell_complex(arr);
        std::size_t v = static_cast<std::size_t>(n * (n - 1));
        ok = ok && cx.quads.size() == v && cells.points.size() == v && cells.arcs.size() == 2 * v
            && cells.faces.size() == v + 2 && cells.euler_characteristic() == 2;
        detail += std::string(detail.empty() ? "" : "; ") + name + " quads " + std::to_string(cx.quads.size())
            + " V " + std::to_string(cells.points.size()) + " E " + std::to_string(cells.arcs.size()) + " F "
            + std::to_string(cells.faces.size());
    }
    return {ok, detail};
}

Outcome signatures()
{
    std::size_t bad = 0, total = 0;
    for (const auto& e : all_entries()) {
        int n = static_cast<int>(e.arrangement.n_loops());
        ++total;
        if (!(signature(area_form(e.arrangement)) == Signature{1, n - 1, 0})) ++bad;
    }
    return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " entries Lorentzian"};
}

Outcome side_verdicts()
{
    bool ok = true;
    std::string detail;
    for (const char* n : {"n4", "n5"}) {
        auto p = testing::catalog(n);
        std::set<std::string> covered;
        std::size_t different = 0;
        for (const auto& pair : p.pairs) {
            auto r = compare_face_sides(p.entry(pair.a).arrangement, p.entry(pair.b).arrangement, pair.frame_a,
                                        pair.frame_b, pair.loop);
            if (r.side == Side::DifferentSide && pair.expected == Side::DifferentSide) {
                ++different;
                covered.insert(pair.loop);
            }
        }
        ok = ok && different == p.pairs.size();
        if (std::string(n) == "n4") ok = ok && covered == std::set<std::string>{"a", "b", "c", "d", "e", "f"};
        detail += std::string(detail.empty() ? "" : "; ") + n + " " + std::to_string(different) + "/"
            + std::to_string(p.pairs.size()) + " pairs on different sides";
    }
    auto p5 = testing::catalog("n5");
    for (auto [a, b, l] : {std::tuple{"N5-T1", "N5-T2", "b"}, std::tuple{"N5-T2", "N5-T3", "h"},
                           std::tuple{"N5-T2", "N5-T4", "e"}}) {
        bool found = false;
        for (const auto& pair : p5.pairs) found = found || (pair.a == a && pair.b == b && pair.loop == l);
        ok = ok && found;
    }
    return {ok, detail};
}

Outcome block_determinants()
{
    auto e4 = testing::catalog("n4").entry("N4-A1");
    auto e5 = testing::catalog("n5").entry("N5-T1");
    double d4 = frame_matrix(e4.arrangement, e4.frame).determinant();
    double d5 = frame_matrix(e5.arrangement, e5.frame).determinant();
    double r4 = std::abs(std::abs(d4) - std::pow(std::sin(pi / 4), 3));
    double r5 = std::abs(std::abs(d5) - std::pow(std::sin(pi / 5), 4));
    bool ok = r4 < 1e-9 && r5 < 1e-9 && (d4 > 0) == (e4.det_sign > 0) && (d5 > 0) == (e5.det_sign > 0);
    return {ok, "det N4 " + num(d4) + ", det N5 " + num(d5) + ", errors " + num(r4) + " " + num(r5)};
}

Outcome round_trip()
{
    detail::Sampler rng(1006);
    double worst = 0.0;
    for (const char* n : {"n4", "n5"}) {
        auto e = testing::catalog(n).entries.front();
        auto m = frame_matrix(e.arrangement, e.frame);
        auto k = static_cast<std::size_t>(e.arrangement.n_loops());
        for (int t = 0; t < 100; ++t) {
            auto l = testing::random_lengths(k, rng);
            worst = std::max(worst, (coordinates_from_frame(m, m * l) - l).cwiseAbs().maxCoeff());
        }
    }
    return {worst < 1e-10, "worst coordinate error " + num(worst)};
}

Outcome ideal_simplex()
{
    auto r = ideal_simplex_check(area_form(testing::catalog("n4").entry("N4-A1").arrangement));
    bool incidence = r.vertices == 6 && r.facets == 6;
    for (auto n : r.facets_per_vertex) incidence = incidence && n == 5;
    for (auto n : r.vertices_per_facet) incidence = incidence && n == 5;
    bool ok = incidence && r.facets_hyperbolic && r.regularity_residual < 1e-8;
    return {ok, std::to_string(r.vertices) + " ideal vertices, " + std::to_string(r.facets) + " facets"
                    + (r.facets_hyperbolic ? " of signature (1,4)" : " not all hyperbolic")
                    + ", regularity residual " + num(r.regularity_residual)};
}

Outcome dihedral()
{
    const D6Element r{1, false}, s{0, true}, id{};
    auto norm = [](D6Element g) { return D6Element{((g.rotation % 6) + 6) % 6, g.reflect}; };
    auto eq = [&](D6Element a, D6Element b) {
        a = norm(a), b = norm(b);
        return a.rotation == b.rotation && a.reflect == b.reflect;
    };
    auto power = [&](D6Element g, int n) {
        D6Element out = id;
        for (int t = 0; t < n; ++t) out = d6_compose(g, out);
        return out;
    };
    bool ok = eq(power(r, 6), id) && eq(power(s, 2), id) && eq(power(d6_compose(s, r), 2), id);
    auto q = area_form(testing::catalog("n4").entry("N4-A1").arrangement);
    double invariance = 0.0;
    for (const auto& g : d6_elements()) {
        Eigen::MatrixXd p = d6_matrix(g);
        invariance = std::max(invariance, (p.transpose() * q.matrix * p - q.matrix).cwiseAbs().maxCoeff());
    }
    detail::Sampler rng(1008);
    std::size_t bad = 0;
    for (int t = 0; t < 100; ++t) {
        auto l = testing::random_lengths(6, rng);
        auto c = canonical_rep(l);
        for (const auto& g : d6_elements()) bad += canonical_rep(d6_apply(g, l)) == c ? 0 : 1;
        bad += orbit(l).size() == 12 ? 0 : 1;
    }
    ok = ok && invariance < 1e-10 && bad == 0;
    return {ok, "relations hold, form invariance " + num(invariance) + ", canonical rep mismatches "
                    + std::to_string(bad)};
}

Outcome metric()
{
    auto q = area_form(testing::catalog("n4").entry("N4-A1").arrangement);
    detail::Sampler rng(1009);
    double worst_triangle = 0.0, worst_symmetry = 0.0, worst_self = 0.0;
    for (int t = 0; t < 1000; ++t) {
        auto x = normalize(testing::random_lengths(6, rng), q);
        auto y = normalize(testing::random_lengths(6, rng), q);
        auto z = normalize(testing::random_lengths(6, rng), q);
        double xy = distance(x, y), yz = distance(y, z), xz = distance(x, z);
        worst_triangle = std::max(worst_triangle, xz - xy - yz);
        worst_symmetry = std::max(worst_symmetry, std::abs(xy - distance(y, x)));
        worst_self = std::max(worst_self, distance(x, x));
    }
    bool ok = worst_triangle <= 1e-9 && worst_symmetry <= 1e-9 && worst_self <= 1e-9;
    return {ok, "1000 triples, triangle excess " + num(worst_triangle) + ", asymmetry " + num(worst_symmetry)
                    + ", d(x,x) " + num(worst_self)};
}

Outcome identities()
{
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& e : all_entries()) {
        auto r = check_identities(e.arrangement);
        worst = std::max({worst, r.triangle_angles, r.lune_sums, r.supplement, r.hemisphere});
        ++n;
    }
    return {worst < 1e-10, std::to_string(n) + " entries, worst residual " + num(worst)};
}

} // namespace

int main()
{
    report(1, "cone deficits", deficit_audit);
    report(2, "cell and quad counts", counts);
    report(3, "area form signature", signatures);
    report(4, "face side verdicts", side_verdicts);
    report(5, "block frame determinants", block_determinants);
    report(6, "frame coordinate round trip", round_trip);
    report(7, "ideal simplex", ideal_simplex);
    report(8, "dihedral symmetry", dihedral);
    report(9, "distance is a metric", metric);
    report(10, "angle identities", identities);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
