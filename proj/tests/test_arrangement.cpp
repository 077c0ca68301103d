#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "conesphere/arrangement.hpp"
#include "support.hpp"

using namespace conesphere;

namespace {

LoopArrangement equator_pair()
{
    LoopArrangement arr;
    arr.vertices.positions = {Vec3(0.1, 0.2, 1).normalized(), Vec3(0.3, -0.1, -1).normalized()};
    arr.deficits = {std::numbers::pi, std::numbers::pi};
    return arr;
}

} // namespace

TEST_CASE("loop_side at the poles")
{
    OrientedLoop l{"a", Vec3::UnitZ()};
    CHECK(loop_side(l, Vec3::UnitZ()) == 1);
    CHECK(loop_side(l, -Vec3::UnitZ()) == -1);
}

TEST_CASE("loop_side flips under the antipodal map")
{
    detail::Sampler rng(5);
    for (int t = 0; t < 100; ++t) {
        OrientedLoop l{"a", rng.on_sphere()};
        Vec3 p = rng.on_sphere();
        CHECK(loop_side(l, p) == -loop_side(l, -p));
    }
}

TEST_CASE("vertex_partition of an equator")
{
    auto arr = equator_pair();
    OrientedLoop up{"a", Vec3::UnitZ()}, down{"a", -Vec3::UnitZ()};
    auto p = vertex_partition(up, arr.vertices);
    CHECK(p.signs == std::vector<int>{1, -1});
    CHECK(vertex_partition(down, arr.vertices) == p);
    auto outside = p.side(1);
    REQUIRE(outside.size() == 2);
    CHECK(to_string(outside[0]) == "1+");
    CHECK(to_string(outside[1]) == "2-");
}

TEST_CASE("catalog arrangements validate and reproduce their specs")
{
    for (const char* name : {"n4", "n5"}) {
        auto project = testing::catalog(name);
        for (const auto& e : project.entries) {
            INFO(e.name);
            CHECK(validate(e.arrangement).ok());
            REQUIRE(e.spec.size() == e.arrangement.n_loops());
            for (std::size_t l = 0; l < e.spec.size(); ++l)
                CHECK(vertex_partition(e.arrangement.loops[l], e.arrangement.vertices) == e.spec[l]);
            std::set<Bipartition> distinct(e.spec.begin(), e.spec.end());
            CHECK(distinct.size() == e.spec.size());
        }
    }
}

TEST_CASE("validate reports forced problems")
{
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    SUBCASE("duplicate loop")
    {
        auto bad = arr;
        bad.loops[1].normal = bad.loops[0].normal;
        bad.loops[1].label = "z";
        auto r = validate(bad);
        CHECK(r.has(IssueKind::HomotopicPair));
    }
    SUBCASE("loop through a vertex")
    {
        auto bad = arr;
        Vec3 v = bad.vertices.positions[0];
        Vec3 n = bad.loops[0].normal;
        bad.loops[0].normal = (n - n.dot(v) * v).normalized();
        CHECK(validate(bad).has(IssueKind::VertexOnLoop));
    }
    SUBCASE("deficits off by a little")
    {
        auto bad = arr;
        bad.deficits[0] += 1e-6;
        CHECK(validate(bad).has(IssueKind::DeficitSum));
    }
    SUBCASE("non unit normal")
    {
        auto bad = arr;
        bad.loops[2].normal *= 1.01;
        CHECK(validate(bad).has(IssueKind::NonUnitVector));
    }
    SUBCASE("too few loops")
    {
        auto bad = arr;
        bad.loops.resize(2);
        CHECK(validate(bad).has(IssueKind::TooFewLoops));
    }
}

TEST_CASE("cell complex counts")
{
    for (const char* name : {"n4", "n5"}) {
        for (const auto& e : testing::catalog(name).entries) {
            auto cc = cell_complex(e.arrangement);
            std::size_t k = e.arrangement.n_loops();
            CHECK(cc.points.size() == k * (k - 1));
            CHECK(cc.arcs.size() == 2 * k * (k - 1));
            CHECK(cc.faces.size() == k * k - k + 2);
            CHECK(static_cast<long>(cc.points.size()) - static_cast<long>(cc.arcs.size())
                      + static_cast<long>(cc.faces.size())
                  == 2);
        }
    }
}

TEST_CASE("cell complex is antipodally symmetric")
{
    auto arr = testing::catalog("n5").entry("N5-T1").arrangement;
    auto cc = cell_complex(arr);
    for (std::size_t f = 0; f < cc.faces.size(); ++f) {
        const Face& face = cc.faces[f];
        const Face& anti = cc.faces[face.antipode];
        CHECK(anti.antipode == f);
        for (std::size_t l = 0; l < face.signs.size(); ++l) CHECK(anti.signs[l] == -face.signs[l]);
        CHECK(anti.corners.size() == face.corners.size());
        CHECK(anti.labels.size() == face.labels.size());
    }
    for (const auto& p : cc.points) CHECK((cc.points[p.antipode].point + p.point).norm() < 1e-12);
}

TEST_CASE("lunes partition the labels and pair up antipodally")
{
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    const std::size_t n = arr.n_pairs(), k = arr.n_loops();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const Vec3& a = arr.loops[i].normal;
            const Vec3& b = arr.loops[j].normal;
            std::size_t total = 0;
            std::vector<std::vector<VertexLabel>> lunes;
            for (int si : {1, -1})
                for (int sj : {1, -1}) {
                    Vec3 w = (si * a + sj * b).normalized();
                    lunes.push_back(lune_vertices(arr, i, j, w));
                    total += lunes.back().size();
                }
            CHECK(total == 2 * n);
            // (+,+) and (-,-) are antipodal lunes.
            CHECK(lunes[0].size() == lunes[3].size());
            CHECK(lunes[1].size() == lunes[2].size());
            for (const auto& v : lunes[0])
                CHECK(std::count(lunes[3].begin(), lunes[3].end(), VertexLabel{v.pair, -v.sign}) == 1);
            // Two adjacent lunes make a hemisphere: their deficits add to 2pi.
            double sum = 0.0;
            for (const auto* s : {&lunes[0], &lunes[1]})
                for (const auto& v : *s) sum += arr.deficits[v.pair];
            CHECK(sum == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
        }
}

TEST_CASE("are_adjacent")
{
    auto p = testing::catalog("n4");
    const auto& a1 = p.entry("N4-A1").arrangement;
    const auto& a2 = p.entry("N4-A2").arrangement;
    CHECK_FALSE(are_adjacent(a1, a1).has_value());
    auto d = are_adjacent(a1, a2);
    REQUIRE(d.has_value());
    CHECK(a1.loops[*d].label == "a");
    const auto& ad = p.entry("N4-A1-d").arrangement;
    CHECK_FALSE(are_adjacent(a2, ad).has_value());
}

TEST_CASE("search is deterministic and validates")
{
    auto e = testing::catalog("n4").entry("N4-A1");
    SearchOptions so;
    so.seed = 42;
    so.deficits = e.arrangement.deficits;
    auto x = search_arrangement(e.spec, e.arrangement.vertices, so);
    auto y = search_arrangement(e.spec, e.arrangement.vertices, so);
    CHECK(validate(x).ok());
    REQUIRE(x.loops.size() == y.loops.size());
    for (std::size_t l = 0; l < x.loops.size(); ++l) CHECK(x.loops[l].normal == y.loops[l].normal);
    for (std::size_t l = 0; l < x.loops.size(); ++l) CHECK(vertex_partition(x.loops[l], x.vertices) == e.spec[l]);
}

TEST_CASE("search on cube-like vertices")
{
    // Body diagonals of a slightly skewed cube, one taken with its other end.
    LabeledVertexSet vs;
    vs.positions = {Vec3(1, 1, 1).normalized(), Vec3(1, -1, -1.1).normalized(), Vec3(1, -1.05, 1).normalized(),
                    Vec3(-1.1, -1, 1).normalized()};
    std::vector<Bipartition> spec;
    for (auto s : std::vector<std::vector<int>>{{1, 1, -1, -1}, {1, -1, 1, 1}, {1, 1, 1, -1}, {1, -1, -1, 1},
                                                {1, 1, 1, 1}, {1, -1, -1, -1}})
        spec.push_back(Bipartition::from_signs(s));
    auto arr = search_arrangement(spec, vs, {});
    CHECK(validate(arr).ok());
}

TEST_CASE("search rejects repeated bipartitions")
{
    auto e = testing::catalog("n4").entry("N4-A1");
    auto spec = e.spec;
    spec[1] = spec[0];
    CHECK_THROWS_AS(search_arrangement(spec, e.arrangement.vertices, {}), Error);
    try {
        search_arrangement(spec, e.arrangement.vertices, {});
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Unrealizable);
    }
}

TEST_CASE("combinatorial signature")
{
    auto n4 = testing::catalog("n4");
    const auto& a1 = n4.entry("N4-A1").arrangement;
    auto permuted = a1;
    std::reverse(permuted.loops.begin(), permuted.loops.end());
    CHECK(combinatorial_signature(permuted) == combinatorial_signature(a1));
    CHECK(combinatorial_signature(n4.entry("N4-A2").arrangement) == combinatorial_signature(a1));
    auto n5 = testing::catalog("n5");
    CHECK(combinatorial_signature(n5.entry("N5-T1").arrangement)
          != combinatorial_signature(n5.entry("N5-T2").arrangement));
    // Small perturbations that keep every class keep the signature.
    auto nudged = a1;
    for (auto& l : nudged.loops) l.normal = (l.normal + Vec3(1e-7, -2e-7, 1e-7)).normalized();
    REQUIRE(validate(nudged).ok());
    CHECK(combinatorial_signature(nudged) == combinatorial_signature(a1));
}
