#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "conesphere/developing.hpp"
#include "support.hpp"

using namespace conesphere;
constexpr double pi = std::numbers::pi;

namespace {

double wrap(double a)
{
    double r = std::remainder(a, 2 * pi);
    return r <= -pi ? r + 2 * pi : r;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

FrameSpec catalog_frame(const LoopArrangement& arr, std::vector<VertexLabel> chain)
{
    return chain_frame(build_complex(arr, EdgeLengths::Ones(static_cast<Eigen::Index>(arr.n_loops()))), chain);
}

const std::vector<VertexLabel> kBlock4{{1, 1}, {2, 1}, {3, 1}, {1, -1}};
const std::vector<VertexLabel> kBlock5{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {1, -1}};

} // namespace

TEST_CASE("unfolding keeps every quad congruent and the base canonical")
{
    detail::Sampler rng(8);
    auto arr = testing::catalog("n5").entry("N5-T3").arrangement;
    auto cx = build_complex(arr, testing::random_lengths(8, rng));
    for (auto policy : {TreePolicy::BreadthFirst, TreePolicy::DepthFirst}) {
        auto dev = unfold(cx, 3, policy);
        REQUIRE(dev.quads.size() == 56);
        double area = 0.0;
        for (std::size_t q = 0; q < dev.quads.size(); ++q) {
            const auto& d = dev.quads[q];
            const auto& quad = cx.quads[q];
            if (q != 3) CHECK(d.parent.has_value());
            for (std::size_t m = 0; m < 4; ++m) {
                Vec2 e = d.corners[(m + 1) % 4] - d.corners[m];
                CHECK(e.norm() == doctest::Approx(cx.edge_length(q, m)).epsilon(1e-12));
                Vec2 prev = d.corners[m] - d.corners[(m + 3) % 4];
                double turn = std::atan2(cross(prev, e), prev.dot(e));
                CHECK(pi - turn == doctest::Approx(quad.angles[m]).epsilon(1e-12));
            }
            area += std::abs(cross(d.corners[1] - d.corners[0], d.corners[3] - d.corners[0]));
        }
        CHECK(std::abs(area - total_area(cx)) <= 1e-12 * area);
        const auto& base = dev.quads[3];
        CHECK(base.corners[0].norm() < 1e-15);
        CHECK(std::abs(base.corners[1].y()) < 1e-15);
        CHECK(base.corners[1].x() > 0);
    }
    CHECK_THROWS_AS(unfold(cx, 56), Error);
    auto flat = cx;
    flat.lengths[cx.quads[0].loop_i] = 0.0;
    CHECK_THROWS_AS(unfold(flat, 0), Error);
}

TEST_CASE("holonomy around a cone point is its deficit")
{
    detail::Sampler rng(12);
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    arr.deficits = testing::random_deficits(4, rng);
    auto cx = build_complex(arr, testing::random_lengths(6, rng));
    auto audit = verify_cone_deficits(cx, arr.deficits);
    for (const auto& row : audit.rows)
        CHECK(std::abs(wrap(holonomy(cx, row.cone_point) - row.measured)) < 1e-9);
}

TEST_CASE("copies across non-tree edges differ by deficit rotations")
{
    detail::Sampler rng(14);
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    arr.deficits = testing::random_deficits(4, rng);
    auto cx = build_complex(arr, testing::random_lengths(6, rng));
    auto dev = unfold(cx);
    std::vector<double> sums;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c)
                for (int d = -1; d <= 1; ++d)
                    for (int e = -2; e <= 2; ++e)
                        sums.push_back(a * arr.deficits[0] + b * arr.deficits[1] + c * arr.deficits[2]
                                       + d * arr.deficits[3] + e * pi);
    std::size_t non_tree = 0;
    for (const auto& g : cx.gluings) {
        std::size_t p = g.sides[0].quad, q = g.sides[1].quad;
        if (dev.quads[q].parent == p || dev.quads[p].parent == q) continue;
        ++non_tree;
        Placement moved = glue(cx, p, dev.quads[p].placement, q);
        double rot = wrap(moved.angle - dev.quads[q].placement.angle);
        bool found = std::any_of(sums.begin(), sums.end(), [&](double s) { return std::abs(wrap(rot - s)) < 1e-9; });
        CHECK(found);
    }
    CHECK(non_tree == cx.gluings.size() - (cx.quads.size() - 1));
}

TEST_CASE("frame vectors are linear and match the frame matrix")
{
    detail::Sampler rng(31);
    for (auto [name, entry, chain] : {std::tuple{"n4", "N4-A1", kBlock4}, std::tuple{"n5", "N5-T1", kBlock5}}) {
        auto arr = testing::catalog(name).entry(entry).arrangement;
        const std::size_t k = arr.n_loops();
        auto spec = catalog_frame(arr, chain);
        CHECK(spec.size() == arr.n_pairs() - 1);
        auto m = frame_matrix(arr, spec);
        for (int t = 0; t < 20; ++t) {
            auto l = testing::random_lengths(k, rng);
            auto cx = build_complex(arr, l);
            auto z = stack(frame_vectors(cx, unfold(cx), spec));
            CHECK((z - m * l).cwiseAbs().maxCoeff() < 1e-10);
            auto cx2 = build_complex(arr, 2 * l);
            CHECK((stack(frame_vectors(cx2, unfold(cx2), spec)) - 2 * z).cwiseAbs().maxCoeff() < 1e-10);
            auto dfs = stack(frame_vectors(cx, unfold(cx, 5, TreePolicy::DepthFirst), spec));
            CHECK((dfs - z).cwiseAbs().maxCoeff() < 1e-12);
            auto l2 = testing::random_lengths(k, rng);
            auto cx3 = build_complex(arr, 0.3 * l + 1.7 * l2);
            auto cx4 = build_complex(arr, l2);
            auto z3 = stack(frame_vectors(cx3, unfold(cx3), spec));
            auto z4 = stack(frame_vectors(cx4, unfold(cx4), spec));
            CHECK((z3 - 0.3 * z - 1.7 * z4).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("empty path with equal ends gives a zero vector")
{
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    auto cx = build_complex(arr, EdgeLengths::Ones(6));
    FrameSpec spec{FrameEntry{4, 4, {}}};
    auto z = frame_vectors(cx, unfold(cx), spec);
    REQUIRE(z.size() == 1);
    CHECK(z[0].norm() == 0.0);
    FrameSpec broken{FrameEntry{4, 5, {}}};
    CHECK_THROWS_AS(frame_vectors(cx, unfold(cx), broken), Error);
}

TEST_CASE("block frame determinants")
{
    auto a1 = testing::catalog("n4").entry("N4-A1").arrangement;
    double s = std::sin(pi / 4);
    CHECK(std::abs(std::abs(frame_matrix(a1, catalog_frame(a1, kBlock4)).determinant()) - s * s * s) < 1e-9);
    auto t1 = testing::catalog("n5").entry("N5-T1").arrangement;
    double s5 = std::sin(pi / 5);
    CHECK(std::abs(std::abs(frame_matrix(t1, catalog_frame(t1, kBlock5)).determinant()) - std::pow(s5, 4)) < 1e-9);
}

TEST_CASE("frames that miss a loop are rejected")
{
    auto arr = testing::catalog("n4").entry("N4-A1").arrangement;
    FrameSpec idle{FrameEntry{0, 0, {}}, FrameEntry{1, 1, {}}, FrameEntry{2, 2, {}}};
    CHECK_THROWS_AS(frame_matrix(arr, idle), Error);
    auto spec = catalog_frame(arr, kBlock4);
    spec.pop_back();
    try {
        frame_matrix(arr, spec);
        FAIL("expected NotAFrame");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAFrame);
    }
}

TEST_CASE("coordinates from a frame")
{
    detail::Sampler rng(41);
    auto arr = testing::catalog("n5").entry("N5-T1").arrangement;
    auto m = frame_matrix(arr, catalog_frame(arr, kBlock5));
    CHECK(coordinates_from_frame(m, Eigen::VectorXd::Zero(8)).norm() == 0.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto l = testing::random_lengths(8, rng);
        worst = std::max(worst, (coordinates_from_frame(m, m * l) - l).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
    FrameMatrix singular{Eigen::MatrixXd::Zero(8, 8), m.labels};
    try {
        coordinates_from_frame(singular, Eigen::VectorXd::Zero(8));
        FAIL("expected SingularFrame");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularFrame);
    }
}

TEST_CASE("side verdicts on catalog pairs")
{
    for (const char* name : {"n4", "n5"}) {
        auto p = testing::catalog(name);
        for (const auto& pair : p.pairs) {
            INFO(pair.a << " " << pair.b);
            auto r = compare_face_sides(p.entry(pair.a).arrangement, p.entry(pair.b).arrangement, pair.frame_a,
                                        pair.frame_b, pair.loop);
            CHECK(r.side == pair.expected);
            CHECK(r.side == Side::DifferentSide);
            CHECK(r.mismatch <= 1e-8);
        }
    }
}

TEST_CASE("the verdict does not depend on the chain")
{
    auto p = testing::catalog("n4");
    const auto& a = p.entry("N4-A1").arrangement;
    const auto& b = p.entry("N4-A2").arrangement;
    auto ca = build_complex(a, EdgeLengths::Ones(6));
    auto cb = build_complex(b, EdgeLengths::Ones(6));
    std::size_t checked = 0, different = 0;
    std::vector<std::size_t> order{0, 1, 2, 3};
    do {
        for (int s1 : {1, -1})
            for (int s2 : {1, -1}) {
                std::vector<VertexLabel> chain{{order[0], 1}, {order[1], s1}, {order[2], s2}, {order[0], -1}};
                try {
                    auto r = compare_face_sides(a, b, chain_frame(ca, chain), chain_frame(cb, chain), "a");
                    ++checked;
                    different += r.side == Side::DifferentSide;
                } catch (const Error&) {
                }
            }
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(checked > 10);
    CHECK(different == checked);
}

TEST_CASE("compare_face_sides needs exactly one changed loop")
{
    auto p = testing::catalog("n4");
    const auto& a2 = p.entry("N4-A2").arrangement;
    const auto& ad = p.entry("N4-A1-d").arrangement;
    auto f = catalog_frame(a2, kBlock4);
    try {
        compare_face_sides(a2, ad, f, catalog_frame(ad, kBlock4), "a");
        FAIL("expected NotAdjacent");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAdjacent);
    }
}
