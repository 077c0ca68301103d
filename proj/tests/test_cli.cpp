#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "conesphere/cli.hpp"
#include "support.hpp"

using namespace conesphere;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string ex(const std::string& name) { return testing::data_path("examples/" + name); }

std::string temp_file(const std::string& name, const std::string& text)
{
    auto p = std::filesystem::temp_directory_path() / ("conesphere_cli_" + name);
    write_file(p.string(), text);
    return p.string();
}

} // namespace

TEST_CASE("validate")
{
    auto r = run({"validate", ex("n4_a1.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid") != std::string::npos);
    std::string text = read_file(ex("n4_a1.json"));
    auto at = text.find("\"label\": \"b\"");
    text.replace(at, 12, "\"label\": \"a\"");
    auto bad = run({"--json", "validate", temp_file("dup.json", text)});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("DuplicateLabel") != std::string::npos);
}

TEST_CASE("audit passes on a valid surface")
{
    auto r = run({"audit", "--lengths", ex("n4_lengths.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("all pass") != std::string::npos);
    auto j = run({"--json", "audit", "--lengths", ex("n4_lengths.json")});
    CHECK(nlohmann::json::parse(j.out)["pass"] == true);
    CHECK(nlohmann::json::parse(j.out)["rows"].size() == 32);
}

TEST_CASE("compare-sides on the reference pair")
{
    auto r = run({"compare-sides", "--a", ex("n4_a1.json"), "--b", ex("n4_a2.json"), "--loop", "a", "--frame",
                  ex("n4_a1_a2_frames.json")});
    CHECK(r.code == 0);
    CHECK(r.out == "different\n");
}

TEST_CASE("area-form, frame-matrix and simplex-check")
{
    auto a = run({"--json", "area-form", "--arr", ex("n4_a1.json")});
    CHECK(a.code == 0);
    CHECK(nlohmann::json::parse(a.out)["signature"] == nlohmann::json::array({1, 5, 0}));
    auto f = run({"--json", "frame-matrix", "--arr", ex("n4_a1.json"), "--frame", ex("chain_2_3_4.json")});
    CHECK(f.code == 0);
    double det = nlohmann::json::parse(f.out)["det"];
    CHECK(std::abs(std::abs(det) - std::pow(std::sin(std::numbers::pi / 4), 3)) < 1e-9);
    auto s = run({"--json", "simplex-check", "--arr", ex("n4_a1.json")});
    CHECK(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["vertices"] == 6);
}

TEST_CASE("build, distance, orbit and unfold")
{
    auto b = run({"--json", "build", "--lengths", ex("n4_lengths.json")});
    CHECK(b.code == 0);
    CHECK(nlohmann::json::parse(b.out)["quads"] == 30);
    auto d = run({"--json", "distance", "--x", ex("n4_lengths.json"), "--y", ex("n4_lengths.json")});
    CHECK(d.code == 0);
    CHECK(nlohmann::json::parse(d.out)["distance"] == 0.0);
    auto o = run({"--json", "orbit", "--lengths", ex("n4_lengths.json")});
    CHECK(o.code == 0);
    CHECK(nlohmann::json::parse(o.out)["orbit_size"] == 12);
    auto svg = (std::filesystem::temp_directory_path() / "conesphere_cli.svg").string();
    auto u = run({"unfold", "--lengths", ex("n4_lengths.json"), "--svg", svg});
    CHECK(u.code == 0);
    CHECK(read_file(svg).find("<polygon") != std::string::npos);
}

TEST_CASE("search honors the seed")
{
    auto a = run({"search", "--spec", ex("n4_search.json"), "--seed", "7"});
    auto b = run({"search", "--spec", ex("n4_search.json"), "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(parse_arrangement(a.out).n_loops() == 6);
    setenv("CONESPHERE_SEED", "7", 1);
    auto c = run({"search", "--spec", ex("n4_search.json")});
    unsetenv("CONESPHERE_SEED");
    CHECK(c.out == a.out);
}

TEST_CASE("usage errors exit 2")
{
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"audit"}).code == 2);
    CHECK(run({"--tolerance", "-1", "audit", "--lengths", ex("n4_lengths.json")}).code == 2);
}

TEST_CASE("malformed input gives a diagnostic, not a crash")
{
    auto r = run({"validate", temp_file("broken.json", "{\"n_pairs\": ")});
    CHECK(r.code == 1);
    CHECK(r.err.find("line") != std::string::npos);
    CHECK(run({"validate", "/nonexistent/file.json"}).code == 1);
    auto t = run({"audit", "--lengths", temp_file("lengths.json", "{\"a\": 1}")});
    CHECK(t.code == 1);
    CHECK_FALSE(t.err.empty());
    auto w = run({"compare-sides", "--a", ex("n4_a1.json"), "--b", ex("n4_a1.json"), "--loop", "a", "--frame",
                  ex("chain_2_3_4.json")});
    CHECK(w.code == 1);
    CHECK(w.err.find("differ") != std::string::npos);
}
