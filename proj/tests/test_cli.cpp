#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "deltamod/cli.hpp"

using namespace deltamod;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string manifest_field(const std::string& err, const std::string& key) {
    const std::string tag = '"' + key + "\":\"";
    const std::size_t pos = err.find(tag);
    REQUIRE(pos != std::string::npos);
    const std::size_t start = pos + tag.size();
    return err.substr(start, err.find('"', start) - start);
}

double first_number_after(const std::string& text, const std::string& key) {
    const std::string tag = '"' + key + "\":";
    const std::size_t pos = text.find(tag);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + tag.size()));
}

}  // namespace

TEST_CASE("hash primitives match published vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ull);
    CHECK(splitmix64(42) == 0xbdd732262feb6e95ull);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"group", "info", "--family", "dihedral"}).code == 2);  // missing --param
    CHECK(run({"group", "info", "--family", "klein", "--param", "3"}).code == 2);
    CHECK(run({"--output", "csv", "spectrum", "gap", "--group-order", "6"}).code == 2);
    CHECK(run({"spectrum", "gap", "--group-order", "7"}).code == 2);
    CHECK(run({"--jobs", "0", "spectrum", "gap", "--group-order", "6"}).code == 2);
    CHECK(run({"spectrum", "gap", "--group-order", "6"}).code == 0);

    const RunResult help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("deltamod") != std::string::npos);
    CHECK(help.err.empty());

    const RunResult version = run({"--version"});
    CHECK(version.code == 0);
    CHECK(version.out == "deltamod 1.0.0\n");

    // Bad shapes are usage errors, not crashes.
    CHECK(run({"hommap", "build", "--shape", "torus:m=3"}).code == 2);
    CHECK(run({"hommap", "build", "--shape", "tree:m=3"}).code == 2);
    CHECK(run({"hommap", "build", "--shape", "tree:m=3:legs=1,1,2"}).code == 2);
    CHECK(run({"hommap", "build", "--shape", "loop:cycle=auto"}).code == 2);
    CHECK(run({"hommap", "build", "--shape", "loop:link=moebius:cycle=auto"}).code == 2);
}

TEST_CASE("usage errors explain themselves on stderr") {
    const RunResult r = run({"spectrum", "gap"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("usage error:") != std::string::npos);
}

TEST_CASE("spectrum payloads are frozen") {
    const RunResult gap = run({"spectrum", "gap", "--group-order", "6"});
    CHECK(gap.code == 0);
    CHECK(gap.out == "{\"gap\":{\"den\":6,\"num\":1}}\n");
    CHECK(run({"spectrum", "gap", "--group-order", "48"}).out ==
          "{\"gap\":{\"den\":48,\"num\":1}}\n");

    const RunResult list = run({"spectrum", "list", "--group-order", "6", "--max", "2"});
    CHECK(list.out ==
          "[{\"den\":1,\"num\":1},{\"den\":6,\"num\":7},{\"den\":3,\"num\":4},"
          "{\"den\":2,\"num\":3},{\"den\":3,\"num\":5},{\"den\":6,\"num\":11},"
          "{\"den\":1,\"num\":2}]\n");

    const RunResult rankone =
        run({"spectrum", "list", "--rank-one", "--max", "3"});
    CHECK(rankone.out ==
          "[{\"den\":1,\"num\":1},{\"den\":2,\"num\":3},{\"den\":1,\"num\":2},"
          "{\"den\":2,\"num\":5},{\"den\":1,\"num\":3}]\n");

    const RunResult parts = run({"spectrum", "partitions", "--alpha", "3/2"});
    CHECK(parts.code == 0);
    CHECK(parts.out.find("\"count\":3") != std::string::npos);
    CHECK(parts.out.find("\"parts\":[3]") != std::string::npos);
    CHECK(parts.out.find("\"parts\":[2,1]") != std::string::npos);
    CHECK(parts.out.find("\"parts\":[1,1,1]") != std::string::npos);
    CHECK(parts.out.find("\"degenerate\":true") != std::string::npos);

    CHECK(run({"spectrum", "partitions", "--alpha", "1.3"}).out.find("\"count\":0") !=
          std::string::npos);
}

TEST_CASE("group info payload") {
    const RunResult r = run({"group", "info", "--family", "dihedral", "--param", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"family\":\"dihedral\"") != std::string::npos);
    CHECK(r.out.find("\"order\":6") != std::string::npos);
    CHECK(r.out.find("\"rank\":2") != std::string::npos);
    CHECK(r.out.find("{\"count\":1,\"order\":1}") != std::string::npos);
    CHECK(r.out.find("{\"count\":3,\"order\":2}") != std::string::npos);
    CHECK(r.out.find("{\"count\":2,\"order\":3}") != std::string::npos);

    const RunResult h3 = run({"group", "info", "--family", "h3", "--param", "3"});
    CHECK(h3.out.find("\"order\":120") != std::string::npos);
}

TEST_CASE("manifest digest matches the payload") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"spectrum", "gap", "--group-order", "24"},
          std::vector<std::string>{"group", "info", "--family", "b", "--param", "3"},
          std::vector<std::string>{"--seed", "5", "billiard", "trace", "--family",
                                   "dihedral", "--param", "5", "--samples", "9"}}) {
        const RunResult r = run(args);
        REQUIRE(r.code == 0);
        CHECK(manifest_field(r.err, "digest") == fnv1a64_hex(r.out));
        CHECK(manifest_field(r.err, "version") == "deltamod 1.0.0");
        CHECK(r.err.find("\"command\":\"deltamod ") != std::string::npos);
        CHECK(r.err.find("\"duration_ms\":") != std::string::npos);
        CHECK(r.err.back() == '\n');
    }
}

TEST_CASE("manifest echoes the command line and seed") {
    const RunResult r =
        run({"--seed", "31", "billiard", "trace", "--family", "a", "--param", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("\"command\":\"deltamod --seed 31 billiard trace --family a --param 2\"") !=
          std::string::npos);
    CHECK(r.err.find("\"seed\":31") != std::string::npos);
}

TEST_CASE("trace is deterministic in the seed") {
    const std::vector<std::string> args{"--seed", "11", "billiard", "trace",
                                        "--family", "b",  "--param", "3"};
    const RunResult a = run(args);
    const RunResult b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    const RunResult c =
        run({"--seed", "12", "billiard", "trace", "--family", "b", "--param", "3"});
    CHECK(c.out != a.out);

    CHECK(a.out.find("\"lambda\":") != std::string::npos);
    CHECK(a.out.find("\"monodromy_word\":") != std::string::npos);
    CHECK(a.out.find("\"events\":") != std::string::npos);
    // --samples n produces n rows.
    const RunResult d = run({"billiard", "trace", "--family", "dihedral", "--param", "3",
                             "--samples", "4"});
    std::size_t rows = 0;
    for (std::size_t pos = d.out.find("["); pos != std::string::npos;) {
        pos = d.out.find("],[", pos + 1);
        if (pos != std::string::npos) ++rows;
    }
    CHECK(rows >= 3);
}

TEST_CASE("survey output is byte-identical across thread counts") {
    const RunResult j1 = run({"--seed", "99", "--jobs", "1", "billiard", "survey",
                              "--family", "a", "--param", "3", "--count", "37"});
    const RunResult j4 = run({"--seed", "99", "--jobs", "4", "billiard", "survey",
                              "--family", "a", "--param", "3", "--count", "37"});
    REQUIRE(j1.code == 0);
    REQUIRE(j4.code == 0);
    CHECK(j1.out == j4.out);
    CHECK(manifest_field(j1.err, "digest") == manifest_field(j4.err, "digest"));

    CHECK(j1.out.rfind("seed,lambda,j,k,ok\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : j1.out)
        if (c == '\n') ++lines;
    CHECK(lines == 38);  // header + one row per circle
}

TEST_CASE("survey rows use split seeds and certify") {
    const RunResult r = run({"--seed", "42", "billiard", "survey", "--family", "b",
                             "--param", "3", "--count", "3"});
    REQUIRE(r.code == 0);
    // First derived seed is splitmix64(42).
    CHECK(r.out.find("\n13679457532755275413,") != std::string::npos);
    // Every B3 circle certifies.
    CHECK(r.out.find(",0\n") == std::string::npos);

    const RunResult json = run({"--seed", "42", "--output", "json", "billiard", "survey",
                                "--family", "b", "--param", "3", "--count", "3"});
    REQUIRE(json.code == 0);
    CHECK(json.out.rfind("[{\"j\":", 0) == 0);
    CHECK(json.out.find("\"seed\":13679457532755275413") != std::string::npos);
    CHECK(json.out.find("\"ok\":true") != std::string::npos);
}

TEST_CASE("tree shapes build and classify") {
    const RunResult r = run({"hommap", "build", "--shape", "tree:m=3:legs=1,2,3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"kind\":\"tree\"") != std::string::npos);
    CHECK(r.out.find("\"alpha\":1.5") != std::string::npos);
    CHECK(r.out.find("\"verdict\":\"half_integer_order\"") != std::string::npos);
    CHECK(r.out.find("\"legs\":[1,2,3]") != std::string::npos);
    CHECK(r.out.find("\"chart\":\"leg:1\"") != std::string::npos);
    CHECK(r.out.find("\"billiard\"") == std::string::npos);

    const RunResult shifted =
        run({"hommap", "build", "--shape", "tree:m=2:legs=1,2:L=2:theta0=pi/4"});
    REQUIRE(shifted.code == 0);
    CHECK(shifted.out.find("\"alpha\":1\"") == std::string::npos);
    CHECK(first_number_after(shifted.out, "amplitude") == doctest::Approx(2.0));
}

TEST_CASE("loop shapes reduce to billiards when the link allows it") {
    const RunResult r = run({"hommap", "build", "--shape", "loop:link=heawood:cycle=8"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"kind\":\"loop\"") != std::string::npos);
    CHECK(r.out.find("\"verdict\":\"constant_distance\"") != std::string::npos);
    CHECK(r.out.find("\"billiard\":{\"chamber_len\":1.0471975511965976,"
                     "\"fold_j\":1,\"fold_k\":3,\"fold_period\":2.0943951023931953,"
                     "\"loop_j\":4,\"loop_k\":3,\"loop_period\":8.3775804095727811,"
                     "\"p\":3,\"periods_per_loop\":4}") != std::string::npos);
    CHECK(first_number_after(r.out, "alpha") == doctest::Approx(4.0 / 3.0));
    CHECK(r.out.find("\"vertex_count\":14") != std::string::npos);

    // Odd cycles have no bipartite wall labeling, so no billiard block.
    const RunResult odd = run({"hommap", "build", "--shape", "loop:link=cycle:7:pi/3"});
    REQUIRE(odd.code == 0);
    CHECK(odd.out.find("\"billiard\"") == std::string::npos);
    CHECK(odd.out.find("\"verdict\":\"constant_distance\"") != std::string::npos);

    // --link supplies the graph when the shape omits it.
    const RunResult flagged =
        run({"hommap", "build", "--shape", "loop:cycle=auto", "--link", "heawood"});
    REQUIRE(flagged.code == 0);
    CHECK(first_number_after(flagged.out, "alpha") == doctest::Approx(1.0));
}

TEST_CASE("links load from JSON files") {
    const std::string path = "cli_link_test.json";
    {
        std::ofstream file(path);
        file << R"({"vertices": ["a", "b", "c"],)"
             << R"( "edges": [["a", "b", 2.5], ["b", "c", 2.5], ["c", "a", 2.5]]})";
    }
    const RunResult r =
        run({"hommap", "build", "--shape", "loop:link=file:" + path + ":cycle=auto"});
    std::remove(path.c_str());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"vertex_count\":3") != std::string::npos);
    CHECK(first_number_after(r.out, "alpha") == doctest::Approx(7.5 / (2.0 * M_PI)));

    CHECK(run({"hommap", "build", "--shape", "loop:link=file:no-such.json:cycle=auto"})
              .code == 2);
}

TEST_CASE("order estimates recover alpha through the pipe") {
    const RunResult tree =
        run({"hommap", "order", "--shape", "tree:m=3:legs=1,2,3", "--r", "0.5,1"});
    REQUIRE(tree.code == 0);
    CHECK(first_number_after(tree.out, "ord") == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(first_number_after(tree.out, "image_length") == doctest::Approx(6.0));

    const RunResult loop =
        run({"hommap", "order", "--shape", "loop:link=cycle:6:pi/3", "--r", "0.5"});
    REQUIRE(loop.code == 0);
    CHECK(first_number_after(loop.out, "ord") == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(first_number_after(loop.out, "image_length") ==
          doctest::Approx(6.2831853071795862).epsilon(1e-7));
}

TEST_CASE("numeric breakdown surfaces as a runtime failure") {
    const RunResult r = run({"hommap", "order", "--shape",
                             "tree:m=20:legs=1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2",
                             "--r", "1e-15"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error:", 0) == 0);
    CHECK(r.out.empty());
}

TEST_CASE("payloads are byte-stable across repeated runs") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"hommap", "build", "--shape", "loop:link=heawood:cycle=8"},
          std::vector<std::string>{"group", "info", "--family", "d", "--param", "4"},
          std::vector<std::string>{"spectrum", "list", "--group-order", "24", "--max", "3/2"},
          std::vector<std::string>{"--seed", "3", "billiard", "survey", "--family",
                                   "dihedral", "--param", "6", "--count", "11"}}) {
        const RunResult a = run(args);
        const RunResult b = run(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(manifest_field(a.err, "digest") == manifest_field(b.err, "digest"));
    }
}
