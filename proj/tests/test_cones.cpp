#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "deltamod/cones.hpp"

using namespace deltamod;

TEST_CASE("pod distances follow the tree metric") {
    KPod pod(3);
    CHECK(kpod_distance(pod, {1, 3.0}, {1, 1.0}) == doctest::Approx(2.0));
    CHECK(kpod_distance(pod, {1, 3.0}, {2, 1.0}) == doctest::Approx(4.0));
    CHECK(kpod_distance(pod, {1, 0.0}, {2, 0.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)kpod_distance(pod, {0, 1.0}, {1, 1.0}), InvalidLeg);
    CHECK_THROWS_AS((void)kpod_distance(pod, {4, 1.0}, {1, 1.0}), InvalidLeg);
    CHECK_THROWS_AS((void)kpod_distance(pod, {1, -0.5}, {1, 1.0}), InvalidLeg);
    CHECK_THROWS_AS(KPod(1), InvalidLeg);
}

TEST_CASE("pod metric axioms on random triples") {
    KPod pod(5);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> leg(1, 5);
    std::uniform_real_distribution<double> rad(0.0, 3.0);
    for (int i = 0; i < 10000; ++i) {
        PodPoint a{leg(rng), rad(rng)}, b{leg(rng), rad(rng)}, c{leg(rng), rad(rng)};
        const double ab = kpod_distance(pod, a, b);
        const double ba = kpod_distance(pod, b, a);
        const double ac = kpod_distance(pod, a, c);
        const double cb = kpod_distance(pod, c, b);
        CHECK(ab == ba);
        CHECK(ab <= ac + cb + 1e-9);
        CHECK(kpod_distance(pod, a, a) < 1e-12);
    }
}

TEST_CASE("graph constructors have the expected shape") {
    auto ring = MetricGraph::cycle(6, M_PI / 3);
    CHECK(ring.vertex_count() == 6);
    CHECK(ring.edge_count() == 6);
    CHECK(ring.vertex_distance(0, 3) == doctest::Approx(M_PI));
    CHECK(ring.vertex_distance(0, 5) == doctest::Approx(M_PI / 3));

    auto tri = MetricGraph::star(3, 1.0);
    CHECK(tri.vertex_count() == 4);
    CHECK(tri.vertex_distance(0, 1) == doctest::Approx(1.0));
    CHECK(tri.vertex_distance(1, 2) == doctest::Approx(2.0));

    auto hw = MetricGraph::heawood(M_PI / 3);
    CHECK(hw.vertex_count() == 14);
    CHECK(hw.edge_count() == 21);
    // Every point sits on 3 lines and every line carries 3 points.
    for (int v = 0; v < 14; ++v) {
        int degree = 0;
        for (const auto& e : hw.edges()) degree += (e.a == v) + (e.b == v);
        CHECK(degree == 3);
    }
}

TEST_CASE("link distances are exact shortest paths") {
    auto ring = MetricGraph::cycle(6, 1.0);
    CHECK(link_distance(ring, {0, 0.2}, {0, 0.7}) == doctest::Approx(0.5));
    // Wrapping the other way around the ring.
    CHECK(link_distance(ring, {0, 0.1}, {5, 0.9}) == doctest::Approx(0.2));
    auto hw = MetricGraph::heawood(M_PI / 3);
    const int p0 = hw.vertex_id("p0");
    const int l0 = hw.vertex_id("l0");
    const int p2 = hw.vertex_id("p2");
    CHECK(hw.vertex_distance(p0, l0) == doctest::Approx(M_PI / 3));
    CHECK(hw.vertex_distance(p0, p2) == doctest::Approx(2 * M_PI / 3));
    CHECK(hw.distance(hw.vertex_point(p0), hw.vertex_point(l0)) == doctest::Approx(M_PI / 3));
}

TEST_CASE("graph metric axioms on random point triples") {
    auto hw = MetricGraph::heawood(M_PI / 3);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> edge(0, hw.edge_count() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sample = [&] {
        const int e = edge(rng);
        return GraphPoint{e, unit(rng) * hw.edge(e).length};
    };
    for (int i = 0; i < 10000; ++i) {
        const auto a = sample(), b = sample(), c = sample();
        const double ab = hw.distance(a, b);
        CHECK(ab == hw.distance(b, a));
        CHECK(hw.distance(a, a) < 1e-12);
        CHECK(ab <= hw.distance(a, c) + hw.distance(c, b) + 1e-9);
    }
}

TEST_CASE("heawood girth cycle and an 8-cycle") {
    auto hw = MetricGraph::heawood(M_PI / 3);
    auto girth = hw.shortest_cycle();
    CHECK(girth.size() == 6);
    CHECK(hw.cycle_length(girth) == doctest::Approx(2 * M_PI));
    auto oct = hw.find_cycle(8);
    CHECK(oct.size() == 8);
    CHECK(hw.cycle_length(oct) == doctest::Approx(8 * M_PI / 3));
    CHECK_THROWS_AS((void)hw.find_cycle(5), NoSuchCycle);
    CHECK_THROWS_AS((void)hw.find_cycle(7), NoSuchCycle);

    auto classes = hw.bipartite_classes();
    for (const auto& e : hw.edges()) CHECK(classes[e.a] != classes[e.b]);
    CHECK_THROWS_AS((void)MetricGraph::cycle(5, 1.0).bipartite_classes(),
                    NonBipartiteLabeling);
}

TEST_CASE("disconnected graphs are rejected") {
    std::vector<std::string> names{"a", "b", "c", "d"};
    std::vector<GraphEdge> edges{{0, 1, 1.0}, {2, 3, 1.0}};
    CHECK_THROWS_AS(MetricGraph(names, edges), DisconnectedGraph);
    CHECK_THROWS_AS(MetricGraph({"a", "b"}, {{0, 1, -1.0}}), BadGraphPoint);
}

TEST_CASE("graphs load from JSON descriptions") {
    const std::string text = R"({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 2.0], ["c", "a", 2.5]]
    })";
    auto g = MetricGraph::from_json(text);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.vertex_distance(g.vertex_id("a"), g.vertex_id("c")) == doctest::Approx(2.5));
    CHECK_THROWS_AS((void)MetricGraph::from_json(R"({"vertices": ["a"], "edges": [["a","x",1]]})"),
                    BadGraphPoint);
}

TEST_CASE("cone distances use the law of cosines with an angular cap") {
    ConeOverGraph cone(MetricGraph::cycle(6, M_PI / 3));
    const GraphPoint base{0, 0.1};
    CHECK(cone_distance(cone, {2.0, base}, {5.0, base}) == doctest::Approx(3.0));
    // Antipodal directions: geodesic passes through the cone point.
    const GraphPoint far{3, 0.1};
    CHECK(cone.link().distance(base, far) >= M_PI);
    CHECK(cone_distance(cone, {1.5, base}, {2.0, far}) == doctest::Approx(3.5));
    // Right angle.
    const GraphPoint quarter{1, M_PI / 6 + 0.1};
    CHECK(cone.link().distance(base, quarter) == doctest::Approx(M_PI / 2));
    CHECK(cone_distance(cone, {1.0, base}, {1.0, quarter}) == doctest::Approx(std::sqrt(2.0)));
    // The cone point itself.
    CHECK(cone_distance(cone, {0.0, base}, {2.0, far}) == doctest::Approx(2.0));
}

TEST_CASE("cone metric axioms on random triples") {
    ConeOverGraph cone(MetricGraph::heawood(M_PI / 3));
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> edge(0, cone.link().edge_count() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sample = [&] {
        const int e = edge(rng);
        return ConePoint{2.0 * unit(rng), {e, unit(rng) * cone.link().edge(e).length}};
    };
    for (int i = 0; i < 10000; ++i) {
        const auto a = sample(), b = sample(), c = sample();
        const double ab = cone_distance(cone, a, b);
        CHECK(ab == cone_distance(cone, b, a));
        CHECK(cone_distance(cone, a, a) < 1e-12);
        CHECK(ab <= cone_distance(cone, a, c) + cone_distance(cone, c, b) + 1e-9);
    }
}

TEST_CASE("flat sectors agree with planar polar coordinates") {
    ConeOverGraph cone(MetricGraph::heawood(M_PI / 3));
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double o1 = unit(rng) * M_PI / 3, o2 = unit(rng) * M_PI / 3;
        const double r1 = 0.25 + 2 * unit(rng), r2 = 0.25 + 2 * unit(rng);
        const double got = cone_distance(cone, {r1, {0, o1}}, {r2, {0, o2}});
        const double planar = std::sqrt(r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(o1 - o2));
        CHECK(got == doctest::Approx(planar).epsilon(1e-12));
    }
}

TEST_CASE("curve length sums distances and refines monotonically") {
    KPod pod(3);
    CHECK(curve_length(pod, {{1, 1.0}, {1, 1.0}}) == doctest::Approx(0.0));
    CHECK(curve_length(pod, {{1, 0.0}, {1, 1.0}}) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)curve_length(pod, {{1, 1.0}}), TooFewSamples);

    ConeOverGraph cone(MetricGraph::cycle(6, M_PI / 3));
    const double L = 1.7;
    auto arc_samples = [&](int n) {
        std::vector<ConePoint> pts;
        for (int i = 0; i <= n; ++i) {
            const double s = (M_PI / 2) * i / n;  // sweep a quarter turn
            const int e = static_cast<int>(s / (M_PI / 3));
            pts.push_back({L, {std::min(e, 5), s - std::min(e, 5) * (M_PI / 3)}});
        }
        return pts;
    };
    const double coarse = curve_length(cone, arc_samples(64));
    const double fine = curve_length(cone, arc_samples(4096));
    CHECK(fine >= coarse - 1e-12);
    CHECK(fine == doctest::Approx(L * M_PI / 2).epsilon(1e-6));
}

TEST_CASE("length expressions parse") {
    CHECK(parse_length_expr("pi") == doctest::Approx(M_PI));
    CHECK(parse_length_expr("pi/3") == doctest::Approx(M_PI / 3));
    CHECK(parse_length_expr("2pi/3") == doctest::Approx(2 * M_PI / 3));
    CHECK(parse_length_expr("0.75") == doctest::Approx(0.75));
    CHECK(parse_length_expr("3/4") == doctest::Approx(0.75));
    CHECK_THROWS((void)parse_length_expr("pie"));
    CHECK_THROWS((void)parse_length_expr(""));
}
