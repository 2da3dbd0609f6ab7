#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace deltamod {

struct InvalidLeg : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DisconnectedGraph : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BadGraphPoint : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TooFewSamples : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonBipartiteLabeling : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoSuchCycle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// k half-lines glued at a common vertex; points are (leg, radius) with every
// (leg, 0) identified.
struct PodPoint {
    int leg;
    double radius;
};

class KPod {
public:
    explicit KPod(int legs);
    int legs() const { return legs_; }
    void validate(const PodPoint& p) const;

private:
    int legs_;
};

double kpod_distance(const KPod& pod, const PodPoint& a, const PodPoint& b);

struct GraphEdge {
    int a;
    int b;
    double length;
};

// Point on an edge, measured from endpoint `a` of that edge.
struct GraphPoint {
    int edge;
    double offset;
};

class MetricGraph {
public:
    MetricGraph(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges);

    static MetricGraph cycle(int n, double edge_len);
    static MetricGraph star(int k, double edge_len);
    static MetricGraph heawood(double edge_len);
    static MetricGraph from_json(const std::string& text);

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const GraphEdge& edge(int e) const;
    const std::string& vertex_name(int v) const { return names_[static_cast<std::size_t>(v)]; }
    int vertex_id(const std::string& name) const;

    double vertex_distance(int a, int b) const;
    double distance(const GraphPoint& x, const GraphPoint& y) const;
    GraphPoint vertex_point(int v) const;

    // Closed simple cycles as vertex sequences (first vertex not repeated).
    std::vector<int> shortest_cycle() const;
    std::vector<int> find_cycle(int edge_count) const;
    double cycle_length(const std::vector<int>& cycle) const;

    std::vector<int> bipartite_classes() const;
    bool all_edges_have_length(double len, double tol = 1e-12) const;

    // First edge joining a and b (shortest when parallel edges exist).
    int edge_between(int a, int b) const;

private:
    void validate_point(const GraphPoint& x) const;

    std::vector<std::string> names_;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<double>> dist_;
};

double link_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b);

struct ConePoint {
    double r;
    GraphPoint x;
};

// Euclidean cone over a metric graph: the cone point is every (0, *).
class ConeOverGraph {
public:
    explicit ConeOverGraph(MetricGraph link) : link_(std::move(link)) {}
    const MetricGraph& link() const { return link_; }

private:
    MetricGraph link_;
};

double cone_distance(const ConeOverGraph& cone, const ConePoint& a, const ConePoint& b);

double curve_length(const KPod& pod, const std::vector<PodPoint>& samples);
double curve_length(const ConeOverGraph& cone, const std::vector<ConePoint>& samples);

// Accepts "pi", "pi/3", "2pi/3", "0.75", "3/4".
double parse_length_expr(const std::string& text);

}  // namespace deltamod
