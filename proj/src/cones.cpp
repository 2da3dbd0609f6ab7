#include "deltamod/cones.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <json.hpp>

namespace deltamod {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

KPod::KPod(int legs) : legs_(legs) {
    if (legs < 2) throw InvalidLeg("a pod needs at least two legs");
}

void KPod::validate(const PodPoint& p) const {
    if (p.leg < 1 || p.leg > legs_) throw InvalidLeg("leg id out of range");
    if (p.radius < 0.0 || !std::isfinite(p.radius))
        throw InvalidLeg("leg radius must be finite and nonnegative");
}

double kpod_distance(const KPod& pod, const PodPoint& a, const PodPoint& b) {
    pod.validate(a);
    pod.validate(b);
    if (a.leg == b.leg) return std::abs(a.radius - b.radius);
    return a.radius + b.radius;
}

MetricGraph::MetricGraph(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
    const int n = vertex_count();
    if (n == 0) throw DisconnectedGraph("graph needs at least one vertex");
    for (const auto& e : edges_) {
        if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
            throw BadGraphPoint("edge endpoint out of range");
        if (!(e.length > 0.0) || !std::isfinite(e.length))
            throw BadGraphPoint("edge length must be positive");
    }

    dist_.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), kInf));
    for (int i = 0; i < n; ++i) dist_[i][i] = 0.0;
    for (const auto& e : edges_) {
        dist_[e.a][e.b] = std::min(dist_[e.a][e.b], e.length);
        dist_[e.b][e.a] = std::min(dist_[e.b][e.a], e.length);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dist_[i][j] = std::min(dist_[i][j], dist_[i][k] + dist_[k][j]);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (dist_[i][j] == kInf) throw DisconnectedGraph("graph is not connected");
}

MetricGraph MetricGraph::cycle(int n, double edge_len) {
    if (n < 2) throw BadGraphPoint("cycle needs at least two vertices");
    std::vector<std::string> names;
    std::vector<GraphEdge> edges;
    for (int i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
        edges.push_back(GraphEdge{i, (i + 1) % n, edge_len});
    }
    return MetricGraph(std::move(names), std::move(edges));
}

MetricGraph MetricGraph::star(int k, double edge_len) {
    if (k < 1) throw BadGraphPoint("star needs at least one ray");
    std::vector<std::string> names{"c"};
    std::vector<GraphEdge> edges;
    for (int i = 0; i < k; ++i) {
        names.push_back("v" + std::to_string(i));
        edges.push_back(GraphEdge{0, i + 1, edge_len});
    }
    return MetricGraph(std::move(names), std::move(edges));
}

MetricGraph MetricGraph::heawood(double edge_len) {
    // Point-line incidence graph of the 7-point projective plane with lines
    // {i, i+1, i+3} mod 7.
    std::vector<std::string> names;
    for (int i = 0; i < 7; ++i) names.push_back("p" + std::to_string(i));
    for (int i = 0; i < 7; ++i) names.push_back("l" + std::to_string(i));
    std::vector<GraphEdge> edges;
    for (int i = 0; i < 7; ++i) {
        for (int d : {0, 1, 3}) {
            edges.push_back(GraphEdge{(i + d) % 7, 7 + i, edge_len});
        }
    }
    return MetricGraph(std::move(names), std::move(edges));
}

MetricGraph MetricGraph::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    std::vector<std::string> names = doc.at("vertices").get<std::vector<std::string>>();
    std::vector<GraphEdge> edges;
    std::vector<std::string> index = names;
    auto id_of = [&](const nlohmann::json& v) {
        const std::string name = v.get<std::string>();
        const auto it = std::find(index.begin(), index.end(), name);
        if (it == index.end()) throw BadGraphPoint("unknown vertex name: " + name);
        return static_cast<int>(it - index.begin());
    };
    for (const auto& row : doc.at("edges")) {
        if (!row.is_array() || row.size() != 3)
            throw BadGraphPoint("edge rows must be [a, b, length]");
        edges.push_back(GraphEdge{id_of(row[0]), id_of(row[1]), row[2].get<double>()});
    }
    return MetricGraph(std::move(names), std::move(edges));
}

const GraphEdge& MetricGraph::edge(int e) const {
    if (e < 0 || e >= edge_count()) throw BadGraphPoint("edge id out of range");
    return edges_[static_cast<std::size_t>(e)];
}

int MetricGraph::vertex_id(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw BadGraphPoint("unknown vertex name: " + name);
    return static_cast<int>(it - names_.begin());
}

double MetricGraph::vertex_distance(int a, int b) const {
    if (a < 0 || a >= vertex_count() || b < 0 || b >= vertex_count())
        throw BadGraphPoint("vertex id out of range");
    return dist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

void MetricGraph::validate_point(const GraphPoint& x) const {
    const GraphEdge& e = edge(x.edge);
    if (x.offset < -1e-12 || x.offset > e.length + 1e-12)
        throw BadGraphPoint("offset outside the edge");
}

GraphPoint MetricGraph::vertex_point(int v) const {
    for (int e = 0; e < edge_count(); ++e) {
        if (edges_[e].a == v) return GraphPoint{e, 0.0};
        if (edges_[e].b == v) return GraphPoint{e, edges_[e].length};
    }
    throw BadGraphPoint("isolated vertex has no edge representation");
}

double MetricGraph::distance(const GraphPoint& x, const GraphPoint& y) const {
    validate_point(x);
    validate_point(y);
    const GraphEdge& ex = edges_[static_cast<std::size_t>(x.edge)];
    const GraphEdge& ey = edges_[static_cast<std::size_t>(y.edge)];
    double best = x.edge == y.edge ? std::abs(x.offset - y.offset) : kInf;
    const double to_x[2] = {x.offset, ex.length - x.offset};
    const int vx[2] = {ex.a, ex.b};
    const double to_y[2] = {y.offset, ey.length - y.offset};
    const int vy[2] = {ey.a, ey.b};
    // Summation order is symmetric in (x, y) so distances commute bitwise.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            best = std::min(best, (to_x[i] + to_y[j]) + dist_[vx[i]][vy[j]]);
    return best;
}

double link_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b) {
    return g.distance(a, b);
}

double MetricGraph::cycle_length(const std::vector<int>& cycle) const {
    if (cycle.size() < 2) throw NoSuchCycle("cycle needs at least two vertices");
    double total = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int a = cycle[i];
        const int b = cycle[(i + 1) % cycle.size()];
        const int e = edge_between(a, b);
        if (e < 0) throw NoSuchCycle("consecutive cycle vertices are not adjacent");
        total += edges_[static_cast<std::size_t>(e)].length;
    }
    return total;
}

int MetricGraph::edge_between(int a, int b) const {
    int best = -1;
    for (int e = 0; e < edge_count(); ++e) {
        if ((edges_[e].a == a && edges_[e].b == b) || (edges_[e].a == b && edges_[e].b == a)) {
            if (best < 0 || edges_[e].length < edges_[best].length) best = e;
        }
    }
    return best;
}

std::vector<int> MetricGraph::shortest_cycle() const {
    // For each edge, the shortest route between its endpoints avoiding the
    // edge itself closes the tightest cycle through it.
    double best_len = kInf;
    std::vector<int> best;
    const int n = vertex_count();
    for (int skip = 0; skip < edge_count(); ++skip) {
        std::vector<double> d(static_cast<std::size_t>(n), kInf);
        std::vector<int> prev(static_cast<std::size_t>(n), -1);
        const int src = edges_[skip].a;
        const int dst = edges_[skip].b;
        d[src] = 0.0;
        std::vector<char> done(static_cast<std::size_t>(n), 0);
        for (;;) {
            int u = -1;
            for (int i = 0; i < n; ++i)
                if (!done[i] && d[i] < kInf && (u < 0 || d[i] < d[u])) u = i;
            if (u < 0) break;
            done[u] = 1;
            for (int e = 0; e < edge_count(); ++e) {
                if (e == skip) continue;
                const auto& ed = edges_[e];
                if (ed.a != u && ed.b != u) continue;
                const int w = ed.a == u ? ed.b : ed.a;
                if (d[u] + ed.length < d[w]) {
                    d[w] = d[u] + ed.length;
                    prev[w] = u;
                }
            }
        }
        if (d[dst] == kInf) continue;
        const double len = d[dst] + edges_[skip].length;
        if (len < best_len - 1e-12) {
            best_len = len;
            best.clear();
            for (int v = dst; v >= 0; v = prev[v]) best.push_back(v);
            std::reverse(best.begin(), best.end());
        }
    }
    if (best.empty()) throw NoSuchCycle("graph is acyclic");
    return best;
}

std::vector<int> MetricGraph::find_cycle(int edge_count_wanted) const {
    if (edge_count_wanted < 2) throw NoSuchCycle("cycle must use at least two edges");
    const int n = vertex_count();
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<int> path;

    auto dfs = [&](auto&& self, int v, int start, int remaining) -> bool {
        if (remaining == 0) return false;
        for (int e = 0; e < edge_count(); ++e) {
            const auto& ed = edges_[e];
            if (ed.a != v && ed.b != v) continue;
            const int w = ed.a == v ? ed.b : ed.a;
            if (w == start && remaining == 1 && path.size() >= 3) return true;
            if (used[w] || remaining <= 1) continue;
            used[w] = 1;
            path.push_back(w);
            if (self(self, w, start, remaining - 1)) return true;
            path.pop_back();
            used[w] = 0;
        }
        return false;
    };

    for (int start = 0; start < n; ++start) {
        std::fill(used.begin(), used.end(), 0);
        used[start] = 1;
        path.assign(1, start);
        if (dfs(dfs, start, start, edge_count_wanted)) return path;
    }
    throw NoSuchCycle("no simple cycle with the requested edge count");
}

std::vector<int> MetricGraph::bipartite_classes() const {
    const int n = vertex_count();
    std::vector<int> cls(static_cast<std::size_t>(n), -1);
    std::deque<int> queue;
    cls[0] = 0;
    queue.push_back(0);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const auto& e : edges_) {
            if (e.a != u && e.b != u) continue;
            const int w = e.a == u ? e.b : e.a;
            if (cls[w] < 0) {
                cls[w] = 1 - cls[u];
                queue.push_back(w);
            } else if (cls[w] == cls[u]) {
                throw NonBipartiteLabeling("graph contains an odd cycle");
            }
        }
    }
    return cls;
}

bool MetricGraph::all_edges_have_length(double len, double tol) const {
    for (const auto& e : edges_)
        if (std::abs(e.length - len) > tol) return false;
    return true;
}

double cone_distance(const ConeOverGraph& cone, const ConePoint& a, const ConePoint& b) {
    if (a.r < 0.0 || b.r < 0.0) throw BadGraphPoint("cone radius must be nonnegative");
    if (a.r == 0.0 || b.r == 0.0) return a.r + b.r;
    const double angle = std::min(cone.link().distance(a.x, b.x), M_PI);
    // Law of cosines, rearranged so nearby points do not cancel.
    const double dr = a.r - b.r;
    const double s = std::sin(0.5 * angle);
    const double d2 = dr * dr + 4.0 * a.r * b.r * s * s;
    return std::sqrt(std::max(d2, 0.0));
}

double curve_length(const KPod& pod, const std::vector<PodPoint>& samples) {
    if (samples.size() < 2) throw TooFewSamples("curve length needs at least two samples");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        total += kpod_distance(pod, samples[i], samples[i + 1]);
    return total;
}

double curve_length(const ConeOverGraph& cone, const std::vector<ConePoint>& samples) {
    if (samples.size() < 2) throw TooFewSamples("curve length needs at least two samples");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        total += cone_distance(cone, samples[i], samples[i + 1]);
    return total;
}

double parse_length_expr(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty length expression");
    double num = 1.0;
    double den = 1.0;
    std::size_t pos = 0;
    const std::size_t pi_at = s.find("pi");
    if (pi_at != std::string::npos) {
        if (pi_at > 0) {
            std::size_t used = 0;
            num = std::stod(s.substr(0, pi_at), &used);
            if (used != pi_at) throw std::invalid_argument("bad length expression: " + text);
        }
        num *= M_PI;
        pos = pi_at + 2;
    } else {
        num = std::stod(s, &pos);
    }
    if (pos < s.size()) {
        if (s[pos] != '/') throw std::invalid_argument("bad length expression: " + text);
        den = std::stod(s.substr(pos + 1));
    }
    if (den == 0.0) throw std::invalid_argument("zero denominator in length expression");
    return num / den;
}

}  // namespace deltamod
