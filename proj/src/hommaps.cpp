#include "deltamod/hommaps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "deltamod/billiards.hpp"

namespace deltamod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double theta, double base) {
    double tau = std::fmod(theta - base, kTwoPi);
    if (tau < 0.0) tau += kTwoPi;
    if (tau >= kTwoPi) tau = 0.0;
    return tau;
}

// Appends the 32-point Gauss-Legendre rule mapped onto [a, b].
void gauss32(double a, double b, std::vector<double>& xs, std::vector<double>& ws) {
    using rule = boost::math::quadrature::gauss<double, 32>;
    const auto& half_x = rule::abscissa();
    const auto& half_w = rule::weights();
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    for (std::size_t i = 0; i < half_x.size(); ++i) {
        xs.push_back(mid + rad * half_x[i]);
        ws.push_back(rad * half_w[i]);
        xs.push_back(mid - rad * half_x[i]);
        ws.push_back(rad * half_w[i]);
    }
}

double target_distance(const HomogeneousMap& map, double r, double ta, double tb) {
    if (map.kind() == HomogeneousMap::Kind::Tree)
        return kpod_distance(map.pod(), map.tree_value(r, ta), map.tree_value(r, tb));
    return cone_distance(map.cone(), map.loop_value(r, ta), map.loop_value(r, tb));
}

double chord_sum(const HomogeneousMap& map, long n) {
    double total = 0.0;
    double prev = 0.0;
    for (long j = 1; j <= n; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        total += target_distance(map, 1.0, prev, t);
        prev = t;
    }
    return total;
}

}  // namespace

HomogeneousMap::HomogeneousMap(KPod pod, int m, std::vector<int> legs, double L, double theta0)
    : kind_(Kind::Tree),
      alpha_(0.5 * m),
      amplitude_(L),
      theta0_(theta0),
      legs_(std::move(legs)) {
    pod_.push_back(pod);
    breakpoints_.resize(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        breakpoints_[static_cast<std::size_t>(i)] = theta0 + kTwoPi * i / m;
}

HomogeneousMap::HomogeneousMap(ConeOverGraph cone, std::vector<PathStep> path, int multiplicity,
                               double L)
    : kind_(Kind::Loop), amplitude_(L), path_(std::move(path)), multiplicity_(multiplicity) {
    cone_.push_back(std::move(cone));
    const MetricGraph& g = cone_.front().link();
    cumulative_.push_back(0.0);
    for (const PathStep& st : path_) {
        const GraphEdge& e = g.edge(st.edge);
        step_start_.push_back(st.forward ? e.a : e.b);
        cumulative_.push_back(cumulative_.back() + e.length);
    }
    path_length_ = cumulative_.back();
    alpha_ = multiplicity_ * path_length_ / kTwoPi;
    const std::size_t arcs = path_.size() * static_cast<std::size_t>(multiplicity_);
    breakpoints_.resize(arcs + 1);
    for (std::size_t a = 0; a < arcs; ++a) {
        const std::size_t w = a / path_.size();
        const std::size_t k = a % path_.size();
        breakpoints_[a] = (static_cast<double>(w) * path_length_ + cumulative_[k]) / alpha_;
    }
    breakpoints_[arcs] = kTwoPi;
}

HomogeneousMap build_tree_map(int m, const KPod& pod, const std::vector<int>& legs, double L,
                              double theta0) {
    if (m < 2) throw BadM("need at least two arcs");
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("amplitude must be positive");
    if (!std::isfinite(theta0)) throw std::invalid_argument("first breakpoint must be finite");
    if (legs.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("need one leg per arc");
    for (int leg : legs) pod.validate({leg, 1.0});
    for (int i = 0; i < m; ++i) {
        if (legs[static_cast<std::size_t>(i)] == legs[static_cast<std::size_t>((i + 1) % m)])
            throw AdjacentLegClash("consecutive arcs must enter distinct legs");
    }
    return HomogeneousMap(pod, m, legs, L, theta0);
}

HomogeneousMap build_loop_map(const ConeOverGraph& cone, const std::vector<PathStep>& path,
                              int multiplicity, double L) {
    if (multiplicity < 1) throw std::invalid_argument("multiplicity must be positive");
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("amplitude must be positive");
    if (path.empty()) throw std::invalid_argument("path is empty");
    const MetricGraph& g = cone.link();
    double total = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const PathStep& st = path[k];
        if (st.edge < 0 || st.edge >= g.edge_count())
            throw std::invalid_argument("path step uses an unknown edge");
        const GraphEdge& e = g.edge(st.edge);
        const PathStep& nx = path[(k + 1) % path.size()];
        const GraphEdge& en = g.edge(nx.edge);
        const int end = st.forward ? e.b : e.a;
        const int nstart = nx.forward ? en.a : en.b;
        if (end != nstart) throw std::invalid_argument("path is not a closed edge chain");
        if (st.edge == nx.edge && st.forward != nx.forward)
            throw Backtracking("path doubles back along an edge");
        total += e.length;
    }
    if (total < kTwoPi - 1e-9)
        throw TooShortLoop("closed path must have length at least 2*pi");
    return HomogeneousMap(cone, path, multiplicity, L);
}

std::vector<PathStep> steps_from_vertex_cycle(const MetricGraph& g,
                                              const std::vector<int>& cycle) {
    if (cycle.size() < 2) throw std::invalid_argument("cycle needs at least two vertices");
    std::vector<PathStep> steps;
    steps.reserve(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int a = cycle[i];
        const int b = cycle[(i + 1) % cycle.size()];
        const int e = g.edge_between(a, b);
        steps.push_back({e, g.edge(e).a == a});
    }
    return steps;
}

int HomogeneousMap::arc_of(double theta) const {
    const double shifted = breakpoints_.front() + reduce_angle(theta, breakpoints_.front());
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), shifted);
    const int idx = static_cast<int>(it - breakpoints_.begin()) - 1;
    return std::clamp(idx, 0, arc_count() - 1);
}

PodPoint HomogeneousMap::tree_value(double r, double theta) const {
    if (kind_ != Kind::Tree) throw std::logic_error("tree_value on a loop map");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("radius must be finite and nonnegative");
    const int arc = arc_of(theta);
    const double local =
        breakpoints_.front() + reduce_angle(theta, breakpoints_.front()) - breakpoint(arc);
    const double radius = std::pow(r, alpha_) * amplitude_ * std::sin(alpha_ * local);
    return {legs_[static_cast<std::size_t>(arc)], std::max(radius, 0.0)};
}

ConePoint HomogeneousMap::loop_value(double r, double theta) const {
    if (kind_ != Kind::Loop) throw NotLoopMap("loop_value on a tree map");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("radius must be finite and nonnegative");
    return {std::pow(r, alpha_) * amplitude_, link_position(theta)};
}

double HomogeneousMap::dist_to_origin(double r, double theta) const {
    if (kind_ == Kind::Tree) return kpod_distance(pod(), tree_value(r, theta), {1, 0.0});
    return cone_distance(cone(), loop_value(r, theta), {0.0, {0, 0.0}});
}

GraphPoint HomogeneousMap::link_position(double theta) const {
    if (kind_ != Kind::Loop) throw NotLoopMap("link_position on a tree map");
    double s = std::fmod(alpha_ * theta, path_length_);
    if (s < 0.0) s += path_length_;
    if (s >= path_length_) s = 0.0;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t k = static_cast<std::size_t>(
        std::clamp<long>(it - cumulative_.begin() - 1, 0, static_cast<long>(path_.size()) - 1));
    const PathStep& st = path_[k];
    const GraphEdge& e = cone().link().edge(st.edge);
    const double within = s - cumulative_[k];
    const double off = st.forward ? within : e.length - within;
    return {st.edge, std::clamp(off, 0.0, e.length)};
}

Eigen::Vector2d HomogeneousMap::chart_value(int arc, double theta) const {
    if (arc < 0 || arc >= arc_count()) throw std::invalid_argument("arc index out of range");
    if (kind_ == Kind::Tree) {
        const double phase = alpha_ * (theta - breakpoint(arc));
        return {amplitude_ * std::sin(phase), 0.0};
    }
    const std::size_t w = static_cast<std::size_t>(arc) / path_.size();
    const std::size_t k = static_cast<std::size_t>(arc) % path_.size();
    const double phase =
        alpha_ * theta - (static_cast<double>(w) * path_length_ + cumulative_[k]);
    return {amplitude_ * std::cos(phase), amplitude_ * std::sin(phase)};
}

std::string HomogeneousMap::chart_id(int arc) const {
    if (arc < 0 || arc >= arc_count()) throw std::invalid_argument("arc index out of range");
    if (kind_ == Kind::Tree)
        return "leg:" + std::to_string(legs_[static_cast<std::size_t>(arc)]);
    const PathStep& st = path_[static_cast<std::size_t>(arc) % path_.size()];
    return "edge:" + std::to_string(st.edge) + (st.forward ? ":fwd" : ":rev");
}

const KPod& HomogeneousMap::pod() const {
    if (kind_ != Kind::Tree) throw std::logic_error("pod() on a loop map");
    return pod_.front();
}

const ConeOverGraph& HomogeneousMap::cone() const {
    if (kind_ != Kind::Loop) throw NotLoopMap("cone() on a tree map");
    return cone_.front();
}

std::vector<ArcRepresentation> arc_representations(const HomogeneousMap& map) {
    std::vector<ArcRepresentation> out;
    const double a = map.alpha();
    for (int i = 0; i < map.arc_count(); ++i) {
        const double lo = map.breakpoint(i);
        const double hi = map.breakpoint(i + 1);
        const double ta = lo + 0.3 * (hi - lo);
        const double tb = lo + 0.7 * (hi - lo);
        Eigen::Matrix2d lhs;
        lhs << std::cos(a * ta), std::sin(a * ta), std::cos(a * tb), std::sin(a * tb);
        Eigen::Matrix2d rhs;
        rhs.row(0) = map.chart_value(i, ta).transpose();
        rhs.row(1) = map.chart_value(i, tb).transpose();
        const Eigen::Matrix2d sol = lhs.partialPivLu().solve(rhs);

        ArcRepresentation rep;
        rep.theta_lo = lo;
        rep.theta_hi = hi;
        rep.v1 = sol.row(0).transpose();
        rep.v2 = sol.row(1).transpose();
        rep.chart = map.chart_id(i);
        for (int s = 0; s <= 32; ++s) {
            const double t = lo + (hi - lo) * s / 32.0;
            const Eigen::Vector2d pred = rep.v1 * std::cos(a * t) + rep.v2 * std::sin(a * t);
            if ((pred - map.chart_value(i, t)).lpNorm<Eigen::Infinity>() > 1e-10)
                throw InconsistentInvariants("arc is not a pure frequency-alpha oscillation");
        }
        out.push_back(std::move(rep));
    }
    return out;
}

DichotomyResult classify_arcs(std::vector<ArcRepresentation> arcs, double alpha) {
    if (arcs.empty()) throw std::invalid_argument("no arcs to classify");
    const double tol = 1e-9;
    const double gap0 = arcs.front().v2.squaredNorm() - arcs.front().v1.squaredNorm();
    const double dot0 = arcs.front().v1.dot(arcs.front().v2);
    for (const ArcRepresentation& rep : arcs) {
        const double gap = rep.v2.squaredNorm() - rep.v1.squaredNorm();
        const double dot = rep.v1.dot(rep.v2);
        if (std::abs(gap - gap0) > tol || std::abs(dot - dot0) > tol)
            throw InconsistentInvariants("arc invariants disagree across charts");
    }
    DichotomyResult res;
    res.norm_gap = gap0;
    res.dot = dot0;
    res.arcs = std::move(arcs);
    if (std::abs(gap0) <= tol && std::abs(dot0) <= tol) {
        res.verdict = DichotomyVerdict::ConstantDistance;
        return res;
    }
    const double doubled = 2.0 * alpha;
    const double nearest = std::round(doubled);
    if (nearest < 2.0 || std::abs(doubled - nearest) > tol)
        throw InconsistentInvariants(
            "oscillating distance forces twice the order to be an integer >= 2");
    res.verdict = DichotomyVerdict::HalfIntegerOrder;
    return res;
}

DichotomyResult dichotomy_classify(const HomogeneousMap& map) {
    return classify_arcs(arc_representations(map), map.alpha());
}

double q_prime_formula(double norm_gap, double dot, double alpha, double theta) {
    return alpha * norm_gap * std::sin(2.0 * alpha * theta) +
           2.0 * alpha * dot * std::cos(2.0 * alpha * theta);
}

std::vector<std::pair<double, double>> q_profile(const HomogeneousMap& map, int n_samples) {
    if (n_samples < 8) throw TooFewSamples("need at least 8 profile samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double t = kTwoPi * j / n_samples;
        const double d = map.dist_to_origin(1.0, t);
        out.emplace_back(t, d * d);
    }
    return out;
}

OrderEstimate order_estimate(const HomogeneousMap& map, double r, int panels) {
    if (!(r > 0.0) || r > 1.0 || !std::isfinite(r))
        throw std::invalid_argument("radius must lie in (0, 1]");
    if (panels < 4) throw std::invalid_argument("need at least four panels per arc");
    const double a = map.alpha();
    const double h = 1e-5;

    std::vector<double> xs;
    std::vector<double> ws;
    for (int i = 0; i < map.arc_count(); ++i) {
        const double lo = map.breakpoint(i);
        const double hi = map.breakpoint(i + 1);
        for (int p = 0; p < panels; ++p)
            gauss32(lo + (hi - lo) * p / panels, lo + (hi - lo) * (p + 1) / panels, xs, ws);
    }
    double sum_q = 0.0;
    double sum_g = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d0 = map.dist_to_origin(1.0, xs[i]);
        const double sp = target_distance(map, 1.0, xs[i] - h, xs[i] + h) / (2.0 * h);
        sum_q += ws[i] * d0 * d0;
        sum_g += ws[i] * sp * sp;
    }

    // int_0^r rho^(2a-1) drho, dyadically graded toward the singularity at 0.
    double rfac = 0.0;
    {
        std::vector<double> rx;
        std::vector<double> rw;
        double hi = r;
        for (int j = 0; j < 26; ++j) {
            gauss32(0.5 * hi, hi, rx, rw);
            hi *= 0.5;
        }
        gauss32(0.0, hi, rx, rw);
        for (std::size_t i = 0; i < rx.size(); ++i)
            rfac += rw[i] * std::pow(rx[i], 2.0 * a - 1.0);
    }

    OrderEstimate est;
    est.r = r;
    est.energy = rfac * (a * a * sum_q + sum_g);
    est.i_value = std::pow(r, 2.0 * a + 1.0) * sum_q;
    if (!(est.energy > 1e-290) || !(est.i_value > 1e-290))
        throw QuadratureUnderflow("energy quotient lost to underflow");
    est.ord = r * est.energy / est.i_value;
    return est;
}

double image_length(const HomogeneousMap& map, int n_samples) {
    if (n_samples < 64) throw TooFewSamples("need at least 64 chords");
    // Grid multiples of this hit every breakpoint (and, for trees, every arc
    // peak), so chords never cut across a kink of the image curve.
    long align = map.arc_count();
    if (map.kind() == HomogeneousMap::Kind::Tree) align *= 2;
    long n = ((static_cast<long>(n_samples) + align - 1) / align) * align;
    double coarse = chord_sum(map, n);
    double prev = 0.0;
    bool have_prev = false;
    for (int iter = 0; iter < 16; ++iter) {
        const double fine = chord_sum(map, 2 * n);
        const double rich = (4.0 * fine - coarse) / 3.0;
        if (have_prev && std::abs(rich - prev) < 1e-8) return rich;
        prev = rich;
        have_prev = true;
        coarse = fine;
        n *= 2;
    }
    throw NoConvergence("image length did not stabilize");
}

LinkCurve link_curve(const HomogeneousMap& map) {
    if (map.kind() != HomogeneousMap::Kind::Loop)
        throw NotLoopMap("link curve requires a loop map");
    const MetricGraph& g = map.cone().link();
    const double a = map.alpha();
    const double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        const double t = kTwoPi * (i + 0.5) / 1000.0;
        const double sp = g.distance(map.link_position(t - h), map.link_position(t + h)) / (2.0 * h);
        if (std::abs(sp - a) > 1e-9)
            throw std::runtime_error("link curve speed deviates from the map order");
    }
    return LinkCurve(map, a);
}

double FoldedBilliard::position(double t) const {
    const double total = chamber_len * static_cast<double>(start_classes.size());
    double s = std::fmod(t, total);
    if (s < 0.0) s += total;
    const long k = std::clamp(static_cast<long>(s / chamber_len), 0L,
                              static_cast<long>(start_classes.size()) - 1);
    const double within = s - static_cast<double>(k) * chamber_len;
    return start_classes[static_cast<std::size_t>(k)] == 0 ? within : chamber_len - within;
}

FoldedBilliard to_billiard(const HomogeneousMap& map, double chamber_len) {
    if (map.kind() != HomogeneousMap::Kind::Loop)
        throw NotLoopMap("billiard reduction requires a loop map");
    if (!(chamber_len > 0.0) || !std::isfinite(chamber_len))
        throw std::invalid_argument("chamber length must be positive");
    const MetricGraph& g = map.cone().link();
    if (!g.all_edges_have_length(chamber_len))
        throw MixedEdgeLengths("every link edge must have the chamber length");
    const double praw = std::numbers::pi / chamber_len;
    const long p = std::lround(praw);
    if (p < 1 || std::abs(praw - static_cast<double>(p)) > 1e-9)
        throw std::invalid_argument("chamber length must be pi over a positive integer");
    const std::vector<int> classes = g.bipartite_classes();

    FoldedBilliard fb;
    fb.chamber_len = chamber_len;
    fb.p = static_cast<int>(p);
    for (const PathStep& st : map.path()) {
        const GraphEdge& e = g.edge(st.edge);
        fb.start_classes.push_back(classes[static_cast<std::size_t>(st.forward ? e.a : e.b)]);
    }
    fb.fold_period = 2.0 * chamber_len;
    fb.fold_cert = certify_rational(fb.fold_period, 2 * static_cast<std::size_t>(p));
    fb.loop_period = kTwoPi * map.alpha();
    fb.loop_cert = certify_rational(fb.loop_period, 2 * static_cast<std::size_t>(p));
    fb.fold_periods_per_loop =
        static_cast<long>(map.multiplicity()) * static_cast<long>(map.path().size()) / 2;
    return fb;
}

}  // namespace deltamod
