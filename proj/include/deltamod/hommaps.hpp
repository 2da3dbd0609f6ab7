#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deltamod/cones.hpp"

namespace deltamod {

struct BadM : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct AdjacentLegClash : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct Backtracking : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TooShortLoop : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotLoopMap : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct MixedEdgeLengths : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InconsistentInvariants : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct QuadratureUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One directed traversal of a link-graph edge.
struct PathStep {
    int edge;
    bool forward;  // true: from endpoint a toward endpoint b
};

// u(r, theta) = r^alpha g(theta), into a pod (sine arcs between zeros) or into
// a cone over a graph (constant-radius loop at link speed alpha).
class HomogeneousMap {
public:
    enum class Kind { Tree, Loop };

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double amplitude() const { return amplitude_; }

    // Arcs subdividing one 2*pi period of theta; arc i spans
    // [breakpoint(i), breakpoint(i+1)].
    int arc_count() const { return static_cast<int>(breakpoints_.size()) - 1; }
    double breakpoint(int i) const { return breakpoints_[static_cast<std::size_t>(i)]; }
    int arc_of(double theta) const;

    PodPoint tree_value(double r, double theta) const;
    ConePoint loop_value(double r, double theta) const;
    double dist_to_origin(double r, double theta) const;
    GraphPoint link_position(double theta) const;

    // Value of g in the arc's 2-d apartment chart (analytic continuation for
    // theta slightly outside the arc).
    Eigen::Vector2d chart_value(int arc, double theta) const;
    std::string chart_id(int arc) const;

    const KPod& pod() const;
    const ConeOverGraph& cone() const;
    const std::vector<PathStep>& path() const { return path_; }
    int multiplicity() const { return multiplicity_; }
    double path_length() const { return path_length_; }
    const std::vector<int>& legs() const { return legs_; }

    friend HomogeneousMap build_tree_map(int m, const KPod& pod, const std::vector<int>& legs,
                                         double L, double theta0);
    friend HomogeneousMap build_loop_map(const ConeOverGraph& cone,
                                         const std::vector<PathStep>& path, int multiplicity,
                                         double L);

private:
    HomogeneousMap(KPod pod, int m, std::vector<int> legs, double L, double theta0);
    HomogeneousMap(ConeOverGraph cone, std::vector<PathStep> path, int multiplicity, double L);

    Kind kind_;
    double alpha_ = 1.0;
    double amplitude_ = 1.0;
    double theta0_ = 0.0;
    std::vector<double> breakpoints_;

    // Tree data.
    std::vector<KPod> pod_;  // zero or one entry
    std::vector<int> legs_;

    // Loop data.
    std::vector<ConeOverGraph> cone_;  // zero or one entry
    std::vector<PathStep> path_;
    std::vector<double> cumulative_;  // partial sums of path edge lengths
    int multiplicity_ = 1;
    double path_length_ = 0.0;
    std::vector<int> step_start_;  // start vertex of each step
};

HomogeneousMap build_tree_map(int m, const KPod& pod, const std::vector<int>& legs, double L,
                              double theta0 = 0.0);
HomogeneousMap build_loop_map(const ConeOverGraph& cone, const std::vector<PathStep>& path,
                              int multiplicity, double L);

std::vector<PathStep> steps_from_vertex_cycle(const MetricGraph& g,
                                              const std::vector<int>& cycle);

struct ArcRepresentation {
    double theta_lo;
    double theta_hi;
    Eigen::Vector2d v1;
    Eigen::Vector2d v2;
    std::string chart;
};

std::vector<ArcRepresentation> arc_representations(const HomogeneousMap& map);

enum class DichotomyVerdict { HalfIntegerOrder, ConstantDistance };

struct DichotomyResult {
    DichotomyVerdict verdict;
    double norm_gap;  // |v2|^2 - |v1|^2, equal across arcs
    double dot;       // v1 . v2, equal across arcs
    std::vector<ArcRepresentation> arcs;
};

DichotomyResult classify_arcs(std::vector<ArcRepresentation> arcs, double alpha);
DichotomyResult dichotomy_classify(const HomogeneousMap& map);

// d/dtheta of q = |g|^2 in terms of the two arc invariants.
double q_prime_formula(double norm_gap, double dot, double alpha, double theta);

std::vector<std::pair<double, double>> q_profile(const HomogeneousMap& map, int n_samples);

struct OrderEstimate {
    double r;
    double energy;
    double i_value;
    double ord;
};

OrderEstimate order_estimate(const HomogeneousMap& map, double r, int panels);

double image_length(const HomogeneousMap& map, int n_samples);

// View onto a loop map's link traversal; the map must outlive it.
class LinkCurve {
public:
    LinkCurve(const HomogeneousMap& map, double speed) : map_(&map), speed_(speed) {}
    double speed() const { return speed_; }
    GraphPoint at(double theta) const { return map_->link_position(theta); }

private:
    const HomogeneousMap* map_;
    double speed_;
};

LinkCurve link_curve(const HomogeneousMap& map);

// The loop pushed to the 1-d chamber [0, chamber_len] by the bipartite fold.
struct FoldedBilliard {
    double chamber_len = 0.0;
    int p = 0;  // chamber_len = pi / p
    double fold_period = 0.0;
    std::pair<long, long> fold_cert;
    double loop_period = 0.0;
    std::pair<long, long> loop_cert;
    long fold_periods_per_loop = 0;

    double position(double t) const;  // folded coordinate at arc length t

    // Traversal data driving position().
    std::vector<int> start_classes;  // bipartite class at the start of each step
};

FoldedBilliard to_billiard(const HomogeneousMap& map, double chamber_len);

}  // namespace deltamod
