#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "deltamod/reflection.hpp"

namespace deltamod {

struct BadCircle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CornerIncidence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StalledPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoRationalMatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parametrized great circle t -> p cos t + v sin t with (p, v) orthonormal.
struct GreatCircle {
    Eigen::VectorXd p;
    Eigen::VectorXd v;

    Eigen::VectorXd at(double t) const { return p * std::cos(t) + v * std::sin(t); }
    Eigen::VectorXd velocity(double t) const { return -p * std::sin(t) + v * std::cos(t); }
};

GreatCircle make_circle(const Eigen::VectorXd& p, const Eigen::VectorXd& v);

// Deterministic standard-normal stream (Box-Muller over mt19937_64), so that
// seeded runs are reproducible across standard libraries.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()();

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

GreatCircle random_circle(int dim, GaussianSampler& gauss);

struct PathEvent {
    double t;
    int wall;
    Eigen::VectorXd dir_in;
    Eigen::VectorXd dir_out;
};

// On [t0, t1] the path is point(t) = p cos(t - t0) + v sin(t - t0).
struct PathSegment {
    double t0;
    double t1;
    Eigen::VectorXd p;
    Eigen::VectorXd v;

    Eigen::VectorXd at(double t) const {
        return p * std::cos(t - t0) + v * std::sin(t - t0);
    }
    Eigen::VectorXd velocity(double t) const {
        return -p * std::sin(t - t0) + v * std::cos(t - t0);
    }
};

class BilliardPath {
public:
    BilliardPath(GreatCircle source, std::vector<PathSegment> segments,
                 std::vector<PathEvent> events, bool wraps);

    const GreatCircle& source() const { return source_; }
    const std::vector<PathSegment>& segments() const { return segments_; }
    const std::vector<PathEvent>& events() const { return events_; }
    // A folded full circle is 2*pi-periodic; sampling then accepts any t.
    bool wraps() const { return wraps_; }
    double t_min() const { return segments_.front().t0; }
    double t_max() const { return segments_.back().t1; }

    Eigen::VectorXd at(double t) const;
    Eigen::VectorXd velocity(double t) const;

private:
    const PathSegment& segment_at(double& t) const;

    GreatCircle source_;
    std::vector<PathSegment> segments_;
    std::vector<PathEvent> events_;
    bool wraps_ = false;
};

struct BilliardCertificate {
    double lambda = 0.0;
    GroupElement monodromy;
    long j = 0;
    long k = 0;
    std::size_t group_order = 0;
};

// Elements mapping the circle to itself, with their rotation angle in (0, 2*pi].
struct StabilizerEntry {
    int element_index;
    double angle;
};

BilliardPath fold_circle(const ReflectionGroup& group, const GreatCircle& circle);

BilliardPath trace_reflective(const ReflectionGroup& group, const Eigen::VectorXd& start,
                              const Eigen::VectorXd& direction, double length);

std::vector<StabilizerEntry> circle_stabilizer(const ReflectionGroup& group,
                                               const GreatCircle& circle);

BilliardCertificate minimal_period(const ReflectionGroup& group, const GreatCircle& circle);

std::pair<long, long> certify_rational(double lambda, std::size_t group_order);

std::vector<std::size_t> divisors_ascending(std::size_t n);

}  // namespace deltamod
