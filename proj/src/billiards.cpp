#include "deltamod/billiards.hpp"

#include <algorithm>
#include <cmath>

namespace deltamod {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

// Smallest zero s > lo of a*cos(s) + b*sin(s) on the forward ray, or -1 when
// the function vanishes identically (circle inside the wall's hyperplane).
double next_zero(double a, double b, double lo) {
    const double amp = std::hypot(a, b);
    if (amp < 1e-12) return -1.0;
    // Zeros sit at phi + pi/2 (mod pi), phi = atan2(b, a).
    double z = std::atan2(b, a) + M_PI / 2.0;
    z -= M_PI * std::floor(z / M_PI);
    while (z <= lo) z += M_PI;
    return z;
}

}  // namespace

GreatCircle make_circle(const Eigen::VectorXd& p, const Eigen::VectorXd& v) {
    if (p.size() != v.size() || p.size() < 2)
        throw BadCircle("circle needs two vectors of equal dimension >= 2");
    if (std::abs(p.norm() - 1.0) > 1e-12 || std::abs(v.norm() - 1.0) > 1e-12)
        throw BadCircle("circle frame vectors must be unit length");
    if (std::abs(p.dot(v)) > 1e-12)
        throw BadCircle("circle frame vectors must be orthogonal");
    return GreatCircle{p, v};
}

double GaussianSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u1 = 0.0;
    do {
        u1 = unit(rng_);
    } while (u1 <= 1e-300);
    const double u2 = unit(rng_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
}

GreatCircle random_circle(int dim, GaussianSampler& gauss) {
    if (dim < 2) throw BadCircle("random circle needs dimension >= 2");
    Eigen::VectorXd p(dim), w(dim);
    do {
        for (int i = 0; i < dim; ++i) p(i) = gauss();
    } while (p.norm() < 1e-6);
    p /= p.norm();
    Eigen::VectorXd v;
    do {
        for (int i = 0; i < dim; ++i) w(i) = gauss();
        v = w - w.dot(p) * p;
    } while (v.norm() < 1e-6);
    v /= v.norm();
    // Second Gram-Schmidt pass pins the orthogonality residual near epsilon.
    v -= v.dot(p) * p;
    v /= v.norm();
    return GreatCircle{p, v};
}

BilliardPath::BilliardPath(GreatCircle source, std::vector<PathSegment> segments,
                           std::vector<PathEvent> events, bool wraps)
    : source_(std::move(source)),
      segments_(std::move(segments)),
      events_(std::move(events)),
      wraps_(wraps) {
    if (segments_.empty()) throw std::invalid_argument("path needs at least one segment");
}

const PathSegment& BilliardPath::segment_at(double& t) const {
    if (wraps_) {
        t = wrap_angle(t - segments_.front().t0) + segments_.front().t0;
    } else {
        t = std::clamp(t, t_min(), t_max());
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const PathSegment& s) { return value < s.t1; });
    if (it == segments_.end()) --it;
    return *it;
}

Eigen::VectorXd BilliardPath::at(double t) const {
    const PathSegment& s = segment_at(t);
    return s.at(t);
}

Eigen::VectorXd BilliardPath::velocity(double t) const {
    const PathSegment& s = segment_at(t);
    return s.velocity(t);
}

BilliardPath fold_circle(const ReflectionGroup& group, const GreatCircle& circle) {
    make_circle(circle.p, circle.v);
    if (circle.p.size() != group.rank())
        throw BadCircle("circle dimension does not match the group rank");

    // Times in [0, 2*pi) where the lifted circle crosses some mirror.
    std::vector<double> crossings;
    for (const auto& n : group.mirror_normals()) {
        const double a = circle.p.dot(n);
        const double b = circle.v.dot(n);
        if (std::hypot(a, b) < 1e-12) continue;  // circle inside this mirror
        double z = std::atan2(b, a) + M_PI / 2.0;
        z = wrap_angle(z);
        if (z >= kTwoPi) z = 0.0;
        crossings.push_back(z);
        crossings.push_back(z < M_PI ? z + M_PI : z - M_PI);
    }
    std::sort(crossings.begin(), crossings.end());
    crossings.erase(std::unique(crossings.begin(), crossings.end(),
                                [](double a, double b) { return b - a < 1e-9; }),
                    crossings.end());
    if (crossings.size() >= 2 && crossings.front() < 1e-9 &&
        kTwoPi - crossings.back() < 1e-9) {
        crossings.pop_back();
    }

    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double c : crossings) {
        if (c > 1e-9 && kTwoPi - c > 1e-9) cuts.push_back(c);
    }
    cuts.push_back(kTwoPi);

    std::vector<PathSegment> segments;
    segments.reserve(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double t0 = cuts[i];
        const double t1 = cuts[i + 1];
        const double mid = 0.5 * (t0 + t1);
        const auto folded = fold_point(group, circle.at(mid));
        const Eigen::MatrixXd& w = folded.element.matrix;
        segments.push_back(PathSegment{t0, t1, w * circle.at(t0), w * circle.velocity(t0)});
    }

    std::vector<PathEvent> events;
    const auto& normals = group.simple_normals();
    const bool crossing_at_zero = std::any_of(crossings.begin(), crossings.end(),
                                              [](double c) { return c < 1e-9; });
    for (std::size_t i = 0; i < segments.size(); ++i) {
        // Event at the start of segment i, fed by the previous segment
        // (cyclically); t = 0 is an event only when the circle crosses there.
        if (i == 0 && !crossing_at_zero) continue;
        const double t = segments[i].t0;
        const PathSegment& prev = i == 0 ? segments.back() : segments[i - 1];
        const Eigen::VectorXd& point = segments[i].p;
        int wall = 0;
        double best = 1e100;
        for (std::size_t n = 0; n < normals.size(); ++n) {
            const double gap = std::abs(normals[n].dot(point));
            if (gap < best) {
                best = gap;
                wall = static_cast<int>(n);
            }
        }
        events.push_back(PathEvent{t, wall, prev.velocity(i == 0 ? kTwoPi : t), segments[i].v});
    }

    return BilliardPath(circle, std::move(segments), std::move(events), true);
}

BilliardPath trace_reflective(const ReflectionGroup& group, const Eigen::VectorXd& start,
                              const Eigen::VectorXd& direction, double length) {
    if (std::abs(start.norm() - 1.0) > 1e-9)
        throw BadCircle("trace start must be a unit vector");
    if (std::abs(direction.norm() - 1.0) > 1e-9 || std::abs(direction.dot(start)) > 1e-9)
        throw BadCircle("trace direction must be a unit tangent at the start point");
    if (!group.in_chamber(start, 1e-9)) throw BadCircle("trace start must lie in the chamber");
    if (length < 0.0 || length > 200.0)
        throw std::invalid_argument("trace length must lie in [0, 200]");

    const auto& normals = group.simple_normals();
    std::vector<PathSegment> segments;
    std::vector<PathEvent> events;

    Eigen::VectorXd p = start;
    Eigen::VectorXd v = direction;
    double t_cur = 0.0;
    if (length == 0.0) {
        segments.push_back(PathSegment{0.0, 0.0, p, v});
        return BilliardPath(GreatCircle{start, direction}, std::move(segments),
                            std::move(events), false);
    }

    constexpr std::size_t kMaxEvents = 100000;
    while (t_cur < length) {
        double s_best = 1e100, s_second = 1e100;
        int wall = -1;
        for (std::size_t i = 0; i < normals.size(); ++i) {
            const double s = next_zero(p.dot(normals[i]), v.dot(normals[i]), 1e-9);
            if (s < 0) continue;
            if (s < s_best) {
                s_second = s_best;
                s_best = s;
                wall = static_cast<int>(i);
            } else if (s < s_second) {
                s_second = s;
            }
        }
        if (wall < 0) throw StalledPath("no forward wall incidence found");
        if (s_second - s_best < 1e-9)
            throw CornerIncidence("two wall incidences coincide; fold the circle instead");

        if (t_cur + s_best >= length) {
            segments.push_back(PathSegment{t_cur, length, p, v});
            break;
        }

        const double t_hit = t_cur + s_best;
        segments.push_back(PathSegment{t_cur, t_hit, p, v});
        Eigen::VectorXd hit_p = segments.back().at(t_hit);
        Eigen::VectorXd hit_v = segments.back().velocity(t_hit);
        hit_p /= hit_p.norm();

        const Eigen::VectorXd& n = normals[static_cast<std::size_t>(wall)];
        Eigen::VectorXd out = hit_v - 2.0 * hit_v.dot(n) * n;
        out -= out.dot(hit_p) * hit_p;
        out /= out.norm();

        events.push_back(PathEvent{t_hit, wall, hit_v, out});
        if (events.size() > kMaxEvents) throw StalledPath("event budget exhausted");
        p = hit_p;
        v = out;
        t_cur = t_hit;
    }

    return BilliardPath(GreatCircle{start, direction}, std::move(segments), std::move(events),
                        false);
}

std::vector<StabilizerEntry> circle_stabilizer(const ReflectionGroup& group,
                                               const GreatCircle& circle) {
    std::vector<StabilizerEntry> entries;
    const auto& elements = group.elements();
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const Eigen::MatrixXd& w = elements[i].matrix;
        const Eigen::VectorXd wp = w * circle.p;
        const Eigen::VectorXd wv = w * circle.v;
        const double c = wp.dot(circle.p);
        const double s = wp.dot(circle.v);
        if ((wp - (circle.p * c + circle.v * s)).norm() > 1e-9) continue;
        if ((wv - (-circle.p * s + circle.v * c)).norm() > 1e-9) continue;
        double angle = wrap_angle(std::atan2(s, c));
        if (angle < 1e-12) angle = kTwoPi;
        entries.push_back(StabilizerEntry{static_cast<int>(i), angle});
    }
    std::sort(entries.begin(), entries.end(),
              [](const StabilizerEntry& a, const StabilizerEntry& b) { return a.angle < b.angle; });
    return entries;
}

BilliardCertificate minimal_period(const ReflectionGroup& group, const GreatCircle& circle) {
    make_circle(circle.p, circle.v);
    if (circle.p.size() != group.rank())
        throw BadCircle("circle dimension does not match the group rank");

    const auto entries = circle_stabilizer(group, circle);
    // Nonempty: the identity always contributes angle 2*pi.
    const StabilizerEntry& best = entries.front();

    BilliardCertificate cert;
    cert.lambda = best.angle;
    cert.monodromy = group.elements()[static_cast<std::size_t>(best.element_index)];
    cert.group_order = group.order();
    cert.k = element_order(group, cert.monodromy);
    const double ratio = static_cast<double>(cert.k) * cert.lambda / kTwoPi;
    cert.j = std::lround(ratio);
    if (cert.j < 1 || std::abs(static_cast<double>(cert.k) * cert.lambda -
                               kTwoPi * static_cast<double>(cert.j)) > 1e-9)
        throw CertificationFailure("monodromy order does not close the lifted circle");
    return cert;
}

std::vector<std::size_t> divisors_ascending(std::size_t n) {
    std::vector<std::size_t> low, high;
    for (std::size_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        low.push_back(d);
        if (d != n / d) high.push_back(n / d);
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

std::pair<long, long> certify_rational(double lambda, std::size_t group_order) {
    if (!(lambda > 0.0) || lambda > kTwoPi * static_cast<double>(group_order))
        throw NoRationalMatch("period outside (0, 2*pi*|W|]");
    for (std::size_t k : divisors_ascending(group_order)) {
        const double ratio = static_cast<double>(k) * lambda / kTwoPi;
        const long j = std::lround(ratio);
        if (j >= 1 && std::abs(ratio - static_cast<double>(j)) < 1e-6)
            return {j, static_cast<long>(k)};
    }
    throw NoRationalMatch("no divisor of the group order certifies this period");
}

}  // namespace deltamod
