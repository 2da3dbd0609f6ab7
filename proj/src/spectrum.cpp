#include "deltamod/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace deltamod {

namespace {

void check_group_order(long group_order) {
    if (group_order < 2 || group_order % 2 != 0)
        throw std::invalid_argument("reflection group orders are even and at least 2");
}

void append_partitions(long remaining, long cap, std::vector<long>& current,
                       std::vector<std::vector<long>>& out) {
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    for (long part = std::min(remaining, cap); part >= 1; --part) {
        current.push_back(part);
        append_partitions(remaining - part, part, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Fraction> admissible_orders(const SpectrumQuery& query) {
    if (!(query.max_order >= 1.0)) throw std::invalid_argument("max order must be at least 1");
    std::vector<Fraction> out;
    if (query.is_rank_one) {
        for (long m = 2;; ++m) {
            const Fraction f(m, 2);
            if (boost::rational_cast<double>(f) > query.max_order + 1e-12) break;
            out.push_back(f);
        }
        return out;
    }
    check_group_order(query.group_order);
    for (std::size_t k : divisors_ascending(static_cast<std::size_t>(query.group_order))) {
        const long kk = static_cast<long>(k);
        const long top = static_cast<long>(std::floor(query.max_order * static_cast<double>(kk) + 1e-9));
        for (long m = kk; m <= top; ++m) out.emplace_back(m, kk);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AdmissibleVerdict is_admissible(double alpha, long group_order, double tol) {
    if (!(alpha >= 1.0 - tol)) throw std::invalid_argument("orders start at 1");
    check_group_order(group_order);
    for (std::size_t k : divisors_ascending(static_cast<std::size_t>(group_order))) {
        const double scaled = alpha * static_cast<double>(k);
        const long m = std::lround(scaled);
        if (m >= static_cast<long>(k) && std::abs(scaled - static_cast<double>(m)) < tol)
            return {true, m, static_cast<long>(k)};
    }
    return {false, 0, 0};
}

Fraction order_gap(long group_order) {
    check_group_order(group_order);
    return Fraction(1, group_order);
}

std::vector<Fraction> orders_from_certificate(const BilliardCertificate& cert, long max_mult) {
    if (cert.j < 1 || cert.k < 1 || cert.group_order == 0)
        throw std::invalid_argument("certificate is incomplete");
    if (max_mult < 1) throw std::invalid_argument("need at least one winding");
    std::vector<Fraction> out;
    for (long m = 1; m <= max_mult; ++m) {
        if (m * cert.j < cert.k) continue;  // total angle below one turn
        const Fraction order(m * cert.j, cert.k);
        const AdmissibleVerdict v = is_admissible(boost::rational_cast<double>(order),
                                                  static_cast<long>(cert.group_order));
        if (!v.admissible)
            throw InadmissibleDerivedOrder("certified loop yields an order outside the spectrum");
        out.push_back(order);
    }
    return out;
}

std::vector<double> PartitionSolution::arc_lengths() const {
    std::vector<double> out;
    out.reserve(parts.size());
    for (long n : parts) out.push_back(static_cast<double>(n) * std::numbers::pi / alpha);
    return out;
}

std::vector<PartitionSolution> partition_solutions(double alpha, double tol) {
    if (!(alpha >= 1.0 - tol)) throw std::invalid_argument("orders start at 1");
    const double doubled = 2.0 * alpha;
    const long n = std::lround(doubled);
    std::vector<PartitionSolution> out;
    if (n < 2 || std::abs(doubled - static_cast<double>(n)) > tol) return out;
    std::vector<std::vector<long>> parts;
    std::vector<long> current;
    append_partitions(n, n, current, parts);
    out.reserve(parts.size());
    for (std::vector<long>& p : parts) {
        PartitionSolution sol;
        sol.alpha = alpha;
        sol.degenerate = p.size() == 1;
        sol.parts = std::move(p);
        out.push_back(std::move(sol));
    }
    return out;
}

long partition_count(long n) {
    if (n < 0) return 0;
    std::vector<long> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = 1;
    for (long i = 1; i <= n; ++i) {
        long total = 0;
        for (long k = 1;; ++k) {
            const long g1 = k * (3 * k - 1) / 2;
            const long g2 = k * (3 * k + 1) / 2;
            if (g1 > i && g2 > i) break;
            const long sign = (k % 2 == 1) ? 1 : -1;
            if (g1 <= i) total += sign * p[static_cast<std::size_t>(i - g1)];
            if (g2 <= i) total += sign * p[static_cast<std::size_t>(i - g2)];
        }
        p[static_cast<std::size_t>(i)] = total;
    }
    return p[static_cast<std::size_t>(n)];
}

}  // namespace deltamod
