#pragma once

#include <boost/rational.hpp>
#include <stdexcept>
#include <vector>

#include "deltamod/billiards.hpp"

namespace deltamod {

using Fraction = boost::rational<long>;

struct InadmissibleDerivedOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectrumQuery {
    long group_order = 2;
    double max_order = 2.0;
    bool is_rank_one = false;
};

// All admissible orders m/k with k dividing the group order (or m/2 for
// rank-one targets), reduced and ascending, within [1, max_order].
std::vector<Fraction> admissible_orders(const SpectrumQuery& query);

struct AdmissibleVerdict {
    bool admissible = false;
    long m = 0;
    long k = 0;
};

AdmissibleVerdict is_admissible(double alpha, long group_order, double tol = 1e-9);

// Distance from 1 to the next admissible order above it.
Fraction order_gap(long group_order);

// Orders m * lambda / (2*pi) realized by winding a certified billiard loop
// m = 1..max_mult times (only windings of total angle >= 2*pi qualify).
std::vector<Fraction> orders_from_certificate(const BilliardCertificate& cert, long max_mult);

// A decomposition of the circle into open arcs of length n_i * pi / alpha
// whose first Dirichlet eigenvalues all equal alpha^2.
struct PartitionSolution {
    double alpha = 1.0;
    std::vector<long> parts;  // descending multiset, sums to 2*alpha
    bool degenerate = false;  // single arc: the slit circle
    std::vector<double> arc_lengths() const;
};

std::vector<PartitionSolution> partition_solutions(double alpha, double tol = 1e-9);

// Integer-partition counting function via Euler's pentagonal recurrence.
long partition_count(long n);

}  // namespace deltamod
