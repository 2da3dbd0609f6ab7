#include "deltamod/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace deltamod {

namespace {

constexpr double kDedupTol = 1e-6;

Eigen::MatrixXd reflection_matrix(const Eigen::VectorXd& unit_normal) {
    const int n = static_cast<int>(unit_normal.size());
    return Eigen::MatrixXd::Identity(n, n) - 2.0 * unit_normal * unit_normal.transpose();
}

// Orthonormal basis of the sum-zero hyperplane in R^{n+1}, as rows.
Eigen::MatrixXd helmert_basis(int n) {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n + 1);
    for (int k = 1; k <= n; ++k) {
        for (int i = 0; i < k; ++i) basis(k - 1, i) = 1.0;
        basis(k - 1, k) = -static_cast<double>(k);
        basis.row(k - 1) /= std::sqrt(static_cast<double>(k) * (k + 1));
    }
    return basis;
}

std::vector<Eigen::VectorXd> simple_normals_for(Family family, int parameter) {
    std::vector<Eigen::VectorXd> normals;
    switch (family) {
        case Family::Dihedral: {
            // Mirrors at angles 0 and pi/p; chamber is the arc [0, pi/p].
            const double beta = M_PI / parameter;
            Eigen::VectorXd n1(2), n2(2);
            n1 << 0.0, 1.0;
            n2 << std::sin(beta), -std::cos(beta);
            normals = {n1, n2};
            break;
        }
        case Family::A: {
            // Roots e_i - e_{i+1} in the sum-zero hyperplane of R^{n+1},
            // re-expressed in the Helmert orthonormal basis of R^n.
            const int n = parameter;
            const Eigen::MatrixXd basis = helmert_basis(n);
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd root = Eigen::VectorXd::Zero(n + 1);
                root(i) = 1.0;
                root(i + 1) = -1.0;
                Eigen::VectorXd v = basis * root;
                normals.push_back(v / v.norm());
            }
            break;
        }
        case Family::B: {
            const int n = parameter;
            for (int i = 0; i + 1 < n; ++i) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
                v(i) = 1.0;
                v(i + 1) = -1.0;
                normals.push_back(v / v.norm());
            }
            Eigen::VectorXd last = Eigen::VectorXd::Zero(n);
            last(n - 1) = 1.0;
            normals.push_back(last);
            break;
        }
        case Family::D: {
            const int n = parameter;
            for (int i = 0; i + 1 < n; ++i) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
                v(i) = 1.0;
                v(i + 1) = -1.0;
                normals.push_back(v / v.norm());
            }
            Eigen::VectorXd last = Eigen::VectorXd::Zero(n);
            last(n - 2) = 1.0;
            last(n - 1) = 1.0;
            normals.push_back(last / last.norm());
            break;
        }
        case Family::H3: {
            // Unit normals with the H3 Gram matrix, via Cholesky.
            Eigen::Matrix3d gram;
            const double c5 = std::cos(M_PI / 5.0);
            gram << 1.0, -c5, 0.0,
                    -c5, 1.0, -0.5,
                    0.0, -0.5, 1.0;
            Eigen::LLT<Eigen::Matrix3d> llt(gram);
            Eigen::Matrix3d lower = llt.matrixL();
            for (int i = 0; i < 3; ++i) {
                normals.push_back(lower.row(i).transpose());
            }
            break;
        }
    }
    return normals;
}

void validate_parameter(Family family, int parameter) {
    switch (family) {
        case Family::Dihedral:
            if (parameter < 2)
                throw UnsupportedFamily("dihedral requires p >= 2");
            if (static_cast<std::size_t>(parameter) > ReflectionGroup::kClosureCap / 2)
                throw UnsupportedFamily("dihedral parameter exceeds element cap");
            return;
        case Family::A:
            if (parameter < 1 || parameter > 6)
                throw UnsupportedFamily("family A supports rank 1..6");
            return;
        case Family::B:
            if (parameter < 2 || parameter > 5)
                throw UnsupportedFamily("family B supports rank 2..5");
            return;
        case Family::D:
            if (parameter < 2 || parameter > 5)
                throw UnsupportedFamily("family D supports rank 2..5");
            return;
        case Family::H3:
            if (parameter != 3)
                throw UnsupportedFamily("H3 is fixed at rank 3");
            return;
    }
    throw UnsupportedFamily("unknown family");
}

Eigen::VectorXd canonical_sign(const Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-9) return v(i) > 0 ? v : Eigen::VectorXd(-v);
    }
    return v;
}

}  // namespace

std::string family_name(Family family) {
    switch (family) {
        case Family::Dihedral: return "dihedral";
        case Family::A: return "A";
        case Family::B: return "B";
        case Family::D: return "D";
        case Family::H3: return "H3";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    std::string low;
    for (char c : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "dihedral" || low == "i2") return Family::Dihedral;
    if (low == "a") return Family::A;
    if (low == "b") return Family::B;
    if (low == "d") return Family::D;
    if (low == "h3" || low == "h") return Family::H3;
    throw UnsupportedFamily("unknown family tag: " + name);
}

std::size_t closed_form_order(Family family, int parameter) {
    auto factorial = [](int n) {
        std::size_t f = 1;
        for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
        return f;
    };
    switch (family) {
        case Family::Dihedral: return 2 * static_cast<std::size_t>(parameter);
        case Family::A: return factorial(parameter + 1);
        case Family::B: return (std::size_t{1} << parameter) * factorial(parameter);
        case Family::D: return (std::size_t{1} << (parameter - 1)) * factorial(parameter);
        case Family::H3: return 120;
    }
    return 0;
}

bool Chamber::contains(const Eigen::VectorXd& x, double tol) const {
    for (const auto& n : normals) {
        if (n.dot(x) < -tol) return false;
    }
    return true;
}

std::string ReflectionGroup::name() const {
    if (family_ == Family::H3) return "H3";
    return family_name(family_) + std::to_string(parameter_);
}

Chamber ReflectionGroup::chamber() const {
    return Chamber{simple_normals_, name()};
}

bool ReflectionGroup::in_chamber(const Eigen::VectorXd& x, double tol) const {
    for (const auto& n : simple_normals_) {
        if (n.dot(x) < -tol) return false;
    }
    return true;
}

Eigen::VectorXd ReflectionGroup::chamber_interior_point() const {
    Eigen::MatrixXd walls(rank_, rank_);
    for (int i = 0; i < rank_; ++i) walls.row(i) = simple_normals_[i].transpose();
    Eigen::VectorXd x = walls.colPivHouseholderQr().solve(Eigen::VectorXd::Ones(rank_));
    return x / x.norm();
}

int ReflectionGroup::find_element(const Eigen::MatrixXd& m, double tol) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if ((elements_[i].matrix - m).cwiseAbs().maxCoeff() < tol) return static_cast<int>(i);
    }
    return -1;
}

ReflectionGroup build_group(Family family, int parameter) {
    if (family == Family::H3) parameter = 3;
    validate_parameter(family, parameter);

    ReflectionGroup group;
    group.family_ = family;
    group.parameter_ = parameter;
    group.simple_normals_ = simple_normals_for(family, parameter);
    group.rank_ = static_cast<int>(group.simple_normals_.front().size());

    std::vector<Eigen::MatrixXd> generators;
    generators.reserve(group.simple_normals_.size());
    for (const auto& n : group.simple_normals_) generators.push_back(reflection_matrix(n));

    // Breadth-first closure of the generators; BFS order gives each element
    // a shortest word.
    GroupElement id{Eigen::MatrixXd::Identity(group.rank_, group.rank_), {}};
    group.elements_.push_back(id);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t gi = queue.front();
        queue.pop_front();
        for (std::size_t s = 0; s < generators.size(); ++s) {
            Eigen::MatrixXd h = group.elements_[gi].matrix * generators[s];
            if (group.find_element(h, kDedupTol) >= 0) continue;
            GroupElement e;
            e.matrix = std::move(h);
            e.word = group.elements_[gi].word;
            e.word.push_back(static_cast<int>(s));
            group.elements_.push_back(std::move(e));
            queue.push_back(group.elements_.size() - 1);
            if (group.elements_.size() > ReflectionGroup::kClosureCap)
                throw ClosureOverflow("reflection closure exceeded element cap");
        }
    }

    if (group.elements_.size() != closed_form_order(family, parameter))
        throw ClosureOverflow("closure size disagrees with the family's closed form");

    // Mirror normals: orbit of the simple normals, deduplicated up to sign.
    for (const auto& e : group.elements_) {
        for (const auto& n : group.simple_normals_) {
            Eigen::VectorXd m = canonical_sign(e.matrix * n);
            bool seen = false;
            for (const auto& known : group.mirror_normals_) {
                if ((known - m).cwiseAbs().maxCoeff() < kDedupTol) {
                    seen = true;
                    break;
                }
            }
            if (!seen) group.mirror_normals_.push_back(std::move(m));
        }
    }

    return group;
}

int element_order(const ReflectionGroup& group, const GroupElement& g) {
    if (group.find_element(g.matrix) < 0)
        throw NotInGroup("element does not match any listed group element");
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(group.rank(), group.rank());
    Eigen::MatrixXd power = g.matrix;
    for (int k = 1; k <= static_cast<int>(group.order()); ++k) {
        if ((power - id).cwiseAbs().maxCoeff() < 1e-9) return k;
        power = power * g.matrix;
    }
    throw NotInGroup("element order exceeds the group order");
}

FoldResult fold_point(const ReflectionGroup& group, const Eigen::VectorXd& x) {
    if (x.size() != group.rank())
        throw NonUnitInput("input dimension does not match the group rank");
    if (std::abs(x.norm() - 1.0) > 1e-9)
        throw NonUnitInput("fold_point requires a unit vector");

    const auto& normals = group.simple_normals();
    Eigen::VectorXd y = x;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(group.rank(), group.rank());
    bool folded = false;
    const std::size_t cap = 4 * group.order() + 8;
    for (std::size_t step = 0; step < cap; ++step) {
        int violated = -1;
        for (std::size_t i = 0; i < normals.size(); ++i) {
            if (normals[i].dot(y) < -1e-12) {
                violated = static_cast<int>(i);
                break;
            }
        }
        if (violated < 0) {
            folded = true;
            break;
        }
        const Eigen::VectorXd& n = normals[violated];
        y -= 2.0 * n.dot(y) * n;
        acc = reflection_matrix(n) * acc;
    }
    if (!folded) {
        // Numerical stall near a wall; pick the orbit representative with the
        // best worst-wall margin instead.
        double best = -2.0;
        for (const auto& e : group.elements()) {
            Eigen::VectorXd candidate = e.matrix * x;
            double margin = 2.0;
            for (const auto& n : normals) margin = std::min(margin, n.dot(candidate));
            if (margin > best) {
                best = margin;
                y = candidate;
                acc = e.matrix;
            }
        }
    }

    const int idx = group.find_element(acc);
    if (idx < 0) throw NotInGroup("fold composition left the stored element list");
    return FoldResult{y, group.elements()[static_cast<std::size_t>(idx)]};
}

}  // namespace deltamod
