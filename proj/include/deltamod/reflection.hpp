#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace deltamod {

// Supported finite reflection group families acting on S^{N-1}.
enum class Family { Dihedral, A, B, D, H3 };

std::string family_name(Family family);
Family parse_family(const std::string& name);

struct UnsupportedFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ClosureOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotInGroup : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonUnitInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One group element: an orthogonal matrix plus a shortest word in the
// simple reflections (word {i1,...,im} means S_{i1} * S_{i2} * ... * S_{im}).
struct GroupElement {
    Eigen::MatrixXd matrix;
    std::vector<int> word;
};

// Fundamental chamber data: the N inward wall normals.
struct Chamber {
    std::vector<Eigen::VectorXd> normals;
    std::string group_ref;

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
};

struct FoldResult {
    Eigen::VectorXd point;    // the chamber representative
    GroupElement element;     // element.matrix * input == point
};

// A finite orthogonal reflection group together with its simple-wall
// normals and the full element list. Immutable after construction; all
// member queries are const and safe to call concurrently.
class ReflectionGroup {
public:
    static constexpr std::size_t kClosureCap = 10000;

    Family family() const { return family_; }
    int parameter() const { return parameter_; }
    int rank() const { return rank_; }
    std::size_t order() const { return elements_.size(); }
    std::string name() const;

    const std::vector<Eigen::VectorXd>& simple_normals() const { return simple_normals_; }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const GroupElement& identity() const { return elements_.front(); }

    // All reflection hyperplane normals (orbit of the simple normals),
    // sign-canonicalized and deduplicated.
    const std::vector<Eigen::VectorXd>& mirror_normals() const { return mirror_normals_; }

    Chamber chamber() const;
    bool in_chamber(const Eigen::VectorXd& x, double tol = 1e-9) const;
    // A unit vector with equal positive inner product against every wall.
    Eigen::VectorXd chamber_interior_point() const;

    // Index into elements() of the element matching m, or -1.
    int find_element(const Eigen::MatrixXd& m, double tol = 1e-6) const;

    friend ReflectionGroup build_group(Family family, int parameter);

private:
    ReflectionGroup() = default;

    Family family_ = Family::A;
    int parameter_ = 1;
    int rank_ = 1;
    std::vector<Eigen::VectorXd> simple_normals_;
    std::vector<Eigen::VectorXd> mirror_normals_;
    std::vector<GroupElement> elements_;
};

// Builds the group as the closure of the family's simple reflections.
// Throws UnsupportedFamily for parameters outside the supported list and
// ClosureOverflow if the closure exceeds kClosureCap elements.
ReflectionGroup build_group(Family family, int parameter);

// Smallest k >= 1 with g^k = identity. Throws NotInGroup if g does not
// match a listed element.
int element_order(const ReflectionGroup& group, const GroupElement& g);

// Folds a unit vector into the fundamental chamber, returning the chamber
// point and a group element mapping the input onto it.
FoldResult fold_point(const ReflectionGroup& group, const Eigen::VectorXd& x);

// Closed-form order for a family/parameter pair (2p, (n+1)!, 2^n n!,
// 2^{n-1} n!, 120).
std::size_t closed_form_order(Family family, int parameter);

}  // namespace deltamod
