#pragma once

#include "pcfcm/cloud.hpp"

#include <memory>
#include <vector>

namespace pcfcm {

/// Half-space membership against the single nearest cloud sample: inside iff
/// (p* - q) . n* >= 0 for nearest point p* with normal n*.
template <int D>
bool is_inside_single(const KdTree<D>& index, const Vec<D>& q);

/// Majority vote over the n_votes nearest samples; exact ties count as
/// inside, consistent with the closed half-space of the single test.
template <int D>
bool is_inside_voting(const KdTree<D>& index, const Vec<D>& q, int n_votes);

/// Composable inside-outside classifier. Immutable after construction; safe
/// for concurrent classification.
template <int D>
class Predicate {
public:
    virtual ~Predicate() = default;
    virtual bool contains(const Vec<D>& q) const = 0;
};

template <int D>
using PredicatePtr = std::shared_ptr<const Predicate<D>>;

template <int D>
class CloudLeaf final : public Predicate<D> {
public:
    CloudLeaf(std::shared_ptr<const KdTree<D>> index, int n_votes = 1);
    bool contains(const Vec<D>& q) const override;
    const KdTree<D>& index() const { return *index_; }
    int n_votes() const { return n_votes_; }

private:
    std::shared_ptr<const KdTree<D>> index_;
    int n_votes_;
};

template <int D>
class BallLeaf final : public Predicate<D> {
public:
    BallLeaf(const Vec<D>& center, double radius) : center_(center), radius_(radius) {}
    bool contains(const Vec<D>& q) const override {
        return (q - center_).squaredNorm() <= radius_ * radius_;
    }

private:
    Vec<D> center_;
    double radius_;
};

template <int D>
class EllipsoidLeaf final : public Predicate<D> {
public:
    EllipsoidLeaf(const Vec<D>& center, const Vec<D>& semi_axes)
        : center_(center), semi_axes_(semi_axes) {}
    bool contains(const Vec<D>& q) const override {
        return ((q - center_).array() / semi_axes_.array()).matrix().squaredNorm() <= 1.0;
    }

private:
    Vec<D> center_;
    Vec<D> semi_axes_;
};

template <int D>
class BoxLeaf final : public Predicate<D> {
public:
    explicit BoxLeaf(const Aabb<D>& box) : box_(box) {}
    bool contains(const Vec<D>& q) const override { return box_.contains(q); }

private:
    Aabb<D> box_;
};

/// Closed half-space (p - q) . n >= 0, i.e. the side the normal points away from.
template <int D>
class HalfSpaceLeaf final : public Predicate<D> {
public:
    HalfSpaceLeaf(const Vec<D>& point, const Vec<D>& normal)
        : point_(point), normal_(normal.normalized()) {}
    bool contains(const Vec<D>& q) const override { return (point_ - q).dot(normal_) >= 0.0; }

private:
    Vec<D> point_;
    Vec<D> normal_;
};

enum class CsgOp { Union, Intersection, Difference };

template <int D>
class CsgNode final : public Predicate<D> {
public:
    CsgNode(CsgOp op, PredicatePtr<D> left, PredicatePtr<D> right);
    bool contains(const Vec<D>& q) const override;

private:
    CsgOp op_;
    PredicatePtr<D> left_;
    PredicatePtr<D> right_;
};

template <int D>
PredicatePtr<D> make_union(PredicatePtr<D> a, PredicatePtr<D> b) {
    return std::make_shared<CsgNode<D>>(CsgOp::Union, std::move(a), std::move(b));
}
template <int D>
PredicatePtr<D> make_intersection(PredicatePtr<D> a, PredicatePtr<D> b) {
    return std::make_shared<CsgNode<D>>(CsgOp::Intersection, std::move(a), std::move(b));
}
template <int D>
PredicatePtr<D> make_difference(PredicatePtr<D> a, PredicatePtr<D> b) {
    return std::make_shared<CsgNode<D>>(CsgOp::Difference, std::move(a), std::move(b));
}

template <int D>
bool classify(const Predicate<D>& predicate, const Vec<D>& q) {
    return predicate.contains(q);
}

/// Cosine bump of half-width epsilon; integrates to one over [-eps, eps].
double regularized_delta(double x, double epsilon);

/// Boundary band for tessellation-free contour integrals. The local tangent
/// plane of every boundary sample's n-neighborhood is precomputed; queries
/// cost one nearest-neighbor lookup.
template <int D>
class DeltaBandSpec {
public:
    DeltaBandSpec(std::shared_ptr<const KdTree<D>> boundary, double epsilon, int n_neigh);

    const KdTree<D>& boundary() const { return *boundary_; }
    double epsilon() const { return epsilon_; }
    int n_neigh() const { return n_neigh_; }

    /// Median nearest-neighbor distance of the boundary samples.
    double sample_spacing() const { return spacing_; }

    /// Unsigned distance from q to the PCA plane of the nearest sample's
    /// n-neighborhood.
    double distance(const Vec<D>& q) const;

    /// distance plus the nearest sample index (for load directions).
    double distance(const Vec<D>& q, int& nearest_index) const;

    const FittedPlane<D>& plane_of(int point_index) const { return planes_[point_index]; }

private:
    std::shared_ptr<const KdTree<D>> boundary_;
    double epsilon_;
    int n_neigh_;
    double spacing_;
    std::vector<FittedPlane<D>> planes_;
};

template <int D>
double distance_to_point_set(const DeltaBandSpec<D>& band, const Vec<D>& q) {
    return band.distance(q);
}

template <int D>
double delta_field(const DeltaBandSpec<D>& band, const Vec<D>& q) {
    return regularized_delta(band.distance(q), band.epsilon());
}

enum class CutState { Inside, Outside, Cut };

/// Classifies a uniform seeds^D grid (corners included) and reduces to
/// Inside / Outside / Cut.
template <int D>
CutState cut_state(const Predicate<D>& predicate, const Aabb<D>& box, int seeds_per_axis);

extern template bool is_inside_single<2>(const KdTree<2>&, const Vec2&);
extern template bool is_inside_single<3>(const KdTree<3>&, const Vec3&);
extern template bool is_inside_voting<2>(const KdTree<2>&, const Vec2&, int);
extern template bool is_inside_voting<3>(const KdTree<3>&, const Vec3&, int);
extern template class CloudLeaf<2>;
extern template class CloudLeaf<3>;
extern template class CsgNode<2>;
extern template class CsgNode<3>;
extern template class DeltaBandSpec<2>;
extern template class DeltaBandSpec<3>;
extern template CutState cut_state<2>(const Predicate<2>&, const Aabb2&, int);
extern template CutState cut_state<3>(const Predicate<3>&, const Aabb3&, int);

}  // namespace pcfcm
