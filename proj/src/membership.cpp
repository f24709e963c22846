#include "pcfcm/membership.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcfcm {

template <int D>
bool is_inside_single(const KdTree<D>& index, const Vec<D>& q) {
    const OrientedPoint<D>& p = index.cloud()[index.nearest(q)];
    return (p.position - q).dot(p.normal) >= 0.0;
}

template <int D>
bool is_inside_voting(const KdTree<D>& index, const Vec<D>& q, int n_votes) {
    if (n_votes < 1) throw std::invalid_argument("voting needs n_votes >= 1");
    if (n_votes == 1) return is_inside_single(index, q);
    thread_local std::vector<typename KdTree<D>::Hit> hits;
    index.knn(q, n_votes, hits);
    int inside = 0;
    for (const auto& hit : hits) {
        const OrientedPoint<D>& p = index.cloud()[hit.index];
        if ((p.position - q).dot(p.normal) >= 0.0) ++inside;
    }
    // ties (even n_votes) resolve to inside, like the closed half-space test
    return 2 * inside >= static_cast<int>(hits.size());
}

template <int D>
CloudLeaf<D>::CloudLeaf(std::shared_ptr<const KdTree<D>> index, int n_votes)
    : index_(std::move(index)), n_votes_(n_votes) {
    if (!index_) throw std::invalid_argument("cloud leaf needs an index");
    if (n_votes_ < 1) throw std::invalid_argument("cloud leaf needs n_votes >= 1");
}

template <int D>
bool CloudLeaf<D>::contains(const Vec<D>& q) const {
    return is_inside_voting(*index_, q, n_votes_);
}

template <int D>
CsgNode<D>::CsgNode(CsgOp op, PredicatePtr<D> left, PredicatePtr<D> right)
    : op_(op), left_(std::move(left)), right_(std::move(right)) {
    if (!left_ || !right_) throw std::invalid_argument("csg node needs two children");
}

template <int D>
bool CsgNode<D>::contains(const Vec<D>& q) const {
    switch (op_) {
        case CsgOp::Union: return left_->contains(q) || right_->contains(q);
        case CsgOp::Intersection: return left_->contains(q) && right_->contains(q);
        case CsgOp::Difference: return left_->contains(q) && !right_->contains(q);
    }
    return false;
}

double regularized_delta(double x, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("delta needs epsilon > 0");
    if (std::abs(x) > epsilon) return 0.0;
    return 0.5 / epsilon * (1.0 + std::cos(std::numbers::pi * x / epsilon));
}

template <int D>
DeltaBandSpec<D>::DeltaBandSpec(std::shared_ptr<const KdTree<D>> boundary, double epsilon,
                                int n_neigh)
    : boundary_(std::move(boundary)), epsilon_(epsilon), n_neigh_(n_neigh) {
    if (!boundary_) throw std::invalid_argument("delta band needs a boundary index");
    if (!(epsilon_ > 0.0)) throw std::invalid_argument("delta band needs epsilon > 0");
    if (n_neigh_ < D) throw std::invalid_argument("delta band needs n_neigh >= d");
    spacing_ = boundary_->median_spacing();

    const auto& points = boundary_->cloud().points();
    planes_.reserve(points.size());
    std::vector<typename KdTree<D>::Hit> hits;
    std::vector<Vec<D>> positions, normals;
    for (const auto& center : points) {
        boundary_->knn(center.position, n_neigh_, hits);
        positions.clear();
        normals.clear();
        for (const auto& hit : hits) {
            positions.push_back(boundary_->cloud()[hit.index].position);
            normals.push_back(boundary_->cloud()[hit.index].normal);
        }
        planes_.push_back(pca_plane<D>(positions, &normals));
    }
}

template <int D>
double DeltaBandSpec<D>::distance(const Vec<D>& q) const {
    int unused;
    return distance(q, unused);
}

template <int D>
double DeltaBandSpec<D>::distance(const Vec<D>& q, int& nearest_index) const {
    nearest_index = boundary_->nearest(q);
    return planes_[nearest_index].distance(q);
}

namespace {

template <int D>
Vec<D> seed_coordinate(const Aabb<D>& box, const Eigen::Matrix<int, D, 1>& id, int m) {
    Vec<D> x;
    for (int a = 0; a < D; ++a)
        x[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * id[a] / static_cast<double>(m - 1);
    return x;
}

}  // namespace

template <int D>
CutState cut_state(const Predicate<D>& predicate, const Aabb<D>& box, int seeds_per_axis) {
    if (seeds_per_axis < 2) throw std::invalid_argument("cut_state needs seeds >= 2");
    const int m = seeds_per_axis;
    bool any_inside = false;
    bool any_outside = false;
    Eigen::Matrix<int, D, 1> id = Eigen::Matrix<int, D, 1>::Zero();
    const int total = static_cast<int>(std::pow(m, D) + 0.5);
    for (int flat = 0; flat < total; ++flat) {
        int rest = flat;
        for (int a = 0; a < D; ++a) {
            id[a] = rest % m;
            rest /= m;
        }
        if (predicate.contains(seed_coordinate(box, id, m)))
            any_inside = true;
        else
            any_outside = true;
        if (any_inside && any_outside) return CutState::Cut;
    }
    return any_inside ? CutState::Inside : CutState::Outside;
}

template bool is_inside_single<2>(const KdTree<2>&, const Vec2&);
template bool is_inside_single<3>(const KdTree<3>&, const Vec3&);
template bool is_inside_voting<2>(const KdTree<2>&, const Vec2&, int);
template bool is_inside_voting<3>(const KdTree<3>&, const Vec3&, int);
template class CloudLeaf<2>;
template class CloudLeaf<3>;
template class CsgNode<2>;
template class CsgNode<3>;
template class DeltaBandSpec<2>;
template class DeltaBandSpec<3>;
template CutState cut_state<2>(const Predicate<2>&, const Aabb2&, int);
template CutState cut_state<3>(const Predicate<3>&, const Aabb3&, int);

}  // namespace pcfcm
