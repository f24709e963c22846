#include "pcfcm/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pcfcm {

namespace {

template <int D>
Aabb<D> envelope(const std::vector<OrientedPoint<D>>& points) {
    Aabb<D> box;
    box.lo = points.front().position;
    box.hi = points.front().position;
    for (const auto& p : points) {
        box.lo = box.lo.cwiseMin(p.position);
        box.hi = box.hi.cwiseMax(p.position);
    }
    return box;
}

}  // namespace

template <int D>
OrientedPointCloud<D>::OrientedPointCloud(std::vector<OrientedPoint<D>> points)
    : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("point cloud is empty");
    for (const auto& p : points_) {
        if (!p.position.allFinite() || !p.normal.allFinite())
            throw std::invalid_argument("point cloud contains non-finite values");
    }
    bounds_ = envelope(points_);
}

template <int D>
OrientedPointCloud<D> load_cloud(std::istream& in) {
    std::vector<OrientedPoint<D>> points;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        OrientedPoint<D> p;
        for (int i = 0; i < D; ++i) fields >> p.position[i];
        for (int i = 0; i < D; ++i) fields >> p.normal[i];
        std::string trailing;
        if (!fields || (fields >> trailing)) {
            throw std::runtime_error("cloud line " + std::to_string(line_number) +
                                     ": expected " + std::to_string(2 * D) + " reals, got '" +
                                     line + "'");
        }
        const double len = p.normal.norm();
        if (!(len > 0.0) || !std::isfinite(len)) {
            throw std::runtime_error("cloud line " + std::to_string(line_number) +
                                     ": zero-length normal");
        }
        p.normal /= len;
        points.push_back(p);
    }
    if (points.empty()) throw std::runtime_error("cloud stream holds no points");
    return OrientedPointCloud<D>(std::move(points));
}

template <int D>
OrientedPointCloud<D> load_cloud_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cloud file '" + path + "'");
    return load_cloud<D>(in);
}

OrientedPointCloud<2> generate_circle_cloud(const Vec2& center, double radius, int n,
                                            CloudOrientation orientation) {
    if (n < 3) throw std::invalid_argument("circle cloud needs n >= 3");
    if (!(radius > 0.0)) throw std::invalid_argument("circle cloud needs radius > 0");
    const double sign = orientation == CloudOrientation::Hole ? -1.0 : 1.0;
    std::vector<OrientedPoint<2>> points(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        const Vec2 radial(std::cos(t), std::sin(t));
        points[i].position = center + radius * radial;
        points[i].normal = sign * radial;
    }
    return OrientedPointCloud<2>(std::move(points));
}

OrientedPointCloud<2> generate_ellipse_cloud(const Vec2& center, double a, double b, int n,
                                             CloudOrientation orientation) {
    if (n < 3) throw std::invalid_argument("ellipse cloud needs n >= 3");
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse cloud needs a, b > 0");
    const double sign = orientation == CloudOrientation::Hole ? -1.0 : 1.0;
    std::vector<OrientedPoint<2>> points(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        points[i].position = center + Vec2(a * std::cos(t), b * std::sin(t));
        // gradient of x^2/a^2 + y^2/b^2
        Vec2 normal(std::cos(t) / a, std::sin(t) / b);
        points[i].normal = sign * normal.normalized();
    }
    return OrientedPointCloud<2>(std::move(points));
}

namespace {
constexpr int kLeafSize = 12;
}

template <int D>
KdTree<D>::KdTree(std::shared_ptr<const OrientedPointCloud<D>> cloud)
    : cloud_(std::move(cloud)) {
    if (!cloud_) throw std::invalid_argument("kd-tree needs a cloud");
    order_.resize(cloud_->size());
    for (int i = 0; i < cloud_->size(); ++i) order_[i] = i;
    nodes_.reserve(2 * cloud_->size() / kLeafSize + 8);
    root_ = build(0, cloud_->size());
}

template <int D>
int KdTree<D>::build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box.lo = cloud_->points()[order_[begin]].position;
    node.box.hi = node.box.lo;
    for (int i = begin; i < end; ++i) {
        const Vec<D>& x = cloud_->points()[order_[i]].position;
        node.box.lo = node.box.lo.cwiseMin(x);
        node.box.hi = node.box.hi.cwiseMax(x);
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin > kLeafSize) {
        int axis = 0;
        (node.box.hi - node.box.lo).maxCoeff(&axis);
        const int mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](int a, int b) {
                             const double ca = cloud_->points()[a].position[axis];
                             const double cb = cloud_->points()[b].position[axis];
                             return ca < cb || (ca == cb && a < b);
                         });
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
    }
    return id;
}

template <int D>
void KdTree<D>::search(int node_id, const Vec<D>& q, int k, std::vector<Hit>& best) const {
    const Node& node = nodes_[node_id];
    const auto better = [](const Hit& a, const Hit& b) {
        return a.squared_distance < b.squared_distance ||
               (a.squared_distance == b.squared_distance && a.index < b.index);
    };
    if (node.left < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            Hit hit{idx, (cloud_->points()[idx].position - q).squaredNorm()};
            if (static_cast<int>(best.size()) < k) {
                best.insert(std::upper_bound(best.begin(), best.end(), hit, better), hit);
            } else if (better(hit, best.back())) {
                best.pop_back();
                best.insert(std::upper_bound(best.begin(), best.end(), hit, better), hit);
            }
        }
        return;
    }
    const double dl = nodes_[node.left].box.squared_exterior_distance(q);
    const double dr = nodes_[node.right].box.squared_exterior_distance(q);
    const int first = dl <= dr ? node.left : node.right;
    const int second = dl <= dr ? node.right : node.left;
    // <= so that equal-distance candidates with lower indices are still found
    if (static_cast<int>(best.size()) < k ||
        nodes_[first].box.squared_exterior_distance(q) <= best.back().squared_distance)
        search(first, q, k, best);
    if (static_cast<int>(best.size()) < k ||
        nodes_[second].box.squared_exterior_distance(q) <= best.back().squared_distance)
        search(second, q, k, best);
}

template <int D>
void KdTree<D>::knn(const Vec<D>& q, int k, std::vector<Hit>& out) const {
    if (k < 1) throw std::invalid_argument("knn needs k >= 1");
    out.clear();
    search(root_, q, std::min(k, cloud_->size()), out);
}

template <int D>
std::vector<typename KdTree<D>::Hit> KdTree<D>::knn(const Vec<D>& q, int k) const {
    std::vector<Hit> out;
    knn(q, k, out);
    return out;
}

template <int D>
int KdTree<D>::nearest(const Vec<D>& q) const {
    std::vector<Hit> out;
    out.reserve(1);
    search(root_, q, 1, out);
    return out.front().index;
}

template <int D>
double KdTree<D>::median_spacing() const {
    std::vector<double> d2;
    d2.reserve(cloud_->size());
    std::vector<Hit> hits;
    for (int i = 0; i < cloud_->size(); ++i) {
        knn(cloud_->points()[i].position, 2, hits);
        d2.push_back(hits.size() > 1 ? hits[1].squared_distance : 0.0);
    }
    const auto mid = d2.begin() + d2.size() / 2;
    std::nth_element(d2.begin(), mid, d2.end());
    return std::sqrt(*mid);
}

template <int D>
FittedPlane<D> pca_plane(const std::vector<Vec<D>>& points, const std::vector<Vec<D>>* normals) {
    if (static_cast<int>(points.size()) < D)
        throw std::invalid_argument("pca_plane needs at least d points");
    Vec<D> centroid = Vec<D>::Zero();
    for (const auto& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());

    Eigen::Matrix<double, D, D> covariance = Eigen::Matrix<double, D, D>::Zero();
    for (const auto& p : points) {
        const Vec<D> c = p - centroid;
        covariance += c * c.transpose();
    }
    const double scale = centroid.squaredNorm() + 1.0;
    if (covariance.trace() <= 1e-28 * scale)
        throw std::runtime_error("pca_plane: singular neighborhood (coincident points)");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, D, D>> eig(covariance);
    FittedPlane<D> plane;
    plane.centroid = centroid;
    plane.normal = eig.eigenvectors().col(0);  // smallest eigenvalue first

    double orientation = 0.0;
    if (normals) {
        Vec<D> mean = Vec<D>::Zero();
        for (const auto& n : *normals) mean += n;
        orientation = plane.normal.dot(mean);
    }
    if (orientation == 0.0) {
        for (int i = 0; i < D; ++i) {
            if (std::abs(plane.normal[i]) > 1e-14) {
                orientation = plane.normal[i];
                break;
            }
        }
    }
    if (orientation < 0.0) plane.normal = -plane.normal;
    return plane;
}

template class OrientedPointCloud<2>;
template class OrientedPointCloud<3>;
template class KdTree<2>;
template class KdTree<3>;
template OrientedPointCloud<2> load_cloud<2>(std::istream&);
template OrientedPointCloud<3> load_cloud<3>(std::istream&);
template OrientedPointCloud<2> load_cloud_file<2>(const std::string&);
template OrientedPointCloud<3> load_cloud_file<3>(const std::string&);
template FittedPlane<2> pca_plane<2>(const std::vector<Vec2>&, const std::vector<Vec2>*);
template FittedPlane<3> pca_plane<3>(const std::vector<Vec3>&, const std::vector<Vec3>*);

}  // namespace pcfcm
