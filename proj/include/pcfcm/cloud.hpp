#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <vector>

namespace pcfcm {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

/// Axis-aligned bounding box.
template <int D>
struct Aabb {
    Vec<D> lo = Vec<D>::Zero();
    Vec<D> hi = Vec<D>::Zero();

    bool contains(const Vec<D>& x) const {
        return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }

    Vec<D> center() const { return 0.5 * (lo + hi); }
    Vec<D> extent() const { return hi - lo; }

    /// Squared distance from x to the box, zero if x lies inside.
    double squared_exterior_distance(const Vec<D>& x) const {
        double d2 = 0.0;
        for (int i = 0; i < D; ++i) {
            const double d = std::max({lo[i] - x[i], 0.0, x[i] - hi[i]});
            d2 += d * d;
        }
        return d2;
    }
};

using Aabb2 = Aabb<2>;
using Aabb3 = Aabb<3>;

/// A boundary sample: position plus unit normal pointing from the material
/// into the exterior.
template <int D>
struct OrientedPoint {
    Vec<D> position;
    Vec<D> normal;
};

template <int D>
class OrientedPointCloud {
public:
    explicit OrientedPointCloud(std::vector<OrientedPoint<D>> points);

    int size() const { return static_cast<int>(points_.size()); }
    const OrientedPoint<D>& operator[](int i) const { return points_[i]; }
    const std::vector<OrientedPoint<D>>& points() const { return points_; }
    const Aabb<D>& bounds() const { return bounds_; }

private:
    std::vector<OrientedPoint<D>> points_;
    Aabb<D> bounds_;
};

/// Reads "x y nx ny" (d=2) or "x y z nx ny nz" (d=3) lines. Lines starting
/// with '#' and blank lines are skipped; CRLF input is accepted. Normals are
/// renormalized to unit length; a zero-length normal is an error.
template <int D>
OrientedPointCloud<D> load_cloud(std::istream& in);

template <int D>
OrientedPointCloud<D> load_cloud_file(const std::string& path);

/// Whether the sampled curve bounds a hole in surrounding material or the
/// outline of a solid body. Controls which way the stored normals point
/// (always material -> exterior).
enum class CloudOrientation { Hole, Solid };

OrientedPointCloud<2> generate_circle_cloud(const Vec2& center, double radius, int n,
                                            CloudOrientation orientation);

/// Samples (a cos t, b sin t) at n uniform parameter values with exact
/// analytic normals.
OrientedPointCloud<2> generate_ellipse_cloud(const Vec2& center, double a, double b, int n,
                                             CloudOrientation orientation);

/// Static k-d tree over cloud positions. Nearest-neighbor results are ordered
/// by (squared distance, point index), so ties resolve to the lowest index and
/// queries agree exactly with a brute-force scan.
template <int D>
class KdTree {
public:
    struct Hit {
        int index;
        double squared_distance;
    };

    explicit KdTree(std::shared_ptr<const OrientedPointCloud<D>> cloud);

    const OrientedPointCloud<D>& cloud() const { return *cloud_; }
    std::shared_ptr<const OrientedPointCloud<D>> cloud_ptr() const { return cloud_; }

    /// k nearest points, ascending by (squared distance, index). Returns
    /// min(k, size) hits.
    void knn(const Vec<D>& q, int k, std::vector<Hit>& out) const;
    std::vector<Hit> knn(const Vec<D>& q, int k) const;

    int nearest(const Vec<D>& q) const;

    /// Median distance between each point and its nearest other point; a
    /// robust sample-spacing estimate.
    double median_spacing() const;

private:
    struct Node {
        Aabb<D> box;
        int left = -1;   // child nodes, -1 for leaves
        int right = -1;
        int begin = 0;   // index range into order_ for leaves
        int end = 0;
    };

    int build(int begin, int end);
    void search(int node, const Vec<D>& q, int k, std::vector<Hit>& heap) const;

    std::shared_ptr<const OrientedPointCloud<D>> cloud_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Least-squares plane (line in 2D) through a set of points. The normal is
/// the eigenvector of the smallest covariance eigenvalue; its sign follows the
/// mean of `normals` when given, otherwise the first nonzero component is made
/// positive. Throws if all points coincide.
template <int D>
struct FittedPlane {
    Vec<D> centroid;
    Vec<D> normal;

    double distance(const Vec<D>& q) const { return std::abs((q - centroid).dot(normal)); }
};

template <int D>
FittedPlane<D> pca_plane(const std::vector<Vec<D>>& points,
                         const std::vector<Vec<D>>* normals = nullptr);

extern template class OrientedPointCloud<2>;
extern template class OrientedPointCloud<3>;
extern template class KdTree<2>;
extern template class KdTree<3>;
extern template OrientedPointCloud<2> load_cloud<2>(std::istream&);
extern template OrientedPointCloud<3> load_cloud<3>(std::istream&);
extern template OrientedPointCloud<2> load_cloud_file<2>(const std::string&);
extern template OrientedPointCloud<3> load_cloud_file<3>(const std::string&);
extern template FittedPlane<2> pca_plane<2>(const std::vector<Vec2>&, const std::vector<Vec2>*);
extern template FittedPlane<3> pca_plane<3>(const std::vector<Vec3>&, const std::vector<Vec3>*);

}  // namespace pcfcm
