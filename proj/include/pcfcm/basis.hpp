#pragma once

#include "pcfcm/cloud.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pcfcm {

/// 1D hierarchic shape functions on [-1, 1]: the two linear vertex modes
/// followed by integrated Legendre modes, which vanish at both vertices.
/// Mode i >= 2 is  N(x) = (P_i(x) - P_{i-2}(x)) / sqrt(2 (2i - 1)).
void eval_shape_1d(int p, double xi, Eigen::VectorXd& values, Eigen::VectorXd& derivatives);

struct Shape1D {
    Eigen::VectorXd values;
    Eigen::VectorXd derivatives;
};

Shape1D eval_shape_1d(int p, double xi);

/// Tensor-product 2D basis evaluation workspace. Scalar function
/// s = iy * (p+1) + ix pairs 1D modes ix and iy.
class Basis2D {
public:
    explicit Basis2D(int p);

    int order() const { return p_; }
    int count() const { return (p_ + 1) * (p_ + 1); }

    /// Values and local-coordinate gradients of all scalar functions at
    /// (xi, eta) in [-1, 1]^2.
    void eval(double xi, double eta);

    const Eigen::VectorXd& values() const { return values_; }
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& gradients() const { return gradients_; }

private:
    int p_;
    Eigen::VectorXd nx_, dnx_, ny_, dny_;
    Eigen::VectorXd values_;
    Eigen::Matrix<double, Eigen::Dynamic, 2> gradients_;
};

/// Axis-aligned cell with its affine reference map.
struct CellGeometry {
    int cx = 0;
    int cy = 0;
    Aabb2 extent;

    double hx() const { return extent.hi[0] - extent.lo[0]; }
    double hy() const { return extent.hi[1] - extent.lo[1]; }
    double jacobian_determinant() const { return 0.25 * hx() * hy(); }

    Vec2 to_physical(const Vec2& local) const {
        return extent.lo + 0.5 * (local + Vec2::Ones()).cwiseProduct(extent.extent());
    }
    Vec2 to_local(const Vec2& physical) const {
        return 2.0 * (physical - extent.lo).cwiseQuotient(extent.extent()) - Vec2::Ones();
    }
    Aabb2 physical_box(const Aabb2& local_box) const {
        return Aabb2{to_physical(local_box.lo), to_physical(local_box.hi)};
    }
};

enum class Face { XMin, XMax, YMin, YMax };

/// Regular nx x ny grid of order-p cells over an embedding box, with the
/// global C0 numbering of the full tensor-product space. Each scalar mode
/// carries two displacement components: dof = 2 * scalar + component.
class EmbeddingMesh {
public:
    EmbeddingMesh(const Aabb2& box, int nx, int ny, int p);

    const Aabb2& box() const { return box_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int order() const { return p_; }
    int cell_count() const { return nx_ * ny_; }

    int scalar_count() const { return (nx_ * p_ + 1) * (ny_ * p_ + 1); }
    int dof_count() const { return 2 * scalar_count(); }

    CellGeometry cell(int cx, int cy) const;
    CellGeometry cell(int flat_index) const { return cell(flat_index % nx_, flat_index / nx_); }

    /// Global 1D line index of local mode i (0 left vertex, 1 right vertex,
    /// m >= 2 internal) in cell column/row c. Vertex lines are shared between
    /// neighboring cells.
    static int line_index(int c, int i, int p) { return i == 0 ? c * p : (i == 1 ? (c + 1) * p : c * p + i - 1); }

    int global_scalar(int cx, int cy, int ix, int iy) const;

    /// Global scalar indices of a cell's (p+1)^2 local functions, local
    /// ordering s = iy * (p+1) + ix.
    const std::vector<int>& cell_scalars(int cx, int cy) const;

    /// Scalar modes with nonzero trace on an embedding-box face.
    std::vector<int> face_scalars(Face face) const;

    /// Cell containing x (clamped to the grid).
    std::pair<int, int> locate(const Vec2& x) const;

private:
    Aabb2 box_;
    int nx_, ny_, p_;
    std::vector<std::vector<int>> cell_scalars_;
};

}  // namespace pcfcm
