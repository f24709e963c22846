#include "pcfcm/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace pcfcm {

void eval_shape_1d(int p, double xi, Eigen::VectorXd& values, Eigen::VectorXd& derivatives) {
    if (p < 1) throw std::invalid_argument("shape functions need p >= 1");
    values.resize(p + 1);
    derivatives.resize(p + 1);
    values[0] = 0.5 * (1.0 - xi);
    values[1] = 0.5 * (1.0 + xi);
    derivatives[0] = -0.5;
    derivatives[1] = 0.5;
    if (p == 1) return;

    // Legendre values up to degree p via the three-term recurrence.
    double pm2 = 1.0;   // P_0
    double pm1 = xi;    // P_1
    for (int i = 2; i <= p; ++i) {
        const double scale = 1.0 / std::sqrt(2.0 * (2.0 * i - 1.0));
        double pi;
        if (i == 2) {
            pi = 0.5 * (3.0 * xi * xi - 1.0);
        } else {
            pi = ((2.0 * i - 1.0) * xi * pm1 - (i - 1.0) * pm2) / i;
        }
        values[i] = (pi - pm2) * scale;
        derivatives[i] = std::sqrt((2.0 * i - 1.0) / 2.0) * pm1;
        pm2 = pm1;
        pm1 = pi;
    }
}

Shape1D eval_shape_1d(int p, double xi) {
    Shape1D shape;
    eval_shape_1d(p, xi, shape.values, shape.derivatives);
    return shape;
}

Basis2D::Basis2D(int p) : p_(p) {
    if (p < 1) throw std::invalid_argument("basis needs p >= 1");
    const int n = count();
    values_.resize(n);
    gradients_.resize(n, 2);
}

void Basis2D::eval(double xi, double eta) {
    eval_shape_1d(p_, xi, nx_, dnx_);
    eval_shape_1d(p_, eta, ny_, dny_);
    for (int iy = 0; iy <= p_; ++iy) {
        const int row = iy * (p_ + 1);
        for (int ix = 0; ix <= p_; ++ix) {
            values_[row + ix] = nx_[ix] * ny_[iy];
            gradients_(row + ix, 0) = dnx_[ix] * ny_[iy];
            gradients_(row + ix, 1) = nx_[ix] * dny_[iy];
        }
    }
}

EmbeddingMesh::EmbeddingMesh(const Aabb2& box, int nx, int ny, int p)
    : box_(box), nx_(nx), ny_(ny), p_(p) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("mesh needs nx, ny >= 1");
    if (p < 1) throw std::invalid_argument("mesh needs p >= 1");
    if (!((box.hi.array() > box.lo.array()).all()))
        throw std::invalid_argument("mesh box is degenerate");

    cell_scalars_.resize(cell_count());
    for (int cy = 0; cy < ny_; ++cy) {
        for (int cx = 0; cx < nx_; ++cx) {
            auto& scalars = cell_scalars_[cy * nx_ + cx];
            scalars.resize((p_ + 1) * (p_ + 1));
            for (int iy = 0; iy <= p_; ++iy)
                for (int ix = 0; ix <= p_; ++ix)
                    scalars[iy * (p_ + 1) + ix] = global_scalar(cx, cy, ix, iy);
        }
    }
}

CellGeometry EmbeddingMesh::cell(int cx, int cy) const {
    const Vec2 h((box_.hi[0] - box_.lo[0]) / nx_, (box_.hi[1] - box_.lo[1]) / ny_);
    CellGeometry geometry;
    geometry.cx = cx;
    geometry.cy = cy;
    geometry.extent.lo = box_.lo + Vec2(cx * h[0], cy * h[1]);
    geometry.extent.hi = box_.lo + Vec2((cx + 1) * h[0], (cy + 1) * h[1]);
    return geometry;
}

int EmbeddingMesh::global_scalar(int cx, int cy, int ix, int iy) const {
    const int gx = line_index(cx, ix, p_);
    const int gy = line_index(cy, iy, p_);
    return gy * (nx_ * p_ + 1) + gx;
}

const std::vector<int>& EmbeddingMesh::cell_scalars(int cx, int cy) const {
    return cell_scalars_[cy * nx_ + cx];
}

std::vector<int> EmbeddingMesh::face_scalars(Face face) const {
    const int lines_x = nx_ * p_ + 1;
    const int lines_y = ny_ * p_ + 1;
    std::vector<int> scalars;
    switch (face) {
        case Face::XMin:
        case Face::XMax: {
            const int gx = face == Face::XMin ? 0 : lines_x - 1;
            for (int gy = 0; gy < lines_y; ++gy) scalars.push_back(gy * lines_x + gx);
            break;
        }
        case Face::YMin:
        case Face::YMax: {
            const int gy = face == Face::YMin ? 0 : lines_y - 1;
            for (int gx = 0; gx < lines_x; ++gx) scalars.push_back(gy * lines_x + gx);
            break;
        }
    }
    return scalars;
}

std::pair<int, int> EmbeddingMesh::locate(const Vec2& x) const {
    const Vec2 rel = (x - box_.lo).cwiseQuotient(box_.extent());
    const int cx = std::clamp(static_cast<int>(rel[0] * nx_), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>(rel[1] * ny_), 0, ny_ - 1);
    return {cx, cy};
}

}  // namespace pcfcm
