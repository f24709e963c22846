#pragma once

#include "pcfcm/basis.hpp"
#include "pcfcm/membership.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pcfcm {

/// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n - 1.
struct GaussRule1D {
    int n = 0;
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussRule1D gauss_rule(int n);

/// One tile of the composed integration domain of a cell, in parent-cell
/// local coordinates. Leaves of a spacetree tile the cell exactly.
struct IntegrationLeaf {
    int level = 0;
    Aabb2 local_box{Vec2(-1.0, -1.0), Vec2(1.0, 1.0)};
    bool cut = false;
};

struct SpaceTreeParams {
    int max_depth = 8;      // k
    int top_seeds = 4;      // seed grid per axis on the whole cell
    int recursion_seeds = 3;
};

/// Recursive quadtree partition of a cell: subcells cut by the domain
/// boundary are split into four equal children until max_depth.
std::vector<IntegrationLeaf> build_space_tree(const Predicate<2>& predicate,
                                              const CellGeometry& cell,
                                              const SpaceTreeParams& params);

struct QuadraturePoint {
    Vec2 local;       // parent-cell coordinates
    Vec2 physical;
    double weight;    // includes the leaf fraction and the cell Jacobian
    double alpha = 1.0;
};

/// Tensor Gauss points of a leaf, mapped to parent-cell and physical
/// coordinates; weights carry the leaf area fraction and cell Jacobian so
/// that the weights of any complete tree sum to the cell area.
void leaf_points(const IntegrationLeaf& leaf, const GaussRule1D& rule, const CellGeometry& cell,
                 std::vector<QuadraturePoint>& out);

}  // namespace pcfcm
