#include "pcfcm/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcfcm {

GaussRule1D gauss_rule(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("gauss rule needs 1 <= n <= 64");
    GaussRule1D rule;
    rule.n = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; only the
    // lower half is computed, the rest follows by symmetry.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double pm1 = x;  // P_1
            double pm2 = 1.0;
            for (int j = 2; j <= n; ++j) {
                const double pj = ((2.0 * j - 1.0) * x * pm1 - (j - 1.0) * pm2) / j;
                pm2 = pm1;
                pm1 = pj;
            }
            dp = n * (x * pm1 - pm2) / (x * x - 1.0);
            const double dx = pm1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.nodes[n - 1 - i] = -x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

namespace {

void subdivide(const Predicate<2>& predicate, const CellGeometry& cell, const Aabb2& local_box,
               int level, const SpaceTreeParams& params, std::vector<IntegrationLeaf>& leaves) {
    const int seeds = level == 0 ? params.top_seeds : params.recursion_seeds;
    const CutState state = cut_state(predicate, cell.physical_box(local_box), seeds);
    if (state != CutState::Cut || level == params.max_depth) {
        leaves.push_back({level, local_box, state == CutState::Cut});
        return;
    }
    const Vec2 mid = local_box.center();
    const Vec2 lo = local_box.lo;
    const Vec2 hi = local_box.hi;
    subdivide(predicate, cell, {lo, mid}, level + 1, params, leaves);
    subdivide(predicate, cell, {Vec2(mid[0], lo[1]), Vec2(hi[0], mid[1])}, level + 1, params,
              leaves);
    subdivide(predicate, cell, {Vec2(lo[0], mid[1]), Vec2(mid[0], hi[1])}, level + 1, params,
              leaves);
    subdivide(predicate, cell, {mid, hi}, level + 1, params, leaves);
}

}  // namespace

std::vector<IntegrationLeaf> build_space_tree(const Predicate<2>& predicate,
                                              const CellGeometry& cell,
                                              const SpaceTreeParams& params) {
    if (params.max_depth < 0) throw std::invalid_argument("spacetree needs max_depth >= 0");
    std::vector<IntegrationLeaf> leaves;
    subdivide(predicate, cell, Aabb2{Vec2(-1.0, -1.0), Vec2(1.0, 1.0)}, 0, params, leaves);
    return leaves;
}

void leaf_points(const IntegrationLeaf& leaf, const GaussRule1D& rule, const CellGeometry& cell,
                 std::vector<QuadraturePoint>& out) {
    const Vec2 half = 0.5 * leaf.local_box.extent();
    const Vec2 mid = leaf.local_box.center();
    const double scale = half[0] * half[1] * cell.jacobian_determinant();
    for (int j = 0; j < rule.n; ++j) {
        for (int i = 0; i < rule.n; ++i) {
            QuadraturePoint point;
            point.local = mid + Vec2(half[0] * rule.nodes[i], half[1] * rule.nodes[j]);
            point.physical = cell.to_physical(point.local);
            point.weight = rule.weights[i] * rule.weights[j] * scale;
            out.push_back(point);
        }
    }
}

}  // namespace pcfcm
