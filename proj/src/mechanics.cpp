#include "pcfcm/mechanics.hpp"

#include <cmath>
#include <stdexcept>

namespace pcfcm {

void Material::validate() const {
    if (!(youngs_modulus > 0.0)) throw std::invalid_argument("material needs E > 0");
    if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
        throw std::invalid_argument("material needs 0 <= nu < 0.5");
    if (!plane_stress) throw std::invalid_argument("only plane stress is implemented");
}

Eigen::Matrix3d constitutive_plane_stress(double youngs_modulus, double poisson_ratio) {
    const double factor = youngs_modulus / (1.0 - poisson_ratio * poisson_ratio);
    Eigen::Matrix3d c;
    c << factor, factor * poisson_ratio, 0.0,
         factor * poisson_ratio, factor, 0.0,
         0.0, 0.0, factor * 0.5 * (1.0 - poisson_ratio);
    return c;
}

double alpha_at(const Predicate<2>& domain, const Vec2& x, double alpha_exponent) {
    return domain.contains(x) ? 1.0 : std::pow(10.0, -alpha_exponent);
}

SpaceTreeParams IntegrationParams::tree(int p) const {
    SpaceTreeParams params;
    params.max_depth = max_depth;
    params.top_seeds = top_seeds > 0 ? top_seeds : std::max(p + 1, 4);
    params.recursion_seeds = recursion_seeds;
    return params;
}

void ProblemDefinition::validate() const {
    material.validate();
    if (!domain) throw std::invalid_argument("problem needs a domain predicate");
    if (integration.max_depth < 0 || integration.max_depth > 12)
        throw std::invalid_argument("spacetree depth must lie in 0..12");
    for (const auto& d : dirichlet)
        for (const auto& t : tractions)
            if (d.face == t.face)
                throw std::invalid_argument("Dirichlet and Neumann assigned to the same face");
}

namespace {

// Rows r0..r0+2 of G receive sqrt(w alpha) R B for one quadrature point,
// where R is the upper Cholesky factor of C and B the strain-displacement
// matrix built from physical gradients.
void emit_scaled_rows(Eigen::MatrixXd& g, int r0, double scale, const Eigen::Matrix3d& r,
                      const Basis2D& basis, double inv_hx2, double inv_hy2) {
    const int m = basis.count();
    const auto& grads = basis.gradients();
    for (int i = 0; i < m; ++i) {
        const double dndx = grads(i, 0) * inv_hx2;
        const double dndy = grads(i, 1) * inv_hy2;
        g(r0 + 0, 2 * i) = scale * (r(0, 0) * dndx + r(0, 2) * dndy);
        g(r0 + 1, 2 * i) = scale * (r(1, 2) * dndy);
        g(r0 + 2, 2 * i) = scale * (r(2, 2) * dndy);
        g(r0 + 0, 2 * i + 1) = scale * (r(0, 1) * dndy + r(0, 2) * dndx);
        g(r0 + 1, 2 * i + 1) = scale * (r(1, 1) * dndy + r(1, 2) * dndx);
        g(r0 + 2, 2 * i + 1) = scale * (r(2, 2) * dndx);
    }
}

}  // namespace

Eigen::MatrixXd element_stiffness(const CellGeometry& cell, Basis2D& basis,
                                  const Predicate<2>& domain, const Material& material,
                                  const IntegrationParams& params, AssemblyStats* stats) {
    material.validate();
    const int p = basis.order();
    const int dofs = 2 * basis.count();
    const Eigen::Matrix3d c =
        constitutive_plane_stress(material.youngs_modulus, material.poisson_ratio);
    const Eigen::Matrix3d r = Eigen::LLT<Eigen::Matrix3d>(c).matrixU();

    const GaussRule1D rule = gauss_rule(params.rule_order(p));
    const auto leaves = build_space_tree(domain, cell, params.tree(p));

    const double inv_hx2 = 2.0 / cell.hx();
    const double inv_hy2 = 2.0 / cell.hy();

    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(dofs, dofs);
    Eigen::MatrixXd g(3 * rule.n * rule.n, dofs);
    std::vector<QuadraturePoint> points;
    points.reserve(rule.n * rule.n);

    for (const auto& leaf : leaves) {
        points.clear();
        leaf_points(leaf, rule, cell, points);
        for (std::size_t k = 0; k < points.size(); ++k) {
            QuadraturePoint& point = points[k];
            point.alpha = alpha_at(domain, point.physical, material.alpha_exponent);
            basis.eval(point.local[0], point.local[1]);
            emit_scaled_rows(g, static_cast<int>(3 * k), std::sqrt(point.weight * point.alpha),
                             r, basis, inv_hx2, inv_hy2);
        }
        const auto rows = static_cast<Eigen::Index>(3 * points.size());
        ke.selfadjointView<Eigen::Lower>().rankUpdate(g.topRows(rows).transpose(), 1.0);
        if (stats) stats->quadrature_points += static_cast<long>(points.size());
    }
    if (stats) {
        stats->leaves += static_cast<long>(leaves.size());
        stats->cell_leaf_counts.push_back(static_cast<long>(leaves.size()));
    }
    ke.triangularView<Eigen::StrictlyUpper>() = ke.transpose();
    return ke;
}

LinearSystem assemble_global(const ProblemDefinition& problem) {
    problem.validate();
    const EmbeddingMesh& mesh = problem.mesh;
    const int cells = mesh.cell_count();
    std::vector<Eigen::MatrixXd> element_matrices(cells);
    std::vector<AssemblyStats> cell_stats(cells);

#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < cells; ++e) {
        Basis2D basis(mesh.order());
        element_matrices[e] = element_stiffness(mesh.cell(e), basis, *problem.domain,
                                                problem.material, problem.integration,
                                                &cell_stats[e]);
    }

    LinearSystem system;
    const int n = mesh.dof_count();
    system.load = Eigen::VectorXd::Zero(n);
    system.eliminated.assign(n, 0);

    std::vector<Eigen::Triplet<double>> triplets;
    const int block = 2 * (mesh.order() + 1) * (mesh.order() + 1);
    triplets.reserve(static_cast<std::size_t>(cells) * block * block);
    for (int e = 0; e < cells; ++e) {
        const auto& scalars = mesh.cell_scalars(e % mesh.nx(), e / mesh.nx());
        const auto& ke = element_matrices[e];
        for (int a = 0; a < block; ++a) {
            const int ga = 2 * scalars[a / 2] + a % 2;
            for (int b = 0; b < block; ++b)
                triplets.emplace_back(ga, 2 * scalars[b / 2] + b % 2, ke(a, b));
        }
        system.stats.leaves += cell_stats[e].leaves;
        system.stats.quadrature_points += cell_stats[e].quadrature_points;
        system.stats.cell_leaf_counts.push_back(
            cell_stats[e].cell_leaf_counts.empty() ? 0 : cell_stats[e].cell_leaf_counts.front());
    }
    system.stiffness.resize(n, n);
    system.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    return system;
}

namespace {

struct FaceTrace {
    // Cells along the face and the fixed local coordinate on it.
    int fixed_axis;     // 0: face at constant x, 1: constant y
    double fixed_local; // -1 or +1
};

FaceTrace face_trace(Face face) {
    switch (face) {
        case Face::XMin: return {0, -1.0};
        case Face::XMax: return {0, 1.0};
        case Face::YMin: return {1, -1.0};
        case Face::YMax: return {1, 1.0};
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Eigen::VectorXd conforming_traction_load(const ProblemDefinition& problem, Face face,
                                         const Vec2& traction) {
    const EmbeddingMesh& mesh = problem.mesh;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.dof_count());
    const FaceTrace trace = face_trace(face);
    const int p = mesh.order();
    const GaussRule1D rule = gauss_rule(p + 1);
    Basis2D basis(p);

    const int along = trace.fixed_axis == 0 ? mesh.ny() : mesh.nx();
    for (int c = 0; c < along; ++c) {
        int cx, cy;
        if (trace.fixed_axis == 0) {
            cx = trace.fixed_local < 0 ? 0 : mesh.nx() - 1;
            cy = c;
        } else {
            cx = c;
            cy = trace.fixed_local < 0 ? 0 : mesh.ny() - 1;
        }
        const CellGeometry cell = mesh.cell(cx, cy);
        const double edge_jacobian = 0.5 * (trace.fixed_axis == 0 ? cell.hy() : cell.hx());
        const auto& scalars = mesh.cell_scalars(cx, cy);
        for (int gp = 0; gp < rule.n; ++gp) {
            Vec2 local;
            local[trace.fixed_axis] = trace.fixed_local;
            local[1 - trace.fixed_axis] = rule.nodes[gp];
            basis.eval(local[0], local[1]);
            const double w = rule.weights[gp] * edge_jacobian;
            for (int s = 0; s < basis.count(); ++s) {
                const double nw = w * basis.values()[s];
                f[2 * scalars[s] + 0] += nw * traction[0];
                f[2 * scalars[s] + 1] += nw * traction[1];
            }
        }
    }
    return f;
}

namespace {

// Conservative test whether a box can reach the delta band: distance from
// the box center to the nearest boundary sample, reduced by the box half
// diagonal, compared against epsilon plus twice the sample spacing.
bool box_may_touch_band(const Aabb2& box, const DeltaBandSpec<2>& band) {
    const Vec2 center = box.center();
    const int nearest = band.boundary().nearest(center);
    const double d = (band.boundary().cloud()[nearest].position - center).norm();
    const double reach = band.epsilon() + 2.0 * band.sample_spacing();
    return d - 0.5 * box.extent().norm() <= reach;
}

void band_leaves(const CellGeometry& cell, const DeltaBandSpec<2>& band, const Aabb2& local_box,
                 int level, int max_depth, std::vector<Aabb2>& out) {
    if (!box_may_touch_band(cell.physical_box(local_box), band)) return;
    if (level == max_depth) {
        out.push_back(local_box);
        return;
    }
    const Vec2 mid = local_box.center();
    const Vec2 lo = local_box.lo;
    const Vec2 hi = local_box.hi;
    band_leaves(cell, band, {lo, mid}, level + 1, max_depth, out);
    band_leaves(cell, band, {Vec2(mid[0], lo[1]), Vec2(hi[0], mid[1])}, level + 1, max_depth, out);
    band_leaves(cell, band, {Vec2(lo[0], mid[1]), Vec2(mid[0], hi[1])}, level + 1, max_depth, out);
    band_leaves(cell, band, {mid, hi}, level + 1, max_depth, out);
}

}  // namespace

Eigen::VectorXd delta_neumann_load(const ProblemDefinition& problem, const DeltaNeumann& load,
                                   AssemblyStats* stats) {
    const EmbeddingMesh& mesh = problem.mesh;
    const DeltaBandSpec<2>& band = load.band;
    const GaussRule1D rule = gauss_rule(problem.integration.band_rule);
    const int cells = mesh.cell_count();

    std::vector<Eigen::VectorXd> cell_loads(cells);
    std::vector<long> cell_points(cells, 0);

#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < cells; ++e) {
        const CellGeometry cell = mesh.cell(e);
        if (!box_may_touch_band(cell.extent, band)) continue;

        std::vector<Aabb2> leaves;
        band_leaves(cell, band, Aabb2{Vec2(-1.0, -1.0), Vec2(1.0, 1.0)}, 0,
                    problem.integration.band_depth, leaves);
        if (leaves.empty()) continue;

        Basis2D basis(mesh.order());
        Eigen::VectorXd fe = Eigen::VectorXd::Zero(2 * basis.count());
        long points = 0;
        for (const auto& leaf_box : leaves) {
            const Vec2 half = 0.5 * leaf_box.extent();
            const Vec2 mid = leaf_box.center();
            const double scale = half[0] * half[1] * cell.jacobian_determinant();
            for (int j = 0; j < rule.n; ++j) {
                for (int i = 0; i < rule.n; ++i) {
                    const Vec2 local = mid + Vec2(half[0] * rule.nodes[i], half[1] * rule.nodes[j]);
                    const Vec2 x = cell.to_physical(local);
                    int nearest = -1;
                    const double distance = band.distance(x, nearest);
                    const double delta = regularized_delta(distance, band.epsilon());
                    ++points;
                    if (delta == 0.0) continue;
                    Vec2 traction;
                    if (load.kind == DeltaNeumann::Kind::ConstantTraction) {
                        traction = load.traction;
                    } else {
                        traction = -load.pressure * band.boundary().cloud()[nearest].normal;
                    }
                    basis.eval(local[0], local[1]);
                    const double w = rule.weights[i] * rule.weights[j] * scale * delta;
                    for (int s = 0; s < basis.count(); ++s) {
                        const double nw = w * basis.values()[s];
                        fe[2 * s + 0] += nw * traction[0];
                        fe[2 * s + 1] += nw * traction[1];
                    }
                }
            }
        }
        cell_loads[e] = std::move(fe);
        cell_points[e] = points;
    }

    Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.dof_count());
    for (int e = 0; e < cells; ++e) {
        if (cell_loads[e].size() == 0) continue;
        const auto& scalars = mesh.cell_scalars(e % mesh.nx(), e / mesh.nx());
        for (int s = 0; s < static_cast<int>(scalars.size()); ++s) {
            f[2 * scalars[s] + 0] += cell_loads[e][2 * s + 0];
            f[2 * scalars[s] + 1] += cell_loads[e][2 * s + 1];
        }
        if (stats) stats->band_quadrature_points += cell_points[e];
    }
    return f;
}

Eigen::VectorXd body_force_load(const ProblemDefinition& problem, const Vec2& body_force) {
    const EmbeddingMesh& mesh = problem.mesh;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.dof_count());
    if (body_force.isZero()) return f;

    const GaussRule1D rule = gauss_rule(problem.integration.rule_order(mesh.order()));
    Basis2D basis(mesh.order());
    std::vector<QuadraturePoint> points;
    for (int e = 0; e < mesh.cell_count(); ++e) {
        const CellGeometry cell = mesh.cell(e);
        const auto leaves =
            build_space_tree(*problem.domain, cell, problem.integration.tree(mesh.order()));
        const auto& scalars = mesh.cell_scalars(e % mesh.nx(), e / mesh.nx());
        for (const auto& leaf : leaves) {
            points.clear();
            leaf_points(leaf, rule, cell, points);
            for (const auto& point : points) {
                // load integral runs over the physical domain only
                if (!problem.domain->contains(point.physical)) continue;
                basis.eval(point.local[0], point.local[1]);
                for (int s = 0; s < basis.count(); ++s) {
                    const double nw = point.weight * basis.values()[s];
                    f[2 * scalars[s] + 0] += nw * body_force[0];
                    f[2 * scalars[s] + 1] += nw * body_force[1];
                }
            }
        }
    }
    return f;
}

void apply_dirichlet(LinearSystem& system, const EmbeddingMesh& mesh,
                     const std::vector<DirichletFace>& constraints) {
    const int n = mesh.dof_count();
    if (system.stiffness.rows() != n) throw std::invalid_argument("system/mesh size mismatch");
    system.eliminated.assign(n, 0);
    for (const auto& constraint : constraints) {
        if (!constraint.fix_x && !constraint.fix_y) continue;
        for (int scalar : mesh.face_scalars(constraint.face)) {
            if (constraint.fix_x) system.eliminated[2 * scalar + 0] = 1;
            if (constraint.fix_y) system.eliminated[2 * scalar + 1] = 1;
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(system.stiffness.nonZeros()) + n);
    for (int col = 0; col < system.stiffness.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.stiffness, col); it; ++it) {
            if (!system.eliminated[it.row()] && !system.eliminated[it.col()])
                triplets.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int i = 0; i < n; ++i)
        if (system.eliminated[i]) triplets.emplace_back(i, i, 1.0);

    system.constrained.resize(n, n);
    system.constrained.setFromTriplets(triplets.begin(), triplets.end());
    for (int i = 0; i < n; ++i)
        if (system.eliminated[i]) system.load[i] = 0.0;  // homogeneous constraints
}

}  // namespace pcfcm
