#pragma once

#include "pcfcm/basis.hpp"
#include "pcfcm/membership.hpp"
#include "pcfcm/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <vector>

namespace pcfcm {

struct Material {
    double youngs_modulus = 1.0;
    double poisson_ratio = 0.0;
    double alpha_exponent = 8.0;  // fictitious stiffness scale 10^-q
    bool plane_stress = true;

    void validate() const;
};

/// Plane-stress elasticity matrix in Voigt order (eps_xx, eps_yy, gamma_xy).
Eigen::Matrix3d constitutive_plane_stress(double youngs_modulus, double poisson_ratio);

/// Indicator-scaled stiffness factor: 1 inside the material, 10^-q outside.
double alpha_at(const Predicate<2>& domain, const Vec2& x, double alpha_exponent);

struct DirichletFace {
    Face face;
    bool fix_x = false;
    bool fix_y = false;
};

struct ConformingTraction {
    Face face;
    Vec2 traction = Vec2::Zero();
};

/// Neumann data applied over a regularized boundary band instead of a
/// tessellated contour.
struct DeltaNeumann {
    enum class Kind { ConstantTraction, Pressure };

    DeltaBandSpec<2> band;
    Kind kind = Kind::ConstantTraction;
    Vec2 traction = Vec2::Zero();  // ConstantTraction
    double pressure = 0.0;         // Pressure: t(x) = -P * n(x), pushing into the material
};

struct IntegrationParams {
    int max_depth = 8;       // spacetree depth k for the stiffness
    int leaf_rule = 0;       // Gauss points per axis on each leaf; 0 -> p + 1
    int top_seeds = 0;       // cut-detection seeds per axis at cell level; 0 -> max(p + 1, 4)
    int recursion_seeds = 3;
    int band_depth = 8;      // deeper tree for delta bands
    int band_rule = 10;

    SpaceTreeParams tree(int p) const;
    int rule_order(int p) const { return leaf_rule > 0 ? leaf_rule : p + 1; }
};

struct ProblemDefinition {
    EmbeddingMesh mesh;
    PredicatePtr<2> domain;
    Material material;
    std::vector<DirichletFace> dirichlet;
    std::vector<ConformingTraction> tractions;
    std::vector<DeltaNeumann> delta_loads;
    Vec2 body_force = Vec2::Zero();
    IntegrationParams integration;

    void validate() const;
};

struct AssemblyStats {
    long leaves = 0;
    long quadrature_points = 0;
    long band_quadrature_points = 0;
    std::vector<long> cell_leaf_counts;
};

struct LinearSystem {
    Eigen::SparseMatrix<double> stiffness;    // assembled, unconstrained
    Eigen::SparseMatrix<double> constrained;  // after Dirichlet elimination
    Eigen::VectorXd load;
    std::vector<char> eliminated;             // per dof, 1 if removed
    AssemblyStats stats;

    bool has_constraints() const { return constrained.rows() == stiffness.rows(); }
};

/// Spacetree-integrated element stiffness sum_i w_i B^T (alpha C) B with the
/// indicator sampled at every quadrature point.
Eigen::MatrixXd element_stiffness(const CellGeometry& cell, Basis2D& basis,
                                  const Predicate<2>& domain, const Material& material,
                                  const IntegrationParams& params,
                                  AssemblyStats* stats = nullptr);

/// Assembles the global stiffness (no loads, no constraints). Element
/// integration runs per cell in parallel; the scatter is serialized in cell
/// order, so results are deterministic.
LinearSystem assemble_global(const ProblemDefinition& problem);

/// Edge integral of N^T t over one embedding-box face (no alpha scaling).
Eigen::VectorXd conforming_traction_load(const ProblemDefinition& problem, Face face,
                                         const Vec2& traction);

/// Domain integral of delta_eps(d_Gamma) N^T t over cells near the band.
Eigen::VectorXd delta_neumann_load(const ProblemDefinition& problem, const DeltaNeumann& load,
                                   AssemblyStats* stats = nullptr);

/// Body-force integral restricted to the physical domain (hard indicator,
/// not alpha-scaled).
Eigen::VectorXd body_force_load(const ProblemDefinition& problem, const Vec2& body_force);

/// Strong homogeneous constraints on embedding-box faces: eliminates the
/// chosen displacement component of every scalar mode with nonzero trace on
/// the face (zeroed rows/columns, unit diagonal).
void apply_dirichlet(LinearSystem& system, const EmbeddingMesh& mesh,
                     const std::vector<DirichletFace>& constraints);

}  // namespace pcfcm
