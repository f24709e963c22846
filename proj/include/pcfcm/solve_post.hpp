#pragma once

#include "pcfcm/mechanics.hpp"

#include <string>

namespace pcfcm {

struct SolveReport {
    std::string method;   // "ldlt" or "cg"
    double residual = 0.0;
    int iterations = 0;
};

struct FieldSolution {
    Eigen::VectorXd coefficients;
    SolveReport report;
};

/// Thrown when neither the direct factorization nor the CG fallback reaches
/// the required residual; usually means missing constraints or an alpha too
/// small for the conditioning.
struct IllConditionedSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Direct symmetric factorization with a diagonally scaled CG fallback.
/// Eliminated DOFs come back as exact zeros.
FieldSolution solve_spd(const LinearSystem& system);

/// U = 1/2 u^T K u with the unconstrained stiffness.
double strain_energy(const LinearSystem& system, const FieldSolution& solution);

/// |U_ref - U_num| / U_ref.
double relative_energy_error(double u_num, double u_ref);

struct StressState {
    Eigen::Vector3d strain = Eigen::Vector3d::Zero();  // eps_xx, eps_yy, gamma_xy
    Eigen::Vector3d stress = Eigen::Vector3d::Zero();  // sigma_xx, sigma_yy, tau_xy
    double von_mises = 0.0;
    double principal_max = 0.0;
    double principal_min = 0.0;
    Vec2 principal_dir_max = Vec2::UnitX();
    Vec2 principal_dir_min = Vec2::UnitY();
};

StressState stress_state_from_strain(const Eigen::Vector3d& strain, const Eigen::Matrix3d& c,
                                     double alpha);

struct PointEvaluation {
    Vec2 displacement = Vec2::Zero();
    StressState stress;      // with the alpha factor, fictitious regions vanish
    StressState raw_stress;  // alpha-free, for diagnostics
    bool inside = false;
};

PointEvaluation evaluate_solution(const ProblemDefinition& problem, const FieldSolution& solution,
                                  const Vec2& x);

/// Writes a legacy-VTK structured-points file and a CSV with identical
/// values (x fastest). Arrays: displacement, von Mises, principal max/min,
/// alpha mask, raw von Mises.
void export_field_grid(const ProblemDefinition& problem, const FieldSolution& solution,
                       int resolution_x, int resolution_y, const std::string& vtk_path,
                       const std::string& csv_path);

}  // namespace pcfcm
