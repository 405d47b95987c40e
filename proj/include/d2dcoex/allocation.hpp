#pragma once

// RB assignment (Kuhn-Munkres) and power loading of the D2D tier under CU
// SINR constraints and per-pair power caps.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "d2dcoex/interference.hpp"

namespace d2dcoex {

struct Assignment {
  std::vector<int> rb_of_pair;
};

/// Minimum-cost injective assignment of rows (pairs) to columns (RBs) of a
/// finite cost matrix with rows <= cols. When several columns tie during the
/// search the lowest index is taken, so the result is deterministic.
/// Throws InfeasibleAssignment if rows > cols, DomainError for non-finite costs.
Assignment hungarian(const Eigen::MatrixXd& cost);

double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& assignment);

/// Linear form of the CU SINR constraints in the D2D powers:
///   sum_{j,m} coeff(i, j*S + m) * P_jm <= threshold(i)
/// with coeff = h_jB * sum_{k in b_i} I(k - m) / P0 and
/// threshold = P_i h_iB / SINR_min - sigma^2 (RB noise).
struct CuConstraints {
  Eigen::MatrixXd coeff;      ///< CUs x (pairs * S)
  Eigen::VectorXd threshold;  ///< +inf when SINR_min is 0

  /// False if any threshold is negative: the CU misses its target even without D2D.
  bool feasible() const;
};

CuConstraints cu_constraint_coefficients(const SinrInputs& in, const Eigen::VectorXd& p_cu,
                                         double sinr_min_linear);

/// Self-contained power-loading instance:
///   maximise sum_{j,m} log(1 + gain_to_noise(j,m) * P_jm)
///   s.t. cu_coeff * vec(P) <= cu_threshold, sum_m P_jm <= max_power, P >= 0
/// where vec(P) is row-major (pair-major).
struct PowerLoadingProblem {
  Eigen::MatrixXd gain_to_noise;  ///< h_j / (sigma^2 + I_cu) per pair and subcarrier
  Eigen::MatrixXd cu_coeff;
  Eigen::VectorXd cu_threshold;
  double max_power = 0.0;  ///< W per pair
};

enum class SolveStatus { Optimal, MaxIter, InfeasibleSkipped };

std::string to_string(SolveStatus s);

struct PowerLoadingOptions {
  double kkt_tolerance = 1e-6;
  int max_iterations = 10000;  ///< Newton steps
};

struct PowerLoadingResult {
  Eigen::MatrixXd powers;   ///< pair x subcarrier, W
  Eigen::VectorXd dual_cu;  ///< multipliers of the CU constraints (original units)
  Eigen::VectorXd dual_cap;  ///< multipliers of the per-pair caps (original units)
  double objective = 0.0;   ///< sum of log(1 + gamma') in nats
  double kkt_residual = 0.0;
  int iterations_used = 0;
  SolveStatus status = SolveStatus::Optimal;
};

/// Maximises the predicted sum rate. The optimum has the water-filling form
///   P_jm = max(0, 1 / (sum_i lambda_i c_jmi + mu_j) - 1 / gain_to_noise(j,m)),
/// and the multipliers are found with a log-barrier Newton method that keeps
/// every iterate strictly feasible.
PowerLoadingResult solve_power_loading(const PowerLoadingProblem& problem,
                                       const PowerLoadingOptions& options = {});

/// Builds the instance from a snapshot (gamma' terms, no inter-D2D coupling).
PowerLoadingProblem make_power_loading_problem(const SinrInputs& in, const Eigen::VectorXd& p_cu,
                                               double max_power, double sinr_min_linear);

PowerLoadingResult power_loading(const SinrInputs& in, const Eigen::VectorXd& p_cu, double max_power,
                                 double sinr_min_linear, const PowerLoadingOptions& options = {});

/// sum log(1 + g P) for a candidate power matrix.
double predicted_objective(const PowerLoadingProblem& problem, const Eigen::MatrixXd& powers);

// JSON fixtures (see README for the field layout).
std::string to_json(const PowerLoadingProblem& problem);
std::string to_json(const PowerLoadingResult& result);
std::string to_json(const Assignment& assignment);
PowerLoadingProblem power_loading_problem_from_json(const std::string& text);
PowerLoadingResult power_loading_result_from_json(const std::string& text);
Assignment assignment_from_json(const std::string& text);

}  // namespace d2dcoex
