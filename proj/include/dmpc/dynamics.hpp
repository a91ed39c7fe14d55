#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dmpc {

/// Longitudinal agent model: a first-order drivetrain lag feeding a double
/// integrator, discretized exactly under zero-order hold.
///
/// Continuous state x = [a_x, v, s] (acceleration, speed, path coordinate),
/// input u is the commanded acceleration. a_d/b_d are the exact discrete
/// one-step maps for the stored (t_ax, ts).
struct AgentModel {
  double t_ax = 0.0;  ///< drivetrain time constant [s], > 0
  double ts = 0.0;    ///< sample time [s], > 0
  Eigen::Matrix3d a_d = Eigen::Matrix3d::Identity();
  Eigen::Vector3d b_d = Eigen::Vector3d::Zero();
};

struct AgentState {
  double ax = 0.0;  ///< longitudinal acceleration [m/s^2]
  double v = 0.0;   ///< speed [m/s]
  double s = 0.0;   ///< path coordinate [m], 0 at the nearest collision point

  Eigen::Vector3d vec() const { return {ax, v, s}; }
  static AgentState from_vec(const Eigen::Vector3d& x) { return {x(0), x(1), x(2)}; }
};

/// Exact ZOH discretization. Closed-form entries for the lag/integrator
/// chain; no matrix-exponential series. Throws std::invalid_argument for
/// non-positive t_ax or ts.
AgentModel discretize_zoh(double t_ax, double ts);

/// One discrete step x+ = A_d x + B_d u.
AgentState step(const AgentModel& model, const AgentState& x, double u);

/// States x_{k+1..k+N} reached from x0 under u_seq (length N >= 1).
std::vector<AgentState> predict_states(const AgentModel& model, const AgentState& x0,
                                       const Eigen::VectorXd& u_seq);

}  // namespace dmpc
