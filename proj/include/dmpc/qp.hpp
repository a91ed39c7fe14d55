#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dmpc::qp {

enum class QpStatus { optimal, infeasible, max_iter };

/// minimize 1/2 u'Hu + f'u  s.t.  a_i'u <= b_i, i = 1..m.  h must be
/// symmetric positive definite.
struct QpProblem {
  Eigen::MatrixXd h;
  Eigen::VectorXd f;
  Eigen::MatrixXd a;  // m x n (m may be 0)
  Eigen::VectorXd b;  // m
};

struct QpSolution {
  Eigen::VectorXd u_star;
  Eigen::VectorXd lambda;  // one multiplier per row, >= 0 at an optimum
  QpStatus status = QpStatus::max_iter;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Thrown when the constraint set itself is inconsistent.
class QpInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense active-set solver with incremental factorization updates
/// (Goldfarb–Idnani dual method). Starts from the unconstrained minimizer,
/// adds the most violated constraint each outer iteration (lowest index on
/// ties) and takes primal/dual steps until no violation remains, so no
/// feasible initial point is required. Infeasibility shows up as an
/// unbounded dual step and is reported via status.
///
/// Holds scratch workspace: keep one instance per thread.
class QpSolver {
 public:
  /// warm_start is accepted for interface parity; the dual method does not
  /// need a primal starting point and ignores it for the search.
  QpSolution solve(const QpProblem& p,
                   const std::optional<Eigen::VectorXd>& warm_start = std::nullopt,
                   double tol = 1e-8, int max_iter = 200);

 private:
  void add_constraint(int q);
  void drop_constraint(int idx, int& q);

  // workspace, sized per solve
  Eigen::MatrixXd j_;       // n x n, L^{-T} Q
  Eigen::MatrixXd r_;       // n x n, upper-triangular in the first q columns
  Eigen::VectorXd d_;       // J' * np
  Eigen::VectorXd z_;       // primal step direction
  Eigen::VectorXd rvec_;    // dual step direction
  Eigen::VectorXd svals_;   // constraint values a_i'x - b_i
  std::vector<int> active_;
  Eigen::VectorXd mult_;
};

inline QpSolution solve_qp(const QpProblem& p,
                           const std::optional<Eigen::VectorXd>& warm_start = std::nullopt,
                           double tol = 1e-8, int max_iter = 200) {
  QpSolver solver;
  return solver.solve(p, warm_start, tol, max_iter);
}

}  // namespace dmpc::qp
