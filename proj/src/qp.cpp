#include "dmpc/qp.hpp"

#include <cmath>
#include <limits>

namespace dmpc::qp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Givens pair (c, s) zeroing b in [a; b] -> [r; 0].
inline void givens(double a, double b, double& c, double& s, double& r) {
  r = std::hypot(a, b);
  if (r == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  c = a / r;
  s = b / r;
}

double kkt_residual(const QpProblem& p, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda) {
  double res = (p.h * x + p.f + p.a.transpose() * lambda).lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < p.a.rows(); ++i) {
    const double viol = p.a.row(i).dot(x) - p.b(i);
    res = std::max(res, viol);
    res = std::max(res, std::abs(lambda(i) * viol));
  }
  return res;
}

}  // namespace

QpSolution QpSolver::solve(const QpProblem& p,
                           const std::optional<Eigen::VectorXd>& /*warm_start*/,
                           double tol, int max_iter) {
  const Eigen::Index n = p.h.rows();
  const Eigen::Index m = p.a.rows();
  if (p.h.cols() != n || p.f.size() != n || (m > 0 && p.a.cols() != n) || p.b.size() != m) {
    throw std::invalid_argument("solve_qp: inconsistent dimensions");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(p.h);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_qp: h is not positive definite");
  }

  QpSolution sol;
  sol.u_star = -llt.solve(p.f);
  sol.lambda = Eigen::VectorXd::Zero(m);
  if (m == 0) {
    sol.status = QpStatus::optimal;
    sol.kkt_residual = kkt_residual(p, sol.u_star, sol.lambda);
    return sol;
  }

  // J = L^{-T}: columns span the whole space; the first q columns are
  // rotated onto the active normals as constraints come in.
  j_ = Eigen::MatrixXd::Identity(n, n);
  llt.matrixU().solveInPlace(j_);
  r_.setZero(n, n);
  active_.clear();
  mult_ = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd& x = sol.u_star;
  int q = 0;

  // Linear-dependence threshold for the projected normal.
  const double scale = 1.0 + p.a.cwiseAbs().maxCoeff() + p.h.cwiseAbs().maxCoeff();
  const double eps_dep = 1e-13 * scale;

  int iter = 0;
  for (;;) {
    // Most violated inactive constraint; lowest index wins ties.
    svals_ = p.a * x - p.b;
    for (int k = 0; k < q; ++k) svals_(active_[k]) = 0.0;
    Eigen::Index pidx = -1;
    double worst = tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (svals_(i) > worst) {
        worst = svals_(i);
        pidx = i;
      }
    }
    if (pidx < 0) {
      for (int k = 0; k < q; ++k) sol.lambda(active_[k]) = mult_(k);
      sol.status = QpStatus::optimal;
      sol.kkt_residual = kkt_residual(p, x, sol.lambda);
      sol.iterations = iter;
      return sol;
    }

    // Dual-method normal: a'x <= b turns into n'x >= b' with n = -a.
    const Eigen::VectorXd np = -p.a.row(pidx).transpose();
    double sp = np.dot(x) + p.b(pidx);  // n'x - b', negative while violated
    double u_plus = 0.0;

    for (;;) {
      if (++iter > max_iter) {
        for (int k = 0; k < q; ++k) sol.lambda(active_[k]) = mult_(k);
        sol.status = QpStatus::max_iter;
        sol.kkt_residual = kkt_residual(p, x, sol.lambda);
        sol.iterations = iter;
        return sol;
      }

      d_ = j_.transpose() * np;
      z_ = j_.rightCols(n - q) * d_.tail(n - q);
      if (q > 0) {
        rvec_ = r_.topLeftCorner(q, q).triangularView<Eigen::Upper>().solve(d_.head(q));
      }

      // Longest dual step keeping the active multipliers nonnegative.
      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < q; ++k) {
        if (rvec_(k) > 0.0 && mult_(k) / rvec_(k) < t1) {
          t1 = mult_(k) / rvec_(k);
          drop = k;
        }
      }
      // Step reaching the violated constraint's boundary.
      const double ztnp = z_.dot(np);
      const double t2 = (ztnp > eps_dep) ? -sp / ztnp : kInf;
      const double t = std::min(t1, t2);

      if (t >= kInf) {
        // No primal progress possible and no blocking multiplier: the
        // constraint set is inconsistent.
        for (int k = 0; k < q; ++k) sol.lambda(active_[k]) = mult_(k);
        sol.status = QpStatus::infeasible;
        sol.kkt_residual = kkt_residual(p, x, sol.lambda);
        sol.iterations = iter;
        return sol;
      }

      if (t2 >= kInf) {
        // Dual-only step: drop the blocking constraint and retry.
        mult_.head(q) -= t * rvec_.head(q);
        u_plus += t;
        drop_constraint(drop, q);
        continue;
      }

      x += t * z_;
      mult_.head(q) -= t * rvec_.head(q);
      u_plus += t;
      sp = np.dot(x) + p.b(pidx);

      if (t == t2) {
        // Full step: the constraint becomes active.
        add_constraint(q);
        active_.push_back(static_cast<int>(pidx));
        mult_(q) = u_plus;
        ++q;
        break;
      }
      drop_constraint(drop, q);
    }
  }
}

void QpSolver::add_constraint(int q) {
  const Eigen::Index n = j_.rows();
  // Rotate the trailing components of d onto position q, carrying J along.
  for (Eigen::Index k = n - 1; k > q; --k) {
    double c, s, rr;
    givens(d_(k - 1), d_(k), c, s, rr);
    if (rr == 0.0) continue;
    d_(k - 1) = rr;
    d_(k) = 0.0;
    const Eigen::VectorXd col_a = j_.col(k - 1);
    const Eigen::VectorXd col_b = j_.col(k);
    j_.col(k - 1) = c * col_a + s * col_b;
    j_.col(k) = -s * col_a + c * col_b;
  }
  r_.col(q).head(q + 1) = d_.head(q + 1);
}

void QpSolver::drop_constraint(int idx, int& q) {
  const int last = q - 1;
  active_.erase(active_.begin() + idx);
  for (int k = idx; k < last; ++k) {
    mult_(k) = mult_(k + 1);
    r_.col(k) = r_.col(k + 1);
  }
  mult_(last) = 0.0;
  r_.col(last).setZero();
  --q;
  // Chase the Hessenberg bulge left behind by the column shift.
  for (int k = idx; k < q; ++k) {
    double c, s, rr;
    givens(r_(k, k), r_(k + 1, k), c, s, rr);
    if (rr == 0.0) continue;
    for (int col = k; col < q; ++col) {
      const double a = r_(k, col);
      const double b = r_(k + 1, col);
      r_(k, col) = c * a + s * b;
      r_(k + 1, col) = -s * a + c * b;
    }
    r_(k, k) = rr;
    r_(k + 1, k) = 0.0;
    const Eigen::VectorXd col_a = j_.col(k);
    const Eigen::VectorXd col_b = j_.col(k + 1);
    j_.col(k) = c * col_a + s * col_b;
    j_.col(k + 1) = -s * col_a + c * col_b;
  }
}

}  // namespace dmpc::qp
