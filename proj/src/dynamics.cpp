#include "dmpc/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace dmpc {

AgentModel discretize_zoh(double t_ax, double ts) {
  if (!(t_ax > 0.0)) {
    throw std::invalid_argument("discretize_zoh: t_ax must be > 0");
  }
  if (!(ts > 0.0)) {
    throw std::invalid_argument("discretize_zoh: ts must be > 0");
  }

  const double tau = t_ax;
  // one_m_alpha = 1 - exp(-ts/tau), kept accurate for ts << tau via expm1.
  const double one_m_alpha = -std::expm1(-ts / tau);
  const double alpha = 1.0 - one_m_alpha;

  AgentModel m;
  m.t_ax = t_ax;
  m.ts = ts;

  // Integrating a'(t) = (u - a)/tau, v' = a, s' = v over one sample with
  // u held constant gives the lower-triangular pair below.
  m.a_d << alpha, 0.0, 0.0,
           tau * one_m_alpha, 1.0, 0.0,
           tau * ts - tau * tau * one_m_alpha, ts, 1.0;
  m.b_d << one_m_alpha,
           ts - tau * one_m_alpha,
           0.5 * ts * ts - tau * ts + tau * tau * one_m_alpha;
  return m;
}

AgentState step(const AgentModel& model, const AgentState& x, double u) {
  return AgentState::from_vec(model.a_d * x.vec() + model.b_d * u);
}

std::vector<AgentState> predict_states(const AgentModel& model, const AgentState& x0,
                                       const Eigen::VectorXd& u_seq) {
  std::vector<AgentState> out;
  out.reserve(static_cast<std::size_t>(u_seq.size()));
  AgentState x = x0;
  for (Eigen::Index j = 0; j < u_seq.size(); ++j) {
    x = step(model, x, u_seq(j));
    out.push_back(x);
  }
  return out;
}

}  // namespace dmpc
