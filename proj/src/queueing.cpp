#include "uavnet/queueing.hpp"

#include <cmath>
#include <limits>

namespace uavnet {

double PhaseTypeService::mean_service_slots() const {
  const int n = phases();
  const Eigen::MatrixXd fundamental =
      (Eigen::MatrixXd::Identity(n, n) - transient)
          .partialPivLu()
          .solve(Eigen::MatrixXd::Identity(n, n));
  return (start * fundamental * Eigen::VectorXd::Ones(n))(0, 0);
}

PhaseTypeService build_ph_service(int n_devices, double success_prob) {
  if (n_devices < 1)
    throw std::invalid_argument("build_ph_service: n_devices must be >= 1");
  if (success_prob < 0.0 || success_prob > 1.0)
    throw std::invalid_argument("build_ph_service: success_prob outside [0,1]");
  PhaseTypeService service;
  service.success_prob = success_prob;
  service.start = Eigen::RowVectorXd::Zero(n_devices);
  service.start(0) = 1.0;
  service.transient = Eigen::MatrixXd::Zero(n_devices, n_devices);
  for (int i = 0; i + 1 < n_devices; ++i) service.transient(i, i + 1) = 1.0;
  service.transient(n_devices - 1, 0) = 1.0 - success_prob;
  service.absorb = Eigen::VectorXd::Zero(n_devices);
  service.absorb(n_devices - 1) = success_prob;
  return service;
}

QbdBlocks qbd_blocks(const PhaseTypeService& service, double arrival_prob) {
  if (arrival_prob <= 0.0 || arrival_prob >= 1.0)
    throw std::invalid_argument("qbd_blocks: arrival_prob must be in (0,1)");
  const double a = arrival_prob;
  QbdBlocks blocks;
  blocks.arrival_prob = a;
  blocks.up = a * service.transient;
  blocks.same = a * service.absorb * service.start + (1.0 - a) * service.transient;
  blocks.down = (1.0 - a) * service.absorb * service.start;
  blocks.idle = 1.0 - a;
  blocks.enter = a * service.start;
  blocks.leave = (1.0 - a) * service.absorb;
  return blocks;
}

Eigen::MatrixXd rate_matrix(const QbdBlocks& blocks) {
  const int n = static_cast<int>(blocks.up.rows());
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  // blocks.up = a S, blocks.same = a s b + (1-a) S, blocks.down = (1-a) s b.
  // Rank-one down block admits R = a S (I - a s b - (1-a) S - a S 1 b)^{-1}.
  const double a = blocks.arrival_prob;
  const Eigen::MatrixXd s_outer = blocks.same - (blocks.up * (1.0 - a) / a);
  // s_outer == a s b; recover S 1 b from the up block row sums.
  const Eigen::MatrixXd transient = blocks.up / a;
  Eigen::RowVectorXd start = blocks.enter / a;
  const Eigen::MatrixXd inner = identity - s_outer -
                                (1.0 - a) * transient -
                                a * transient * ones * start;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(inner);
  if ((inner * lu.inverse() - identity).cwiseAbs().maxCoeff() > 1e-8)
    throw NumericalError("rate_matrix: singular inner matrix");
  const Eigen::MatrixXd rate = blocks.up * lu.inverse();

  const Eigen::MatrixXd residual =
      rate - (blocks.up + rate * blocks.same + rate * rate * blocks.down);
  const double residual_norm = residual.cwiseAbs().rowwise().sum().maxCoeff();
  if (residual_norm > 1e-10)
    throw NumericalError("rate_matrix: fixed-point residual " +
                         std::to_string(residual_norm));
  return rate;
}

SteadyState steady_state(const QbdBlocks& blocks, const Eigen::MatrixXd& rate) {
  const int n = static_cast<int>(rate.rows());
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const double a = blocks.arrival_prob;

  const double spectral_bound = rate.cwiseAbs().rowwise().sum().maxCoeff();
  if (!(spectral_bound < 1.0)) {
    // Row-sum bound can exceed 1 for stable chains; fall back to eigenvalues.
    const double rho = rate.eigenvalues().cwiseAbs().maxCoeff();
    if (!(rho < 1.0))
      throw NumericalError("steady_state: rate matrix not convergent");
  }

  const Eigen::MatrixXd transient = blocks.up / a;
  const Eigen::RowVectorXd start = blocks.enter / a;
  const Eigen::VectorXd absorb = blocks.leave / (1.0 - a);

  const Eigen::MatrixXd m_inner = identity - a * absorb * start -
                                  (1.0 - a) * transient -
                                  rate * (1.0 - a) * absorb * start;
  const Eigen::MatrixXd m = m_inner.partialPivLu().solve(identity);

  const Eigen::MatrixXd level_sum =
      (identity - rate).partialPivLu().solve(identity);

  SteadyState ss;
  ss.rate = rate;
  const double tail_mass = (a * start * m * level_sum * ones)(0, 0);
  ss.pi0 = 1.0 / (1.0 + tail_mass);
  ss.pi1 = ss.pi0 * a * start * m;

  if (ss.pi0 < -1e-12 || ss.pi1.minCoeff() < -1e-10)
    throw NumericalError("steady_state: negative probabilities");
  const double total = ss.pi0 + (ss.pi1 * level_sum * ones)(0, 0);
  if (std::fabs(total - 1.0) > 1e-10)
    throw NumericalError("steady_state: normalization off by " +
                         std::to_string(total - 1.0));
  return ss;
}

QueueMetrics mean_queue_and_delay(const SteadyState& ss, double arrival_prob) {
  const int n = static_cast<int>(ss.rate.rows());
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd inv = (identity - ss.rate).partialPivLu().solve(identity);
  QueueMetrics metrics;
  metrics.mean_queue_len = (ss.pi1 * inv * inv * ones)(0, 0);
  metrics.mean_delay_slots = metrics.mean_queue_len / arrival_prob;
  return metrics;
}

QueueSolution solve_queue(int n_devices, double success_prob,
                          double arrival_prob) {
  QueueSolution solution;
  if (!is_stable(arrival_prob, n_devices, success_prob)) {
    solution.stable = false;
    solution.metrics.mean_queue_len = std::numeric_limits<double>::infinity();
    solution.metrics.mean_delay_slots = std::numeric_limits<double>::infinity();
    return solution;
  }
  const PhaseTypeService service = build_ph_service(n_devices, success_prob);
  const QbdBlocks blocks = qbd_blocks(service, arrival_prob);
  const Eigen::MatrixXd rate = rate_matrix(blocks);
  solution.state = steady_state(blocks, rate);
  solution.metrics = mean_queue_and_delay(solution.state, arrival_prob);
  solution.stable = true;
  return solution;
}

}  // namespace uavnet
