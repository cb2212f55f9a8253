#pragma once

#include <Eigen/Dense>

#include "uavnet/errors.hpp"

namespace uavnet {

/// Phase-type service of one device buffer: the phase walks through the
/// n-slot polling cycle and the final slot absorbs with the transmission
/// success probability (failure restarts the cycle).
struct PhaseTypeService {
  Eigen::RowVectorXd start;     // 1 x n, [1 0 ... 0]
  Eigen::MatrixXd transient;    // n x n, superdiagonal ones + retry row
  Eigen::VectorXd absorb;       // n x 1, success exit from the last phase
  double success_prob = 0.0;

  int phases() const { return static_cast<int>(transient.rows()); }
  /// beta (I - S)^-1 1, in slots.
  double mean_service_slots() const;
};

PhaseTypeService build_ph_service(int n_devices, double success_prob);

/// Level-transition blocks of the discrete-time quasi-birth-death chain fed
/// by Bernoulli arrivals and the phase-type service.
struct QbdBlocks {
  Eigen::MatrixXd up;       // arrival, service continues
  Eigen::MatrixXd same;     // arrival+departure or neither
  Eigen::MatrixXd down;     // departure, no arrival
  double idle = 0.0;        // stay empty
  Eigen::RowVectorXd enter; // empty -> level 1
  Eigen::VectorXd leave;    // level 1 -> empty
  double arrival_prob = 0.0;
};

QbdBlocks qbd_blocks(const PhaseTypeService& service, double arrival_prob);

/// Strict stability test: arrivals slower than one success per polling cycle.
inline bool is_stable(double arrival_prob, int n_devices, double success_prob) {
  return arrival_prob * n_devices < success_prob;
}

/// Minimal nonnegative solution of R = up + R same + R^2 down via the
/// closed form available because the down block has rank one. The quadratic
/// residual is verified to 1e-10; failure throws NumericalError.
Eigen::MatrixXd rate_matrix(const QbdBlocks& blocks);

struct SteadyState {
  double pi0 = 0.0;            // empty-buffer probability
  Eigen::RowVectorXd pi1;      // level-1 phase distribution
  Eigen::MatrixXd rate;        // geometric level decay: pi_q = pi1 rate^(q-1)
};

SteadyState steady_state(const QbdBlocks& blocks, const Eigen::MatrixXd& rate);

struct QueueMetrics {
  double mean_queue_len = 0.0;   // packets
  double mean_delay_slots = 0.0; // queueing + transmission, in slots
};

QueueMetrics mean_queue_and_delay(const SteadyState& ss, double arrival_prob);

/// One-call solve with an unstable tag instead of an exception: unstable
/// inputs report infinite delay.
struct QueueSolution {
  bool stable = false;
  QueueMetrics metrics;  // infinities when unstable
  SteadyState state;     // empty when unstable
};

QueueSolution solve_queue(int n_devices, double success_prob,
                          double arrival_prob);

}  // namespace uavnet
