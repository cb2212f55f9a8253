#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "uavnet/errors.hpp"

namespace uavnet {

/// Controls for the adaptive panel rule used throughout the analysis module.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_panels = 4000;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
std::pair<double, double> gauss_kronrod_15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  return {kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive bisection: always refines the worst panel until the
/// summed error estimate meets the tolerance or the panel budget runs out.
template <class F>
IntegralResult integrate_adaptive(const F& f, double a, double b,
                                  const QuadratureSpec& spec = {}) {
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  IntegralResult out;
  if (a == b) return out;

  auto [v0, e0] = detail::gauss_kronrod_15(f, a, b);
  std::priority_queue<Panel> queue;
  queue.push({a, b, v0, e0});
  double total = v0;
  double total_error = e0;
  int panels = 1;
  while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)) &&
         panels < spec.max_panels) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto [v1, e1] = detail::gauss_kronrod_15(f, worst.a, mid);
    auto [v2, e2] = detail::gauss_kronrod_15(f, mid, worst.b);
    total += v1 + v2 - worst.value;
    total_error += e1 + e2 - worst.error;
    queue.push({worst.a, mid, v1, e1});
    queue.push({mid, worst.b, v2, e2});
    ++panels;
  }
  out.value = total;
  out.error_estimate = total_error;
  out.panels = panels;
  out.converged =
      total_error <= std::max(spec.abs_tol, 50.0 * spec.rel_tol * std::fabs(total));
  return out;
}

/// Semi-infinite integral over [a, inf) via r = a + u/(1-u), u in [0, 1).
/// The map clusters nodes near the lower limit, where the integrands here
/// (exclusion-zone interference kernels) vary fastest.
template <class F>
IntegralResult integrate_semi_infinite(const F& f, double a,
                                       const QuadratureSpec& spec = {}) {
  auto mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    const double r = a + u / one_minus;
    return f(r) / (one_minus * one_minus);
  };
  return integrate_adaptive(mapped, 0.0, 1.0 - 1e-15, spec);
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
      }
      deriv = n * (t * p0 - p1) / (t * t - 1.0);
      const double step = p0 / deriv;
      t -= step;
      if (std::fabs(step) < 1e-15) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
    }
    deriv = n * (t * p0 - p1) / (t * t - 1.0);
    nodes[i] = t;
    weights[i] = 2.0 / ((1.0 - t * t) * deriv * deriv);
  }
  return {nodes, weights};
}

/// Fixed composite Gauss-Legendre rule over [a, b] split at given interior
/// edges; returns absolute nodes and weights.
inline std::pair<std::vector<double>, std::vector<double>> composite_gauss_legendre(
    const std::vector<double>& edges, int points_per_panel) {
  auto [x, w] = gauss_legendre(points_per_panel);
  std::vector<double> nodes, weights;
  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double a = edges[seg];
    const double b = edges[seg + 1];
    for (int i = 0; i < points_per_panel; ++i) {
      nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * x[i]);
      weights.push_back(0.5 * (b - a) * w[i]);
    }
  }
  return {nodes, weights};
}

/// Sine integral Si(x) for x >= 0: direct quadrature of the (smooth) sinc up
/// to moderate arguments, asymptotic expansion beyond.
double sine_integral(double x);

/// pi/2 - Si(x) and Ci(x) for x >= 20 from the alternating asymptotic series;
/// used to complete slowly decaying oscillatory tails analytically.
inline std::pair<double, double> sine_cosine_integral_tail(double x) {
  const double x2 = x * x;
  // f(x) ~ 1/x - 2/x^3 + 24/x^5 - 720/x^7 + 40320/x^9
  const double f =
      (1.0 - (2.0 - (24.0 - (720.0 - 40320.0 / x2) / x2) / x2) / x2) / x;
  // g(x) ~ 1/x^2 - 6/x^4 + 120/x^6 - 5040/x^8 + 362880/x^10
  const double g =
      (1.0 - (6.0 - (120.0 - (5040.0 - 362880.0 / x2) / x2) / x2) / x2) / x2;
  const double si_complement = std::cos(x) * f + std::sin(x) * g;
  const double ci = std::sin(x) * f - std::cos(x) * g;
  return {si_complement, ci};
}

}  // namespace uavnet
