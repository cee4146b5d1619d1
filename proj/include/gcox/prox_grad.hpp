#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace gcox {

// Smooth part: returns f(x); fills *grad when non-null.
using SmoothFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;
// prox of step * g at v (exact minimizer of g(u) + ||u - v||^2 / (2 step)).
using ProxFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double step)>;
// Nonsmooth part value g(x), for objective bookkeeping.
using NonsmoothFn = std::function<double(const Eigen::VectorXd&)>;

struct ProxGradOptions {
  int max_iter = 5000;
  double tol = 1e-7;
  double shrink = 0.5;        // backtracking multiplier
  double initial_step = 1.0;
  bool accelerate = true;     // momentum with function-value restart
};

struct ProxGradResult {
  Eigen::VectorXd x;                   // best iterate seen
  double objective = 0.0;              // f + g at x
  std::vector<double> objective_trace; // accepted iterates, starting at x0
  int iterations = 0;
  bool converged = false;
  bool diverged = false;               // iterate norm blew past 1e3
};

// Proximal gradient descent with backtracking line search. With accelerate
// off every accepted step decreases the objective (up to 1e-12 slack); with
// accelerate on, momentum is reset whenever the objective rises, and the
// best iterate is what gets returned either way.
ProxGradResult prox_gradient(const SmoothFn& smooth, const ProxFn& prox,
                             const NonsmoothFn& nonsmooth, Eigen::VectorXd x0,
                             const ProxGradOptions& options);

}  // namespace gcox
