#include "gcox/prox_grad.hpp"

#include <cmath>
#include <stdexcept>

namespace gcox {

ProxGradResult prox_gradient(const SmoothFn& smooth, const ProxFn& prox,
                             const NonsmoothFn& nonsmooth, Eigen::VectorXd x0,
                             const ProxGradOptions& options) {
  if (options.shrink <= 0.0 || options.shrink >= 1.0)
    throw std::invalid_argument("prox_gradient: shrink must lie in (0, 1)");
  if (options.initial_step <= 0.0)
    throw std::invalid_argument("prox_gradient: initial step must be positive");

  ProxGradResult res;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd y = x;
  double theta = 1.0;
  double step = options.initial_step;

  double F = smooth(x, nullptr) + nonsmooth(x);
  res.objective_trace.push_back(F);
  res.x = x;
  res.objective = F;

  Eigen::VectorXd grad(x.size());
  int it = 0;
  for (; it < options.max_iter; ++it) {
    const double fy = smooth(y, &grad);

    // Backtrack until the quadratic model at y upper-bounds f at the step.
    // The step never regrows: with the noise slack below, a regrown step can
    // keep passing the test while the iterates drift, which ends in a cycle.
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    bool ok = false;
    while (step > 1e-18) {
      x_new = prox(y - step * grad, step);
      const Eigen::VectorXd d = x_new - y;
      f_new = smooth(x_new, nullptr);
      const double bound =
          fy + grad.dot(d) + d.squaredNorm() / (2.0 * step) + 1e-12 * (std::abs(fy) + 1.0);
      if (std::isfinite(f_new) && f_new <= bound) {
        ok = true;
        break;
      }
      step *= options.shrink;
    }
    if (!ok) break;  // line search exhausted, keep best iterate

    const double F_new = f_new + nonsmooth(x_new);
    res.objective_trace.push_back(F_new);

    const double step_move = (x_new - y).norm();
    const bool obj_settled = std::abs(F_new - F) <= options.tol * std::max(1.0, std::abs(F_new));
    const bool map_settled = step_move <= options.tol * std::max(1.0, x_new.norm());

    if (F_new < res.objective) {
      res.objective = F_new;
      res.x = x_new;
    }

    if (options.accelerate) {
      if (F_new > F && theta > 1.0) {
        // Objective rose under momentum: drop it, redo from the last iterate.
        theta = 1.0;
        y = x;
        res.objective_trace.pop_back();
        continue;
      }
      const double theta_new = (1.0 + std::sqrt(1.0 + 4.0 * theta * theta)) / 2.0;
      y = x_new + ((theta - 1.0) / theta_new) * (x_new - x);
      theta = theta_new;
    } else {
      y = x_new;
    }

    x = x_new;
    F = F_new;

    if (x.lpNorm<Eigen::Infinity>() > 1e3) {
      res.diverged = true;
      ++it;
      break;
    }
    if (obj_settled && map_settled) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.iterations = it;
  return res;
}

}  // namespace gcox
