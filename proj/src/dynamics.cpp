#include "fedbo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedbo::dynamics {

bool Task::valid() const {
  const double v[6] = {k_B, k_P, k_m, mu_max, rho_max, m_S};
  return std::all_of(std::begin(v), std::end(v),
                     [](double x) { return std::isfinite(x) && x > 0.0; });
}

Rates rates(const ReactorState& state, const Task& task, double K_in) {
  // Negative stage values produced by RK4 substeps are treated as zero
  // concentration; the post-step clamp keeps reported states non-negative.
  const double S = std::max(state.S, 0.0);
  const double B = std::max(state.B, 0.0);
  if (S <= 0.0) return {0.0, 0.0, 0.0};
  const double mu = task.mu_max * S / (task.k_B * B + S);
  const double rho = task.rho_max * S / (task.k_P + S * (1.0 + S / K_in));
  const double gamma = task.m_S * S / (task.k_m + S);
  return {mu, rho, gamma};
}

ReactorState rhs(const ReactorState& state, const Task& task,
                 const FixedParams& fixed, double F) {
  if (state.V <= 0.0) {
    throw std::domain_error("rhs: reactor volume must be positive");
  }
  const Rates r = rates(state, task, fixed.K_in);
  const double B = std::max(state.B, 0.0);
  const double dilution = F / (fixed.S_F * state.V);
  ReactorState d;
  d.B = r.mu * B - state.B * dilution;
  d.P = r.rho * B - fixed.K_deg * state.P - state.P * dilution;
  d.S = -r.mu * B / fixed.Y_BS - r.rho * B / fixed.Y_PS - r.gamma * B +
        (1.0 - state.S / fixed.S_F) * F / state.V;
  d.V = F / fixed.S_F;
  return d;
}

namespace {

ReactorState axpy(const ReactorState& x, double a, const ReactorState& d) {
  return {x.B + a * d.B, x.P + a * d.P, x.S + a * d.S, x.V + a * d.V};
}

ReactorState clamp_nonneg(const ReactorState& x) {
  return {std::max(x.B, 0.0), std::max(x.P, 0.0), std::max(x.S, 0.0),
          std::max(x.V, 0.0)};
}

bool exceeds_cap(const ReactorState& x, double cap) {
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(x[i]) || x[i] > cap) return true;
  }
  return false;
}

ReactorState rk4_step(const ReactorState& x, const Task& task,
                      const FixedParams& fixed, double F, double h) {
  const ReactorState k1 = rhs(x, task, fixed, F);
  const ReactorState k2 = rhs(axpy(x, 0.5 * h, k1), task, fixed, F);
  const ReactorState k3 = rhs(axpy(x, 0.5 * h, k2), task, fixed, F);
  const ReactorState k4 = rhs(axpy(x, h, k3), task, fixed, F);
  ReactorState next;
  next.B = x.B + (h / 6.0) * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
  next.P = x.P + (h / 6.0) * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
  next.S = x.S + (h / 6.0) * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S);
  next.V = x.V + (h / 6.0) * (k1.V + 2.0 * k2.V + 2.0 * k3.V + k4.V);
  return clamp_nonneg(next);
}

}  // namespace

ReactorState integrate_interval(const ReactorState& state, const Task& task,
                                const FixedParams& fixed, double F,
                                double t_from, double t_to,
                                const SolverSettings& solver) {
  const double dt = t_to - t_from;
  if (dt <= 0.0) return state;
  const int n_sub = std::max(1, static_cast<int>(std::ceil(dt / solver.h - 1e-12)));
  const double h = dt / n_sub;
  ReactorState x = state;
  for (int s = 0; s < n_sub; ++s) {
    x = rk4_step(x, task, fixed, F, h);
    if (exceeds_cap(x, solver.divergence_cap)) {
      Trajectory prefix;  // caller owns the full bookkeeping; signal via throw
      throw DivergedTrajectory("state exceeded divergence cap", std::move(prefix));
    }
  }
  return x;
}

Trajectory simulate(const Recipe& recipe, const Task& task,
                    const FixedParams& fixed, std::span<const double> grid,
                    const SolverSettings& solver) {
  if (grid.size() < 1 || grid[0] != 0.0) {
    throw std::invalid_argument("simulate: grid must start at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("simulate: grid must be strictly increasing");
    }
  }
  Trajectory traj;
  traj.recipe = recipe;
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  ReactorState x = clamp_nonneg(recipe.initial_state());
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    try {
      x = integrate_interval(x, task, fixed, recipe.F, grid[i - 1], grid[i], solver);
    } catch (const DivergedTrajectory&) {
      throw DivergedTrajectory("trajectory diverged before t=" +
                                   std::to_string(grid[i]),
                               std::move(traj));
    }
    traj.times.push_back(grid[i]);
    traj.states.push_back(x);
  }
  return traj;
}

double profit(double P, double V, double t, double F,
              const ProfitCoeffs& coeffs) {
  return coeffs.revenue * P * V - coeffs.time_cost * t - coeffs.feed_cost * F * t;
}

std::vector<double> uniform_grid(double t_end, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = t_end * static_cast<double>(i) / (n - 1);
  g[0] = 0.0;
  return g;
}

}  // namespace fedbo::dynamics
