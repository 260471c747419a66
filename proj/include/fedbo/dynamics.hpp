#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedbo::dynamics {

// One realisation of the six stochastic kinetic parameters; a single
// black-box instance to optimise.
struct Task {
  double k_B;      // Contois saturation constant, gS/gB
  double k_P;      // production saturation constant, gS/L
  double k_m;      // maintenance saturation constant, gS/L
  double mu_max;   // max biomass growth rate, 1/hr
  double rho_max;  // max production rate, gP/gB/hr
  double m_S;      // maintenance requirement, gS/gB/hr

  bool valid() const;
};

// Nominal industrial values for the kinetic parameters.
inline constexpr Task nominal_task() {
  return Task{0.006, 1e-4, 1e-4, 0.11, 0.0055, 0.029};
}

struct FixedParams {
  double S_F = 500.0;    // feed substrate concentration, g/L
  double K_deg = 0.01;   // product hydrolysis constant, 1/hr
  double K_in = 0.1;     // substrate inhibition constant, gS/L
  double Y_BS = 0.47;    // biomass/substrate yield, gB/gS
  double Y_PS = 1.2;     // product/substrate yield, gP/gS
};

struct ReactorState {
  double B;  // biomass, g/L
  double P;  // product, g/L
  double S;  // substrate, g/L
  double V;  // liquid volume, L

  double operator[](int i) const {
    return i == 0 ? B : i == 1 ? P : i == 2 ? S : V;
  }
};

// Decision vector for one batch: initial charge, feed rate, stopping time.
struct Recipe {
  double B0;
  double P0;
  double S0;
  double V0;
  double F;       // feed rate, g/hr, constant over the batch
  double t_stop;  // hr

  ReactorState initial_state() const { return {B0, P0, S0, V0}; }
};

struct Trajectory {
  Recipe recipe;
  std::vector<double> times;
  std::vector<ReactorState> states;
  long long task_id = -1;
};

struct Rates {
  double mu;     // 1/hr
  double rho;    // gP/gB/hr
  double gamma;  // gS/gB/hr
};

// Kinetic rate laws. Non-positive substrate gives exactly zero rates, which
// also covers the degenerate B = S = 0 case.
Rates rates(const ReactorState& state, const Task& task, double K_in = 0.1);

// Mass-balance right-hand side; throws std::domain_error when V <= 0.
ReactorState rhs(const ReactorState& state, const Task& task,
                 const FixedParams& fixed, double F);

struct SolverSettings {
  double t_max = 150.0;
  double h = 0.05;                // RK4 step cap, hr
  double divergence_cap = 1e6;
};

// Thrown when a state component exceeds the divergence cap; carries the
// trajectory prefix up to the last grid point that was completed.
class DivergedTrajectory : public std::runtime_error {
 public:
  DivergedTrajectory(std::string msg, Trajectory prefix_)
      : std::runtime_error(std::move(msg)), prefix(std::move(prefix_)) {}
  Trajectory prefix;
};

// Classical RK4 with fixed step h subdividing each grid interval. States are
// clamped to >= 0 after every internal step. grid must start at 0 and be
// strictly increasing.
Trajectory simulate(const Recipe& recipe, const Task& task,
                    const FixedParams& fixed, std::span<const double> grid,
                    const SolverSettings& solver);

// Advances a single state across [t_from, t_to] with the same stepping rule
// simulate() uses for one grid interval.
ReactorState integrate_interval(const ReactorState& state, const Task& task,
                                const FixedParams& fixed, double F,
                                double t_from, double t_to,
                                const SolverSettings& solver);

struct ProfitCoeffs {
  double revenue = 2.5e-2;   // $ per g product
  double time_cost = 168.0;  // $ per hr
  double feed_cost = 8.5e-4; // $ per g fed
};

// Batch profit for a constant feed rate; the feed integral collapses to F*t.
double profit(double P, double V, double t, double F,
              const ProfitCoeffs& coeffs = {});

// Quadrature variant for a time-varying feed profile (trapezoid rule on the
// feed integral); kept alongside the closed form so future feed profiles can
// reuse the objective.
template <typename FeedFn>
double profit_quadrature(double P, double V, double t, FeedFn&& feed,
                         int n_panels, const ProfitCoeffs& coeffs = {}) {
  double integral = 0.0;
  const double dz = t / n_panels;
  for (int i = 0; i < n_panels; ++i) {
    const double a = i * dz, b = (i + 1) * dz;
    integral += 0.5 * (feed(a) + feed(b)) * dz;
  }
  return coeffs.revenue * P * V - coeffs.time_cost * t - coeffs.feed_cost * integral;
}

// linspace over [0, t_end] with n points.
std::vector<double> uniform_grid(double t_end, int n);

}  // namespace fedbo::dynamics
