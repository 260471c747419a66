#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fedbo/dynamics.hpp"
#include "fedbo/rng.hpp"

namespace fedbo::tasking {

// Offset/window task prior: k_i = delta*k_nom_i + U[(1-window)*k_nom_i,
// (1+window)*k_nom_i], componentwise.
struct TaskDistribution {
  dynamics::Task nominal = dynamics::nominal_task();
  double delta = 0.0;
  double window = 0.05;
};

dynamics::Task sample_task(const TaskDistribution& dist, RngStream& rng);

// Componentwise support of the distribution, [lo, hi] per parameter.
struct TaskInterval {
  dynamics::Task lo, hi;
};
TaskInterval task_support(const TaskDistribution& dist);

struct RecipeBounds {
  double B0_min = 1.0, B0_max = 5.0;
  double P0_min = 0.0, P0_max = 3.0;
  double S0_min = 0.0, S0_max = 10.0;
  double V0_min = 5.0, V0_max = 8.5;
  double F_min = 0.0, F_max = 50.0;
  double t_min = 1e-6;  // lower clamp for stopping times, (0, t_max]
  double t_max = 150.0;

  // Per-dimension [lo, hi] over (B0, P0, S0, V0, F, t_stop).
  std::pair<Eigen::VectorXd, Eigen::VectorXd> box() const;
};

dynamics::Recipe sample_recipe(RngStream& rng, const RecipeBounds& bounds = {});

enum class Scenario : std::uint8_t { Forecast = 0, Interpolate = 1 };

// Bernoulli(lambda) mode selector: Forecast with probability lambda.
Scenario scenario_flip(double lambda, RngStream& rng);

struct EpisodeConfig {
  int M_min = 1, M_max = 5;    // observed trajectories
  int m_min = 2, m_max = 8;    // context subsample size
  int n_min = 8, n_max = 20;   // target subsample size
  int N_grid = 100;            // time grid length
  int N_x0 = 8;                // trajectories simulated per system
  int N_sys = 16;              // systems per training batch
  double lambda = 0.5;         // Bernoulli forecast probability
  int n_o_min = 2, n_o_max = 4;  // interpolation update size
  int max_resample = 10;       // retries on diverged systems

  void validate() const;
};

// Dense simulated trajectory in model-agnostic form: one column per grid
// point, one row per state dimension.
struct SampledTrajectory {
  Eigen::VectorXd x0;
  std::vector<double> times;
  Eigen::MatrixXd states;
};

// A meta-training unit. Trajectories 0..M-1 are observed with nested
// context/target index sets; update_traj names the trajectory the scenario
// update concerns (M for a fresh forecast trajectory, < M for interpolation).
struct Episode {
  dynamics::Task task;
  Scenario scenario = Scenario::Forecast;
  std::vector<SampledTrajectory> pool;  // N_x0 simulated trajectories
  int M = 0;
  std::vector<std::vector<int>> target_idx;   // per observed trajectory
  std::vector<std::vector<int>> context_idx;  // nested inside target_idx
  int update_traj = 0;
  std::vector<int> update_context_idx;
  std::vector<int> update_target_idx;
};

// One episode per call; throws dynamics::DivergedTrajectory when any pool
// trajectory blows up (off-distribution tasks can do this).
Episode generate_episode(const EpisodeConfig& cfg, const TaskDistribution& dist,
                         const dynamics::FixedParams& fixed,
                         const dynamics::SolverSettings& solver,
                         const RecipeBounds& bounds, RngStream rng);

// Retrying wrapper: resamples diverged episodes up to cfg.max_resample times
// from forked sub-streams, then rethrows.
Episode sample_episode(const EpisodeConfig& cfg, const TaskDistribution& dist,
                       const dynamics::FixedParams& fixed,
                       const dynamics::SolverSettings& solver,
                       const RecipeBounds& bounds, const RngStream& rng);

// Columnar on-disk episode cache with a self-describing header.
void write_episode_cache(const std::string& path,
                         const std::vector<Episode>& episodes);
std::vector<Episode> read_episode_cache(const std::string& path);

// Latin hypercube design: n points in [0,1]^dims, one per stratum per axis.
std::vector<Eigen::VectorXd> latin_hypercube(int dims, int n, RngStream& rng);

inline Eigen::Vector4d state_vector(const dynamics::ReactorState& s) {
  return Eigen::Vector4d(s.B, s.P, s.S, s.V);
}

inline dynamics::ReactorState state_from_vector(const Eigen::VectorXd& v) {
  return {v(0), v(1), v(2), v(3)};
}

}  // namespace fedbo::tasking
