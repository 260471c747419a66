#include "fedbo/tasking.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace fedbo::tasking {

namespace {

void to_array(const dynamics::Task& t, double out[6]) {
  out[0] = t.k_B;
  out[1] = t.k_P;
  out[2] = t.k_m;
  out[3] = t.mu_max;
  out[4] = t.rho_max;
  out[5] = t.m_S;
}

dynamics::Task from_array(const double in[6]) {
  return {in[0], in[1], in[2], in[3], in[4], in[5]};
}

}  // namespace

TaskInterval task_support(const TaskDistribution& dist) {
  double nom[6], lo[6], hi[6];
  to_array(dist.nominal, nom);
  for (int i = 0; i < 6; ++i) {
    lo[i] = (dist.delta + 1.0 - dist.window) * nom[i];
    hi[i] = (dist.delta + 1.0 + dist.window) * nom[i];
  }
  return {from_array(lo), from_array(hi)};
}

dynamics::Task sample_task(const TaskDistribution& dist, RngStream& rng) {
  if (!(dist.window > 0.0) && dist.window != 0.0) {
    throw std::invalid_argument("sample_task: window must be non-negative");
  }
  if (dist.delta + 1.0 - dist.window <= 0.0) {
    throw std::invalid_argument(
        "sample_task: offset window reaches non-positive parameter values");
  }
  double nom[6], out[6];
  to_array(dist.nominal, nom);
  for (int i = 0; i < 6; ++i) {
    const double lo = (1.0 - dist.window) * nom[i];
    const double hi = (1.0 + dist.window) * nom[i];
    out[i] = dist.delta * nom[i] + rng.uniform(lo, hi);
  }
  dynamics::Task task = from_array(out);
  if (!task.valid()) {
    throw std::invalid_argument("sample_task: sampled non-positive parameter");
  }
  return task;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> RecipeBounds::box() const {
  Eigen::VectorXd lo(6), hi(6);
  lo << B0_min, P0_min, S0_min, V0_min, F_min, t_min;
  hi << B0_max, P0_max, S0_max, V0_max, F_max, t_max;
  return {lo, hi};
}

dynamics::Recipe sample_recipe(RngStream& rng, const RecipeBounds& b) {
  dynamics::Recipe r;
  r.F = rng.uniform(b.F_min, b.F_max);
  r.B0 = rng.uniform(b.B0_min, b.B0_max);
  r.P0 = rng.uniform(b.P0_min, b.P0_max);
  r.S0 = rng.uniform(b.S0_min, b.S0_max);
  r.V0 = rng.uniform(b.V0_min, b.V0_max);
  r.t_stop = rng.uniform_open_low(0.0, b.t_max);
  return r;
}

Scenario scenario_flip(double lambda, RngStream& rng) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("scenario_flip: lambda outside [0,1]");
  }
  return rng.uniform() < lambda ? Scenario::Forecast : Scenario::Interpolate;
}

void EpisodeConfig::validate() const {
  if (M_min < 1 || M_min > M_max) throw std::invalid_argument("episode: bad M range");
  if (m_min < 1 || m_min > m_max || m_max > n_max || n_max > N_grid) {
    throw std::invalid_argument("episode: need 1 <= m_min <= m_max <= n_max <= N_grid");
  }
  if (n_min < m_min || n_min > n_max) throw std::invalid_argument("episode: bad n range");
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("episode: bad lambda");
  if (N_x0 < M_max + 1) {
    throw std::invalid_argument("episode: N_x0 must exceed M_max (forecast needs a fresh trajectory)");
  }
  if (N_sys < 1 || N_grid < 2) throw std::invalid_argument("episode: bad batch/grid size");
  if (n_o_min < 2 || n_o_min > n_o_max) throw std::invalid_argument("episode: bad n_o range");
}

namespace {

// k distinct indices from [0, n), sorted; partial Fisher-Yates.
std::vector<int> sample_indices(int n, int k, RngStream& rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = rng.uniform_int(i, n - 1);
    std::swap(all[i], all[j]);
  }
  std::vector<int> out(all.begin(), all.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

// k distinct elements of pool (already distinct), sorted.
std::vector<int> sample_subset(const std::vector<int>& pool, int k, RngStream& rng) {
  std::vector<int> work = pool;
  for (int i = 0; i < k; ++i) {
    const int j = rng.uniform_int(i, static_cast<int>(work.size()) - 1);
    std::swap(work[i], work[j]);
  }
  std::vector<int> out(work.begin(), work.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> set_difference_sorted(const std::vector<int>& a,
                                       const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

Episode generate_episode(const EpisodeConfig& cfg, const TaskDistribution& dist,
                         const dynamics::FixedParams& fixed,
                         const dynamics::SolverSettings& solver,
                         const RecipeBounds& bounds, RngStream rng) {
  cfg.validate();
  Episode ep;
  ep.task = sample_task(dist, rng);

  const std::vector<double> grid = dynamics::uniform_grid(solver.t_max, cfg.N_grid);
  ep.pool.reserve(cfg.N_x0);
  for (int i = 0; i < cfg.N_x0; ++i) {
    dynamics::Recipe rec = sample_recipe(rng, bounds);
    rec.t_stop = solver.t_max;  // training trajectories span the full grid
    const dynamics::Trajectory traj = dynamics::simulate(rec, ep.task, fixed, grid, solver);
    SampledTrajectory st;
    st.x0 = state_vector(traj.states[0]);
    st.times = traj.times;
    st.states.resize(4, cfg.N_grid);
    for (int j = 0; j < cfg.N_grid; ++j) st.states.col(j) = state_vector(traj.states[j]);
    ep.pool.push_back(std::move(st));
  }

  ep.M = rng.uniform_int(cfg.M_min, std::min(cfg.M_max, cfg.N_x0 - 1));
  ep.scenario = scenario_flip(cfg.lambda, rng);

  ep.target_idx.resize(ep.M);
  ep.context_idx.resize(ep.M);
  for (int l = 0; l < ep.M; ++l) {
    const int n_l = rng.uniform_int(cfg.n_min, std::min(cfg.n_max, cfg.N_grid));
    ep.target_idx[l] = sample_indices(cfg.N_grid, n_l, rng);
    const int m_l = rng.uniform_int(cfg.m_min, std::min(cfg.m_max, n_l));
    ep.context_idx[l] = sample_subset(ep.target_idx[l], m_l, rng);
  }

  if (ep.scenario == Scenario::Forecast) {
    ep.update_traj = ep.M;  // fresh trajectory from the pool
    ep.update_context_idx = {0};
    const int n_u = rng.uniform_int(cfg.n_min, std::min(cfg.n_max, cfg.N_grid));
    ep.update_target_idx = sample_indices(cfg.N_grid, n_u, rng);
  } else {
    const int u = rng.uniform_int(0, ep.M - 1);
    ep.update_traj = u;
    const int n_o = rng.uniform_int(cfg.n_o_min, cfg.n_o_max);
    std::vector<int> avail = set_difference_sorted(ep.target_idx[u], ep.context_idx[u]);
    // Grow the target superset until it has room for the update observations.
    std::vector<int> complement;
    for (int j = 0, need = n_o - static_cast<int>(avail.size()); need > 0; ++j) {
      if (complement.empty()) {
        std::vector<int> everything(cfg.N_grid);
        std::iota(everything.begin(), everything.end(), 0);
        complement = set_difference_sorted(everything, ep.target_idx[u]);
        if (static_cast<int>(complement.size()) < need) {
          throw std::invalid_argument("generate_episode: grid too small for update");
        }
        std::vector<int> extra = sample_subset(complement, need, rng);
        ep.target_idx[u].insert(ep.target_idx[u].end(), extra.begin(), extra.end());
        std::sort(ep.target_idx[u].begin(), ep.target_idx[u].end());
        avail.insert(avail.end(), extra.begin(), extra.end());
        std::sort(avail.begin(), avail.end());
        need = 0;
      }
    }
    ep.update_context_idx = sample_subset(avail, n_o, rng);
    ep.update_target_idx = ep.target_idx[u];
  }
  return ep;
}

Episode sample_episode(const EpisodeConfig& cfg, const TaskDistribution& dist,
                       const dynamics::FixedParams& fixed,
                       const dynamics::SolverSettings& solver,
                       const RecipeBounds& bounds, const RngStream& rng) {
  for (int attempt = 0;; ++attempt) {
    try {
      return generate_episode(cfg, dist, fixed, solver, bounds,
                              rng.fork(static_cast<std::uint64_t>(attempt)));
    } catch (const dynamics::DivergedTrajectory&) {
      if (attempt >= cfg.max_resample) throw;
    }
  }
}

namespace {

constexpr char kCacheMagic[8] = {'F', 'B', 'E', 'P', 'C', 'A', 'C', 'H'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("episode cache: truncated file");
  return v;
}

void put_indices(std::ostream& os, const std::vector<int>& idx) {
  put<std::uint32_t>(os, static_cast<std::uint32_t>(idx.size()));
  for (int i : idx) put<std::int32_t>(os, i);
}

std::vector<int> get_indices(std::istream& is) {
  const auto n = get<std::uint32_t>(is);
  std::vector<int> idx(n);
  for (auto& i : idx) i = get<std::int32_t>(is);
  return idx;
}

}  // namespace

void write_episode_cache(const std::string& path,
                         const std::vector<Episode>& episodes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("episode cache: cannot open " + path);
  os.write(kCacheMagic, sizeof(kCacheMagic));
  put<std::uint32_t>(os, 1u);  // schema version
  const std::uint32_t d_x = episodes.empty() ? 0u
      : static_cast<std::uint32_t>(episodes.front().pool.front().x0.size());
  const std::uint32_t n_grid = episodes.empty() ? 0u
      : static_cast<std::uint32_t>(episodes.front().pool.front().times.size());
  put(os, d_x);
  put(os, n_grid);
  put<std::uint64_t>(os, episodes.size());
  for (const Episode& ep : episodes) {
    double k[6];
    to_array(ep.task, k);
    for (double v : k) put(os, v);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(ep.scenario));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(ep.M));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(ep.pool.size()));
    for (const SampledTrajectory& st : ep.pool) {
      for (int i = 0; i < st.x0.size(); ++i) put(os, st.x0(i));
      for (double t : st.times) put(os, t);
      os.write(reinterpret_cast<const char*>(st.states.data()),
               static_cast<std::streamsize>(sizeof(double) * st.states.size()));
    }
    for (const auto& idx : ep.target_idx) put_indices(os, idx);
    for (const auto& idx : ep.context_idx) put_indices(os, idx);
    put<std::int32_t>(os, ep.update_traj);
    put_indices(os, ep.update_context_idx);
    put_indices(os, ep.update_target_idx);
  }
  if (!os) throw std::runtime_error("episode cache: write failed");
}

std::vector<Episode> read_episode_cache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("episode cache: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("episode cache: bad magic");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != 1) throw std::runtime_error("episode cache: unsupported version");
  const auto d_x = get<std::uint32_t>(is);
  const auto n_grid = get<std::uint32_t>(is);
  const auto n_eps = get<std::uint64_t>(is);
  std::vector<Episode> episodes(n_eps);
  for (Episode& ep : episodes) {
    double k[6];
    for (double& v : k) v = get<double>(is);
    ep.task = from_array(k);
    ep.scenario = static_cast<Scenario>(get<std::uint8_t>(is));
    ep.M = static_cast<int>(get<std::uint32_t>(is));
    const auto pool_size = get<std::uint32_t>(is);
    ep.pool.resize(pool_size);
    for (SampledTrajectory& st : ep.pool) {
      st.x0.resize(d_x);
      for (std::uint32_t i = 0; i < d_x; ++i) st.x0(i) = get<double>(is);
      st.times.resize(n_grid);
      for (double& t : st.times) t = get<double>(is);
      st.states.resize(d_x, n_grid);
      is.read(reinterpret_cast<char*>(st.states.data()),
              static_cast<std::streamsize>(sizeof(double) * st.states.size()));
      if (!is) throw std::runtime_error("episode cache: truncated states");
    }
    ep.target_idx.resize(ep.M);
    ep.context_idx.resize(ep.M);
    for (auto& idx : ep.target_idx) idx = get_indices(is);
    for (auto& idx : ep.context_idx) idx = get_indices(is);
    ep.update_traj = get<std::int32_t>(is);
    ep.update_context_idx = get_indices(is);
    ep.update_target_idx = get_indices(is);
  }
  return episodes;
}

std::vector<Eigen::VectorXd> latin_hypercube(int dims, int n, RngStream& rng) {
  std::vector<Eigen::VectorXd> pts(n, Eigen::VectorXd(dims));
  for (int d = 0; d < dims; ++d) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    }
    for (int i = 0; i < n; ++i) {
      pts[i](d) = (perm[i] + rng.uniform()) / n;
    }
  }
  return pts;
}

}  // namespace fedbo::tasking
