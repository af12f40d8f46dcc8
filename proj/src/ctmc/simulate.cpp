#include "mcwlan/ctmc_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>

#include "mcwlan/errors.hpp"
#include "mcwlan/multicell.hpp"

namespace mcwlan {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// 53 random bits to (0, 1]; avoids the implementation-defined
// std::uniform_real_distribution so runs agree across standard libraries.
double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double exp_sample(std::mt19937_64& rng, double rate) {
  return -std::log(unit_open(rng)) / rate;
}

void check_rates(const ContentionGraph& g, std::span<const double> lambda,
                 std::span<const double> mu) {
  const auto n = static_cast<std::size_t>(g.n_cells());
  if (lambda.size() != n || mu.size() != n)
    throw ConfigError("rate vectors must have one entry per cell");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lambda[i] >= 0.0) || !std::isfinite(lambda[i]))
      throw ConfigError("activation rates must be finite and non-negative");
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i]))
      throw ConfigError("deactivation rates must be finite and positive");
  }
}

}  // namespace

double stationary_event_rate(const ContentionGraph& g,
                             std::span<const double> lambda,
                             std::span<const double> mu,
                             const EnumerationBudget& budget) {
  check_rates(g, lambda, mu);
  const IndependentSetFamily fam = enumerate_state_space(g, budget);
  std::vector<double> rho(lambda.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = lambda[i] / mu[i];
  const auto pi = stationary_distribution(fam, rho);
  double rate = 0.0;
  for (std::size_t s = 0; s < fam.states.size(); ++s) {
    double out = 0.0;
    for (int j : mask_to_ids(fam.backoff[s])) out += lambda[j - 1];
    for (int j : mask_to_ids(fam.states[s])) out += mu[j - 1];
    rate += pi[s] * out;
  }
  return rate;
}

SimEstimate simulate(const ContentionGraph& g, std::span<const double> lambda,
                     std::span<const double> mu, const SimConfig& cfg) {
  check_rates(g, lambda, mu);
  if (!(cfg.horizon > 0.0)) throw ConfigError("simulation horizon must be positive");
  if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0))
    throw ConfigError("warmup fraction must be in [0, 1)");
  if (cfg.batches < 2) throw ConfigError("need at least two batches");

  const IndependentSetFamily fam = enumerate_state_space(g, cfg.budget);
  std::unordered_map<VertexMask, std::size_t> index;
  index.reserve(fam.states.size() * 2);
  for (std::size_t s = 0; s < fam.states.size(); ++s) index.emplace(fam.states[s], s);

  const int n = g.n_cells();
  const auto& adj = g.adjacency();
  const VertexMask universe = g.vertices();

  // Per-cell substreams so one cell's draws never shift another's.
  std::vector<std::mt19937_64> streams;
  streams.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(i + 1)};
    streams.emplace_back(seq);
  }

  const double t0 = cfg.warmup_fraction * cfg.horizon;
  const double batch_len = (cfg.horizon - t0) / cfg.batches;
  const std::size_t S = fam.states.size();
  // occupancy[b * S + s]: time spent in state s during batch b.
  std::vector<double> occupancy(static_cast<std::size_t>(cfg.batches) * S, 0.0);

  auto record = [&](std::size_t s, double from, double to) {
    from = std::max(from, t0);
    if (to <= from) return;
    while (from < to) {
      int b = std::min(cfg.batches - 1, static_cast<int>((from - t0) / batch_len));
      while (b + 1 < cfg.batches && t0 + (b + 1) * batch_len <= from) ++b;
      const double end = std::min(to, b + 1 == cfg.batches
                                          ? cfg.horizon
                                          : t0 + (b + 1) * batch_len);
      occupancy[static_cast<std::size_t>(b) * S + s] += end - from;
      from = end;
    }
  };

  std::vector<double> activate_at(n, kNever), release_at(n, kNever);
  VertexMask active = 0;
  auto unblocked_idle = [&] {
    VertexMask nb = 0;
    for (VertexMask m = active; m; m &= m - 1) nb |= adj[std::countr_zero(m)];
    return universe & ~active & ~nb;
  };
  auto arm = [&](VertexMask cells, double now) {
    for (VertexMask m = cells; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      activate_at[j] = lambda[j] > 0.0 ? now + exp_sample(streams[j], lambda[j]) : kNever;
    }
  };

  double now = 0.0;
  VertexMask idle = unblocked_idle();
  arm(idle, now);
  SimEstimate est;
  while (true) {
    int who = -1;
    double next = kNever;
    for (int j = 0; j < n; ++j) {
      const double tj = std::min(activate_at[j], release_at[j]);
      if (tj < next) {
        next = tj;
        who = j;
      }
    }
    if (who < 0)
      throw ConfigError("simulation reached a state with zero total rate");
    const std::size_t s = index.at(active);
    if (next >= cfg.horizon) {
      record(s, now, cfg.horizon);
      break;
    }
    record(s, now, next);
    now = next;
    ++est.total_events;

    const VertexMask bit = VertexMask{1} << who;
    if (active & bit) {
      active &= ~bit;
      release_at[who] = kNever;
    } else {
      active |= bit;
      activate_at[who] = kNever;
      const double mean = 1.0 / mu[who];
      release_at[who] = now + (cfg.active_time == ActiveTimeDistribution::exponential
                                   ? exp_sample(streams[who], mu[who])
                                   : mean);
    }
    const VertexMask idle_now = unblocked_idle();
    for (VertexMask m = idle & ~idle_now; m; m &= m - 1)
      activate_at[std::countr_zero(m)] = kNever;
    arm(idle_now & ~idle, now);
    idle = idle_now;
  }

  // Time-weighted estimates plus batch-means standard errors.
  const double observed = cfg.horizon - t0;
  est.states = fam.states;
  est.observed_time = observed;
  est.pi_hat.assign(S, 0.0);
  est.pi_se.assign(S, 0.0);
  est.x_hat.assign(n, 0.0);
  est.x_se.assign(n, 0.0);
  const double B = cfg.batches;
  std::vector<double> xb(static_cast<std::size_t>(cfg.batches) * n, 0.0);
  for (int b = 0; b < cfg.batches; ++b) {
    for (std::size_t s = 0; s < S; ++s) {
      const double frac = occupancy[b * S + s] / batch_len;
      est.pi_hat[s] += occupancy[b * S + s];
      for (int i = 0; i < n; ++i)
        if (universe & (VertexMask{1} << i) && !(fam.states[s] & adj[i]))
          xb[static_cast<std::size_t>(b) * n + i] += frac;
    }
  }
  for (std::size_t s = 0; s < S; ++s) est.pi_hat[s] /= observed;
  for (std::size_t s = 0; s < S; ++s) {
    double ss = 0.0;
    for (int b = 0; b < cfg.batches; ++b) {
      const double d = occupancy[b * S + s] / batch_len - est.pi_hat[s];
      ss += d * d;
    }
    est.pi_se[s] = std::sqrt(ss / (B - 1.0) / B);
  }
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int b = 0; b < cfg.batches; ++b) mean += xb[static_cast<std::size_t>(b) * n + i];
    mean /= B;
    double ss = 0.0;
    for (int b = 0; b < cfg.batches; ++b) {
      const double d = xb[static_cast<std::size_t>(b) * n + i] - mean;
      ss += d * d;
    }
    est.x_hat[i] = mean;
    est.x_se[i] = std::sqrt(ss / (B - 1.0) / B);
  }
  return est;
}

}  // namespace mcwlan
