#include <algorithm>
#include <cmath>
#include <string>

#include "mcwlan/assign.hpp"
#include "mcwlan/errors.hpp"

namespace mcwlan {

namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ChannelAssignment argmax_rows(const LAState& s) {
  ChannelAssignment c{std::vector<int>(s.n_cells), s.M};
  for (int i = 0; i < s.n_cells; ++i) {
    const auto row = s.P.begin() + static_cast<std::ptrdiff_t>(i) * s.M;
    c.channels[i] = static_cast<int>(std::max_element(row, row + s.M) - row) + 1;
  }
  return c;
}

bool all_rows_pure(const LAState& s, double threshold) {
  for (int i = 0; i < s.n_cells; ++i) {
    const auto row = s.P.begin() + static_cast<std::ptrdiff_t>(i) * s.M;
    if (*std::max_element(row, row + s.M) <= 1.0 - threshold) return false;
  }
  return true;
}

}  // namespace

LAState LAState::uniform(int n_cells, int M, double b) {
  if (n_cells < 1 || M < 1) throw ConfigError("automaton needs N >= 1 and M >= 1");
  LAState s;
  s.n_cells = n_cells;
  s.M = M;
  s.b = b;
  s.P.assign(static_cast<std::size_t>(n_cells) * M, 1.0 / M);
  return s;
}

LAState LAState::biased(const ChannelAssignment& toward, double weight, double b) {
  const int n = static_cast<int>(toward.channels.size());
  LAState s = uniform(n, toward.M, b);
  if (!(weight >= 0.0 && weight <= 1.0)) throw ConfigError("bias weight must be in [0,1]");
  if (toward.M == 1) return s;
  const double rest = (1.0 - weight) / (toward.M - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= toward.M; ++j)
      s.P[i * toward.M + (j - 1)] = j == toward.channels[i] ? weight : rest;
  return s;
}

LriStep lri_step(LAState& s, const Utility& utility, std::mt19937_64& rng) {
  LriStep out;
  out.sampled = {std::vector<int>(s.n_cells), s.M};
  for (int i = 0; i < s.n_cells; ++i) {
    const double u = unit_interval(rng);
    double cum = 0.0;
    int pick = s.M;
    for (int j = 1; j <= s.M; ++j) {
      cum += s.P[i * s.M + (j - 1)];
      if (u < cum) {
        pick = j;
        break;
      }
    }
    out.sampled.channels[i] = pick;
  }
  out.utility = utility(out.sampled);
  if (!(out.utility >= 0.0 && out.utility <= 1.0))
    throw ConfigError("learning utility must lie in [0,1], got " +
                      std::to_string(out.utility));

  const double step = s.b * out.utility;
  if (step > 0.0) {
    for (int i = 0; i < s.n_cells; ++i) {
      double* row = s.P.data() + static_cast<std::ptrdiff_t>(i) * s.M;
      double sum = 0.0;
      for (int j = 1; j <= s.M; ++j) {
        const double target = j == out.sampled.channels[i] ? 1.0 : 0.0;
        row[j - 1] += step * (target - row[j - 1]);
        row[j - 1] = std::clamp(row[j - 1], 0.0, 1.0);
        sum += row[j - 1];
      }
      // The update preserves the row sum exactly in real arithmetic; this
      // stops rounding drift over millions of steps.
      for (int j = 0; j < s.M; ++j) row[j] /= sum;
    }
  }
  ++s.step;
  return out;
}

LriResult run_lri(const ContentionGraph& physical, const Utility& utility,
                  const LriOptions& opt) {
  if (!(opt.b > 0.0 && opt.b < 1.0)) throw ConfigError("learning parameter b must be in (0,1)");
  if (opt.M < 1) throw ConfigError("number of channels must be at least 1");
  LAState s = opt.init ? *opt.init : LAState::uniform(physical.n_cells(), opt.M, opt.b);
  if (s.n_cells != physical.n_cells() || s.M != opt.M)
    throw ConfigError("initial automaton state does not match N x M");
  s.b = opt.b;

  std::mt19937_64 rng(opt.seed);
  LriResult r;
  while (s.step < opt.max_steps && !all_rows_pure(s, opt.convergence_threshold)) {
    const LriStep st = lri_step(s, utility, rng);
    if (opt.record_trace) r.trace.push_back(st.utility);
  }
  r.converged = all_rows_pure(s, opt.convergence_threshold);
  r.steps = s.step;
  r.assignment = argmax_rows(s);
  r.utility = utility(r.assignment);
  r.final_state = std::move(s);
  return r;
}

}  // namespace mcwlan
