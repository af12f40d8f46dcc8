#include "mcwlan/dcf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcwlan/errors.hpp"

namespace mcwlan {

namespace {

constexpr double kFixedPointTol = 1e-10;
constexpr double kDamping = 0.5;
constexpr int kMaxIterations = 10000;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string("mac.") + name + " must be positive");
}

}  // namespace

void MacParams::validate() const {
  require_positive(slot_time, "slot_time");
  require_positive(sifs, "sifs");
  require_positive(difs, "difs");
  require_positive(phy_header_time, "phy_header_time");
  require_positive(data_rate, "data_rate");
  require_positive(control_rate, "control_rate");
  require_positive(payload_bits, "payload_bits");
  require_positive(tcp_data_bits, "tcp_data_bits");
  require_positive(tcp_ack_bits, "tcp_ack_bits");
  if (mac_header_bits < 0 || ack_bits < 0 || rts_bits < 0 || cts_bits < 0)
    throw ConfigError("mac header/frame sizes must be non-negative");
  if (cw_min < 2) throw ConfigError("mac.cw_min must be at least 2");
  if (backoff_doubling_cap < 0 || backoff_doubling_cap > 30)
    throw ConfigError("mac.backoff_doubling_cap must be in 0..30");
  if (retry_limit < 0 || retry_limit > 1000)
    throw ConfigError("mac.retry_limit must be in 0..1000");
}

std::vector<double> mean_backoffs(const MacParams& p) {
  const double shift =
      p.backoff_convention == BackoffConvention::half_window_minus_one ? 1.0 : 0.0;
  std::vector<double> b(static_cast<std::size_t>(p.retry_limit) + 1);
  for (int k = 0; k <= p.retry_limit; ++k) {
    const double w = std::ldexp(static_cast<double>(p.cw_min),
                                std::min(k, p.backoff_doubling_cap));
    b[k] = (w - shift) / 2.0;
  }
  return b;
}

double attempt_prob_G(double gamma, std::span<const double> b) {
  double num = 0.0, den = 0.0, g = 1.0;
  for (double bk : b) {
    num += g;
    den += g * bk;
    g *= gamma;
  }
  return num / den;
}

double attempt_prob_G(double gamma, const MacParams& p) {
  const auto b = mean_backoffs(p);
  return attempt_prob_G(gamma, b);
}

FrameDurations frame_durations(const MacParams& p) {
  const double hdr_rate = p.mac_header_at_control_rate ? p.control_rate : p.data_rate;
  const double t_data =
      p.phy_header_time + p.mac_header_bits / hdr_rate + p.payload_bits / p.data_rate;
  const double t_ack = p.phy_header_time + p.ack_bits / p.control_rate;
  if (p.access_mode == AccessMode::basic)
    return {t_data + p.sifs + t_ack + p.difs, t_data + p.difs};
  const double t_rts = p.phy_header_time + p.rts_bits / p.control_rate;
  const double t_cts = p.phy_header_time + p.cts_bits / p.control_rate;
  return {t_rts + p.sifs + t_cts + p.sifs + t_data + p.sifs + t_ack + p.difs,
          t_rts + p.difs};
}

SingleCellResult single_cell_fixed_point(int n, const MacParams& p) {
  if (n < 1) throw ConfigError("a cell needs at least one node");
  const auto b = mean_backoffs(p);
  auto closure = [n](double beta) { return 1.0 - std::pow(1.0 - beta, n - 1); };

  double beta = attempt_prob_G(0.0, b);
  for (int it = 1; it <= kMaxIterations; ++it) {
    const double next =
        (1.0 - kDamping) * beta + kDamping * attempt_prob_G(closure(beta), b);
    const double delta = std::abs(next - beta);
    beta = next;
    if (delta < kFixedPointTol) return {beta, closure(beta), 0.0, 0.0, it};
  }
  const double r = std::abs(beta - attempt_prob_G(closure(beta), b));
  throw ConvergenceError("single-cell fixed point did not converge for n=" +
                             std::to_string(n),
                         r, {r});
}

namespace {

double renewal_throughput(int n, double beta, double sigma, FrameDurations t) {
  const double p_idle = std::pow(1.0 - beta, n);
  const double p_tr = 1.0 - p_idle;
  const double p_succ = n * beta * std::pow(1.0 - beta, n - 1);  // P_tr * P_s
  return p_succ / (p_idle * sigma + p_succ * t.t_s + (p_tr - p_succ) * t.t_c);
}

}  // namespace

SingleCellResult single_cell_analysis(int n, const MacParams& p) {
  p.validate();
  SingleCellResult r = single_cell_fixed_point(n, p);
  r.cell_throughput_pps = renewal_throughput(n, r.beta, p.slot_time, frame_durations(p));
  r.node_throughput_pps = r.cell_throughput_pps / n;
  return r;
}

double single_cell_throughput(int n, const MacParams& p) {
  return single_cell_analysis(n, p).cell_throughput_pps;
}

TcpEquivalent tcp_equivalent_cell(const MacParams& p) {
  TcpEquivalent eq;
  eq.params = p;
  eq.params.payload_bits = (p.tcp_data_bits + p.tcp_ack_bits) / 2.0;
  return eq;
}

}  // namespace mcwlan
