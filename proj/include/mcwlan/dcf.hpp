#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mcwlan {

enum class AccessMode { basic, rtscts };

// Mean backoff (slots) after k collisions, with W_k = 2^min(k,m) * W0:
//   half_window            b_k = W_k / 2
//   half_window_minus_one  b_k = (W_k - 1) / 2
enum class BackoffConvention { half_window, half_window_minus_one };

// Defaults: 802.11b DSSS long preamble, 11 Mbps data, 1000-byte payload.
// Control frames (ACK/RTS/CTS) go at control_rate; the MAC header goes at
// data_rate unless mac_header_at_control_rate is set.
struct MacParams {
  double slot_time = 20e-6;
  double sifs = 10e-6;
  double difs = 50e-6;
  double phy_header_time = 192e-6;
  double mac_header_bits = 224;
  double ack_bits = 112;
  double rts_bits = 160;
  double cts_bits = 112;
  double data_rate = 11e6;
  double control_rate = 2e6;
  bool mac_header_at_control_rate = false;
  double payload_bits = 8000;
  // TCP download mode: DATA segment and ACK sizes, IP/TCP headers included.
  double tcp_data_bits = 8320;
  double tcp_ack_bits = 320;
  int cw_min = 32;
  int backoff_doubling_cap = 5;
  int retry_limit = 7;
  AccessMode access_mode = AccessMode::basic;
  BackoffConvention backoff_convention = BackoffConvention::half_window;

  bool operator==(const MacParams&) const = default;

  // Throws ConfigError on non-positive times/rates, K < 0, W0 < 2, m < 0.
  void validate() const;
};

// b_k for k = 0..K.
std::vector<double> mean_backoffs(const MacParams& p);

// Attempt probability per backoff slot given collision probability gamma.
double attempt_prob_G(double gamma, std::span<const double> b);
double attempt_prob_G(double gamma, const MacParams& p);

struct FrameDurations {
  double t_s = 0.0;  // channel time of a success
  double t_c = 0.0;  // channel time of a collision
};
FrameDurations frame_durations(const MacParams& p);

struct SingleCellResult {
  double beta = 0.0;
  double gamma = 0.0;
  double cell_throughput_pps = 0.0;  // all nodes together
  double node_throughput_pps = 0.0;  // cell / n
  int iterations = 0;
};

// Solves beta = G(gamma), gamma = 1 - (1 - beta)^(n-1). Throughput fields
// are left at zero; single_cell_analysis fills them.
SingleCellResult single_cell_fixed_point(int n, const MacParams& p);
SingleCellResult single_cell_analysis(int n, const MacParams& p);

// Aggregate saturation throughput of an isolated n-node cell, packets/s.
double single_cell_throughput(int n, const MacParams& p);

// TCP download cell as two saturated nodes (AP and one STA aggregate) with
// the mean of the DATA and ACK sizes as payload.
struct TcpEquivalent {
  int n_eff = 2;
  MacParams params;
};
TcpEquivalent tcp_equivalent_cell(const MacParams& p);

}  // namespace mcwlan
