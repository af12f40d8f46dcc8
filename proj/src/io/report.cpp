#include "mcwlan/report.hpp"

#include <cstdio>

#include "mcwlan/config.hpp"
#include "mcwlan/kernels.hpp"

namespace mcwlan {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string state_label(VertexMask s) {
  if (!s) return "{}";
  std::string out;
  for (int id : mask_to_ids(s)) {
    if (!out.empty()) out += '+';
    out += std::to_string(id);
  }
  return out;
}

void write_cells_csv(std::ostream& out, const FixedPointSolution& sol) {
  out << "cell,n,beta,gamma,lambda,mu_inv,rho,x,x_theorem1,Theta,theta,x_inf,"
         "theta_inf,starved\n";
  for (std::size_t i = 0; i < sol.beta.size(); ++i) {
    out << i + 1 << ',' << sol.n_eff[i] << ',' << format_number(sol.beta[i]) << ','
        << format_number(sol.gamma[i]) << ',' << format_number(sol.lambda[i]) << ','
        << format_number(sol.mu_inv[i]) << ',' << format_number(sol.rho[i]) << ','
        << format_number(sol.x[i]) << ',' << format_number(sol.x_theorem1[i]) << ','
        << format_number(sol.theta_cell[i]) << ',' << format_number(sol.theta_node[i])
        << ',' << format_number(sol.x_inf[i]) << ','
        << format_number(sol.theta_node_inf[i]) << ',' << (sol.starved[i] ? 1 : 0)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const FixedPointSolution& sol,
                       TrafficMode traffic) {
  out << "key,value\n"
      << "theta_bar," << format_number(sol.theta_bar) << '\n'
      << "theta_bar_inf," << format_number(sol.theta_bar_inf) << '\n'
      << "alpha," << sol.family.alpha << '\n'
      << "eta," << sol.family.eta << '\n'
      << "jain," << format_number(sol.jain) << '\n'
      << "states," << sol.family.states.size() << '\n'
      << "iterations," << sol.iterations << '\n'
      << "residual," << format_number(sol.residual) << '\n'
      << "traffic," << traffic_name(traffic) << '\n'
      << "kernels," << kernels::active_kernels().name << '\n';
}

void write_markdown_report(std::ostream& out, const std::string& title,
                           const FixedPointSolution& sol, TrafficMode traffic) {
  const bool tcp = traffic == TrafficMode::tcp_download;
  out << "# " << title << "\n\n";
  out << "Traffic: " << (tcp ? "TCP download (AP columns)" : "saturated") << "\n\n";
  out << "| Cell | n | gamma | x | theta (pkts/s) | x_inf | theta_inf (pkts/s) |\n"
      << "|---:|---:|---:|---:|---:|---:|---:|\n";
  char buf[256];
  for (std::size_t i = 0; i < sol.beta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "| %zu%s | %d | %.4f | %.4f | %.2f | %.4f | %.2f |\n",
                  i + 1, sol.starved[i] ? "*" : "", sol.n_eff[i], sol.gamma[i],
                  sol.x[i], sol.theta_node[i], sol.x_inf[i], sol.theta_node_inf[i]);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "\nTheta_bar = %.4f (large-rho limit %.0f), J = %.4f, alpha = %d, "
                "eta = %llu, %d iterations, residual %.2e\n",
                sol.theta_bar, sol.theta_bar_inf, sol.jain, sol.family.alpha,
                static_cast<unsigned long long>(sol.family.eta), sol.iterations,
                sol.residual);
  out << buf;
  bool any = false;
  for (bool s : sol.starved) any = any || s;
  if (any) out << "\n`*` starved: the cell is essentially never in backoff; gamma is reported as 1.\n";
}

void write_sim_csv(std::ostream& out, const SimEstimate& est,
                   std::span<const double> x_model) {
  out << "cell,x_hat,x_se,x_model\n";
  for (std::size_t i = 0; i < est.x_hat.size(); ++i)
    out << i + 1 << ',' << format_number(est.x_hat[i]) << ','
        << format_number(est.x_se[i]) << ','
        << (i < x_model.size() ? format_number(x_model[i]) : "") << '\n';
}

void write_states_csv(std::ostream& out, const SimEstimate& est,
                      std::span<const double> pi_model) {
  out << "state,pi_hat,pi_se,pi_model\n";
  for (std::size_t s = 0; s < est.states.size(); ++s)
    out << state_label(est.states[s]) << ',' << format_number(est.pi_hat[s]) << ','
        << format_number(est.pi_se[s]) << ','
        << (s < pi_model.size() ? format_number(pi_model[s]) : "") << '\n';
}

void write_trace_csv(std::ostream& out, std::span<const double> trace) {
  out << "step,utility\n";
  for (std::size_t k = 0; k < trace.size(); ++k)
    out << k + 1 << ',' << format_number(trace[k]) << '\n';
}

}  // namespace mcwlan
