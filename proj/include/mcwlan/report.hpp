#pragma once

// Output writers. CSV is the machine interface; column names are fixed:
//
// cells.csv   cell,n,beta,gamma,lambda,mu_inv,rho,x,x_theorem1,Theta,theta,
//             x_inf,theta_inf,starved
// summary.csv key,value  (theta_bar, theta_bar_inf, alpha, eta, jain,
//             iterations, residual, traffic, kernels)
// sim.csv     cell,x_hat,x_se,x_model
// states.csv  state,pi_hat,pi_se,pi_model   (state as ids joined by '+',
//             the empty set as "{}")
// sweep.csv   value,cell,gamma,x,x_inf
// trace.csv   step,utility

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mcwlan/ctmc_sim.hpp"
#include "mcwlan/multicell.hpp"

namespace mcwlan {

std::string format_number(double v);
std::string state_label(VertexMask s);

void write_cells_csv(std::ostream& out, const FixedPointSolution& sol);
void write_summary_csv(std::ostream& out, const FixedPointSolution& sol,
                       TrafficMode traffic);
void write_markdown_report(std::ostream& out, const std::string& title,
                           const FixedPointSolution& sol, TrafficMode traffic);

void write_sim_csv(std::ostream& out, const SimEstimate& est,
                   std::span<const double> x_model);
void write_states_csv(std::ostream& out, const SimEstimate& est,
                      std::span<const double> pi_model);

void write_trace_csv(std::ostream& out, std::span<const double> trace);

}  // namespace mcwlan
