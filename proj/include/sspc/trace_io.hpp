#pragma once

#include "sspc/closed_loop_sim.hpp"

#include <ostream>
#include <string>

namespace sspc {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// k,t,x_0..x_{n_x-1},u_0..u_{n_u-1},residual,cost,max_violation,subopt_err,ell,step_wall_s
std::string trace_csv_header(int n_x, int n_u);

/// Writes the header and one row per record. subopt_err is left empty when
/// not recorded, step_wall_s unless `include_wall_time`.
void write_trace_csv(const SimTrace& trace, std::ostream& out, bool include_wall_time = false);

}  // namespace sspc
