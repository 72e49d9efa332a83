#include "sspc/trace_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace sspc {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

std::string trace_csv_header(int n_x, int n_u) {
  std::string h = "k,t";
  for (int i = 0; i < n_x; ++i) h += ",x_" + std::to_string(i);
  for (int i = 0; i < n_u; ++i) h += ",u_" + std::to_string(i);
  h += ",residual,cost,max_violation,subopt_err,ell,step_wall_s";
  return h;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out, bool include_wall_time) {
  out << trace_csv_header(trace.n_x, trace.n_u) << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_double(r.t);
    for (double v : r.x) out << ',' << format_double(v);
    for (double v : r.u) out << ',' << format_double(v);
    out << ',' << format_double(r.residual) << ',' << format_double(r.cost) << ','
        << format_double(r.max_violation) << ',';
    if (r.subopt_err) out << format_double(*r.subopt_err);
    out << ',' << r.ell << ',';
    if (include_wall_time) out << format_double(r.step_wall_s);
    out << '\n';
  }
}

}  // namespace sspc
