#pragma once

// CSV emission. Every number is written in the shortest decimal form that
// round-trips to the same double, so output is byte-stable.

#include <charconv>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include "duopoly/compromise.hpp"
#include "duopoly/income.hpp"
#include "duopoly/ode.hpp"

namespace duopoly::csv {

[[nodiscard]] inline std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

inline void write_trajectory(std::ostream& os, const ode::Trajectory& traj) {
  os << "t,V1,V2\n";
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.v[0]) << ',' << format_double(s.v[1]) << '\n';
  }
}

inline void write_income_sweep(std::ostream& os, std::span<const income::IncomeReport> rows) {
  os << "x,h1,h2,h3,total\n";
  for (const auto& r : rows) {
    os << format_double(r.x) << ',' << format_double(r.h1) << ',' << format_double(r.h2) << ','
       << format_double(r.h3) << ',' << format_double(r.total) << '\n';
  }
}

inline void write_compromise_sweep(std::ostream& os, std::span<const compromise::GridPoint> rows) {
  os << "x,h1,h2,h3,maxdev\n";
  for (const auto& p : rows) {
    os << format_double(p.x) << ',' << format_double(p.income.h1) << ',' << format_double(p.income.h2) << ','
       << format_double(p.income.h3) << ',' << format_double(p.max_deviation) << '\n';
  }
}

}  // namespace duopoly::csv
